#pragma once

// Scenario files, grid specs and the `leo` command line.

#include "leo/simulator.hpp"

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace leo::cli {

enum ExitCode : int { kOk = 0, kConfigError = 1, kSimulationError = 2, kVerifyFailed = 3 };

/// Bad scenario file, flag or grid. The message names the offending key.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Scenario from JSON text. Missing keys take the default scenario's values;
/// unknown keys and wrongly typed values are rejected.
[[nodiscard]] sim::Scenario parse_scenario(std::string_view json_text);
[[nodiscard]] sim::Scenario load_scenario(const std::filesystem::path& path);

/// JSON text that parse_scenario turns back into an identical scenario.
[[nodiscard]] std::string dump_scenario(const sim::Scenario& scenario);

/// Either a comma-separated list ("0.1,0.4,2") or "lo:hi:count" with an
/// optional ":log" suffix for geometric spacing.
[[nodiscard]] std::vector<double> parse_grid(std::string_view spec);
[[nodiscard]] std::vector<sim::Scheme> parse_scheme_list(std::string_view spec);

/// Default sweep grid: six data volumes from 16 bits to 2 GB and six
/// computational requirements from 1 to 2000 GFLO, including (0.4 GB, 1000).
inline constexpr std::string_view kDefaultDataGridGB = "2e-9,1e-6,1e-3,0.1,0.4,2";
inline constexpr std::string_view kDefaultComputeGrid = "1,10,100,500,1000,2000";
inline constexpr std::string_view kDefaultCapabilities = "127,200,590,1000";

struct VerifyOptions {
    bool inject_negative_weight = false;  // mutation check: the suite must fail
};

/// Runs the embedded property suites, printing one line per suite.
int cmd_verify(const VerifyOptions& options, std::ostream& out);

/// Entire command line (argv[0] included). Never throws; returns the exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace leo::cli
