#include "leo/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>

namespace leo::cli {

namespace {

namespace fs = std::filesystem;

struct Common {
    std::string scenario_path;
    std::optional<std::uint64_t> seed;
    int jobs = 1;
    std::string out_dir;
};

sim::Scenario load(const Common& c) {
    auto s = c.scenario_path.empty() ? sim::default_scenario() : load_scenario(c.scenario_path);
    if (c.seed) s.seed = *c.seed;
    return s;
}

std::ofstream open_output(const std::string& dir, const char* name) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    const auto path = fs::path(dir) / name;
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write '" + path.string() + "'");
    return out;
}

std::vector<double> positive_grid(const std::string& spec, const char* flag, double scale, bool allow_zero) {
    auto values = parse_grid(spec);
    for (auto& v : values) {
        if (v < 0.0 || (!allow_zero && v == 0.0)) {
            throw ConfigError(std::string(flag) + ": values must be " + (allow_zero ? "nonnegative" : "positive"));
        }
        v *= scale;
    }
    return values;
}

int cmd_run(const Common& c, const std::optional<std::string>& scheme, std::ostream& out) {
    auto s = load(c);
    if (scheme) s.scheme = parse_scheme_list(*scheme).front();
    const auto report = sim::run(s);
    auto json = open_output(c.out_dir, "report.json");
    sim::write_report_json(json, report);
    auto csv = open_output(c.out_dir, "tasks.csv");
    sim::write_tasks_csv(csv, report);

    const auto& b = report.mean_breakdown;
    out << std::fixed << std::setprecision(4) << offload::to_string(report.scheme) << ": " << report.num_tasks()
        << " tasks, " << report.dropped.size() << " dropped, mean delay " << report.mean_delay_s << " s (isl "
        << b.isl_tx << ", sgl " << b.sgl_tx << ", compute " << b.compute << ")\n";
    out << "compute sites: ground " << report.site_counts[0] << ", one-hop " << report.site_counts[1] << ", beyond "
        << report.site_counts[2] << '\n';
    return kOk;
}

int cmd_sweep(const Common& c, const std::string& n_gb, const std::string& c_gflo, const std::string& schemes,
              std::ostream& out) {
    const auto s = load(c);
    const auto n_grid = positive_grid(n_gb, "--n-gb", sim::kBitsPerGB, false);
    const auto c_grid = positive_grid(c_gflo, "--c-gflo", 1.0, true);
    const auto scheme_list = parse_scheme_list(schemes);
    const auto rows = sim::sweep(s, n_grid, c_grid, scheme_list, c.jobs);
    auto csv = open_output(c.out_dir, "sweep.csv");
    sim::write_sweep_csv(csv, rows);
    out << rows.size() << " sweep rows over " << n_grid.size() << " x " << c_grid.size() << " cells\n";
    return kOk;
}

int cmd_table(const Common& c, const std::string& capabilities, double n_gb, double c_gflo, std::ostream& out) {
    auto s = load(c);
    if (!(n_gb > 0.0) || !(c_gflo >= 0.0)) throw ConfigError("--n-gb must be > 0 and --c-gflo >= 0");
    s.workload.data_in_bits = n_gb * sim::kBitsPerGB;
    s.workload.compute_gflo = c_gflo;
    const auto caps = positive_grid(capabilities, "--capabilities", 1.0, false);
    const auto rows = sim::platform_table(s, caps, c.jobs);
    auto csv = open_output(c.out_dir, "table.csv");
    sim::write_table_csv(csv, rows);
    out << std::fixed << std::setprecision(1);
    for (const auto& r : rows) {
        out << std::setw(8) << r.capability_gflops << " GFLOPS  vs ground " << std::showpos << r.impr_vs_ground_pct()
            << "%  vs one-hop " << r.impr_vs_onehop_pct() << '%' << std::noshowpos << '\n';
    }
    return kOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Adaptive computation offloading over a LEO constellation", "leo"};
    app.require_subcommand(1);

    Common common;
    auto add_common = [&](CLI::App* cmd, bool with_out) {
        cmd->add_option("--scenario", common.scenario_path, "Scenario JSON file (default: built-in default)");
        cmd->add_option("--seed", common.seed, "Override the scenario seed");
        if (with_out) cmd->add_option("--out", common.out_dir, "Output directory")->required();
    };

    auto* run = app.add_subcommand("run", "Run one simulation; writes report.json and tasks.csv");
    add_common(run, true);
    std::optional<std::string> scheme;
    run->add_option("--scheme", scheme, "adaptive, ground or onehop (default: from the scenario)");

    auto* sweep = app.add_subcommand("sweep", "Sweep data volume x computation; writes sweep.csv");
    add_common(sweep, true);
    std::string n_grid(kDefaultDataGridGB);
    std::string c_grid(kDefaultComputeGrid);
    std::string schemes = "adaptive,ground,onehop";
    sweep->add_option("--n-gb", n_grid, "Data volumes in GB: list or lo:hi:count[:log]")->capture_default_str();
    sweep->add_option("--c-gflo", c_grid, "Computational requirements in GFLO: list or lo:hi:count[:log]")
        ->capture_default_str();
    sweep->add_option("--schemes", schemes, "Comma-separated schemes")->capture_default_str();
    sweep->add_option("--jobs", common.jobs, "Parallel cells")->check(CLI::PositiveNumber);

    auto* table = app.add_subcommand("table", "Improvement per platform capability; writes table.csv");
    add_common(table, true);
    std::string capabilities(kDefaultCapabilities);
    double table_n_gb = 0.3;
    double table_c = 1000.0;
    table->add_option("--capabilities", capabilities, "Capabilities in GFLOPS")->capture_default_str();
    table->add_option("--n-gb", table_n_gb, "Data volume in GB")->capture_default_str();
    table->add_option("--c-gflo", table_c, "Computational requirement in GFLO")->capture_default_str();
    table->add_option("--jobs", common.jobs, "Parallel runs")->check(CLI::PositiveNumber);

    auto* verify = app.add_subcommand("verify", "Run the embedded property suites");
    VerifyOptions verify_options;
    verify->add_flag("--inject-negative-weight", verify_options.inject_negative_weight)->group("");

    auto* dump = app.add_subcommand("dump-default", "Print the default scenario as JSON");
    bool probe = false;
    std::string dump_path;
    dump->add_flag("--probe", probe, "Print the single-task sweep scenario instead");
    dump->add_option("--out", dump_path, "Write to this file instead of stdout");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kConfigError;
    }

    try {
        if (run->parsed()) return cmd_run(common, scheme, out);
        if (sweep->parsed()) return cmd_sweep(common, n_grid, c_grid, schemes, out);
        if (table->parsed()) return cmd_table(common, capabilities, table_n_gb, table_c, out);
        if (verify->parsed()) return cmd_verify(verify_options, out);
        const auto text = dump_scenario(probe ? sim::probe_scenario() : sim::default_scenario());
        if (dump_path.empty()) {
            out << text;
        } else {
            std::ofstream file(dump_path);
            if (!file || !(file << text)) throw ConfigError("cannot write '" + dump_path + "'");
        }
        return kOk;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kConfigError;
    } catch (const std::exception& e) {
        err << "simulation error: " << e.what() << '\n';
        return kSimulationError;
    }
}

}  // namespace leo::cli
