#pragma once

// Workload generation, greedy arrival-order simulation with FIFO
// reservations, and the experiment drivers built on top of it.

#include "leo/offload.hpp"

#include <array>
#include <cstdint>
#include <iosfwd>
#include <vector>

namespace leo::sim {

using offload::ComputeSite;
using offload::Scheme;
using offload::Seconds;

inline constexpr double kBitsPerGB = 8e9;

/// Lat/lon box of the arrival map. Weights are relative; positions inside a
/// box are uniform over the sphere's area.
struct Region {
    double lat_min_deg = -90.0;
    double lat_max_deg = 90.0;
    double lon_min_deg = -180.0;
    double lon_max_deg = 180.0;
    double weight = 1.0;

    friend bool operator==(const Region&, const Region&) = default;
};

/// A task placed by hand rather than drawn from the arrival process.
struct ProbeTask {
    double lat_deg = 0.0;
    double lon_deg = 0.0;
    int destination = 0;
    Seconds gen_time_s = 0.0;

    friend bool operator==(const ProbeTask&, const ProbeTask&) = default;
};

struct Workload {
    double arrival_rate = 1000.0;  // tasks per rate_unit_s, summed over all regions
    Seconds rate_unit_s = 3600.0;
    std::vector<Region> regions;
    double data_in_bits = 0.4 * kBitsPerGB;
    double compute_gflo = 1000.0;
    double data_out_bits = 16.0;
    double source_altitude_km = 600.0;
    std::vector<ProbeTask> probes;  // generated in addition to the arrival process

    friend bool operator==(const Workload&, const Workload&) = default;
};

struct Scenario {
    offload::NetworkConfig network;
    Scheme scheme = Scheme::Adaptive;
    Workload workload;
    Seconds horizon_s = 3600.0;
    std::uint64_t seed = 1;

    /// Throws std::invalid_argument naming the offending field.
    void validate() const;

    friend bool operator==(const Scenario&, const Scenario&) = default;
};

/// Arrival map weighted toward the populated latitudes, 30 x 60 degree cells
/// between 60S and 60N.
[[nodiscard]] std::vector<Region> default_regions();

/// The contended workload used for the headline comparisons.
[[nodiscard]] Scenario default_scenario();

/// One task over a compute hotspot and nothing else on the network; the
/// base of the (data volume, computation) sweep.
[[nodiscard]] Scenario probe_scenario();

/// Poisson arrivals per region merged with the probe tasks, sorted by
/// generation time (ties keep region order). Ids are 1-based in that order.
[[nodiscard]] std::vector<offload::Task> generate_tasks(const Scenario& scenario);

struct TaskRecord {
    offload::Task task;
    offload::OffloadPlan plan;
};

struct MetricsReport {
    Scheme scheme = Scheme::Adaptive;
    std::vector<TaskRecord> records;
    std::vector<std::uint64_t> dropped;  // ids of tasks with no route
    Seconds mean_delay_s = 0.0;          // 0 when nothing completed
    offload::DelayBreakdown mean_breakdown;
    std::array<std::size_t, 3> site_counts{};  // indexed by ComputeSite

    [[nodiscard]] std::size_t num_tasks() const noexcept { return records.size() + dropped.size(); }
};

/// Plans every task in arrival order on the current network and commits its
/// reservations before moving on. Throws std::logic_error if a commit finds
/// the network inconsistent with the plan.
[[nodiscard]] MetricsReport run(const Scenario& scenario);

/// Runs one identically seeded simulation per scheme.
[[nodiscard]] std::vector<MetricsReport> compare(const Scenario& base, const std::vector<Scheme>& schemes,
                                                 int jobs = 1);

struct SweepRow {
    double n_bits = 0.0;
    double c_gflo = 0.0;
    Scheme scheme = Scheme::Adaptive;
    Seconds mean_delay_s = 0.0;
    Scheme argmin = Scheme::Adaptive;  // best scheme of this (n, c) cell
    std::array<double, 3> site_share{};  // fraction of tasks per ComputeSite
    std::size_t dropped = 0;
};

/// One independent simulation per (n, c, scheme); rows are ordered by n, then
/// c, then the order of `schemes`. Within 1e-9 relative, ties in the argmin
/// go to the baselines (ground, then one-hop) so that adaptive is only named
/// where it is strictly better.
[[nodiscard]] std::vector<SweepRow> sweep(const Scenario& base, const std::vector<double>& n_grid_bits,
                                          const std::vector<double>& c_grid_gflo, const std::vector<Scheme>& schemes,
                                          int jobs = 1);

struct PlatformRow {
    double capability_gflops = 0.0;
    Seconds adaptive_s = 0.0;
    Seconds ground_s = 0.0;
    Seconds onehop_s = 0.0;

    /// baseline / adaptive - 1, in percent; +100% means adaptive halves the time.
    [[nodiscard]] double impr_vs_ground_pct() const noexcept { return (ground_s / adaptive_s - 1.0) * 100.0; }
    [[nodiscard]] double impr_vs_onehop_pct() const noexcept { return (onehop_s / adaptive_s - 1.0) * 100.0; }
};

[[nodiscard]] std::vector<PlatformRow> platform_table(const Scenario& base, const std::vector<double>& capabilities,
                                                      int jobs = 1);

// Output writers. Floating values use shortest round-trip decimal with '.'
// regardless of locale.
void write_tasks_csv(std::ostream& out, const MetricsReport& report);
void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);
void write_table_csv(std::ostream& out, const std::vector<PlatformRow>& rows);
void write_report_json(std::ostream& out, const MetricsReport& report);

}  // namespace leo::sim
