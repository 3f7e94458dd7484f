#include "leo/simulator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>

namespace leo::sim {

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

void require(bool ok, const std::string& field, const char* what) {
    if (!ok) throw std::invalid_argument(field + ": " + what);
}

// Runs fn(i) for i in [0, n) on up to `jobs` threads. Each index writes its
// own slot, so the result does not depend on scheduling.
template <typename Fn>
void parallel_for(std::size_t n, int jobs, Fn fn) {
    const auto workers = std::min<std::size_t>(n, static_cast<std::size_t>(std::max(1, jobs)));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::atomic<bool> failed{false};
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < n && !failed; i = next++) {
                try {
                    fn(i);
                } catch (...) {
                    if (!failed.exchange(true)) failure = std::current_exception();
                }
            }
        });
    }
    pool.clear();
    if (failure) std::rethrow_exception(failure);
}

}  // namespace

void Scenario::validate() const {
    network.validate();
    const auto& w = workload;
    require(std::isfinite(w.arrival_rate) && w.arrival_rate >= 0.0, "workload.arrival_rate", "must be >= 0");
    require(std::isfinite(w.rate_unit_s) && w.rate_unit_s > 0.0, "workload.rate_unit_s", "must be > 0");
    require(w.arrival_rate == 0.0 || !w.regions.empty(), "workload.regions", "empty with a nonzero arrival rate");
    double total_weight = 0.0;
    for (std::size_t i = 0; i < w.regions.size(); ++i) {
        const auto& r = w.regions[i];
        const auto name = "workload.regions[" + std::to_string(i) + "]";
        require(-90.0 <= r.lat_min_deg && r.lat_min_deg < r.lat_max_deg && r.lat_max_deg <= 90.0, name,
                "latitude range must satisfy -90 <= min < max <= 90");
        require(-180.0 <= r.lon_min_deg && r.lon_min_deg < r.lon_max_deg && r.lon_max_deg <= 180.0, name,
                "longitude range must satisfy -180 <= min < max <= 180");
        require(std::isfinite(r.weight) && r.weight >= 0.0, name, "weight must be >= 0");
        total_weight += r.weight;
    }
    require(w.arrival_rate == 0.0 || total_weight > 0.0, "workload.regions", "all weights are zero");
    require(std::isfinite(w.data_in_bits) && w.data_in_bits > 0.0, "workload.data_in", "must be > 0");
    require(std::isfinite(w.compute_gflo) && w.compute_gflo >= 0.0, "workload.compute_gflo", "must be >= 0");
    require(std::isfinite(w.data_out_bits) && w.data_out_bits > 0.0, "workload.data_out", "must be > 0");
    require(std::isfinite(w.source_altitude_km) && w.source_altitude_km >= 0.0, "workload.source_altitude_km",
            "must be >= 0");
    for (std::size_t i = 0; i < w.probes.size(); ++i) {
        const auto& p = w.probes[i];
        const auto name = "workload.probes[" + std::to_string(i) + "]";
        require(std::abs(p.lat_deg) <= 90.0 && std::abs(p.lon_deg) <= 180.0, name, "position out of range");
        require(p.destination >= 0 && p.destination < static_cast<int>(network.ground_sites.size()), name,
                "destination is not a ground site index");
        require(p.gen_time_s >= 0.0 && p.gen_time_s < horizon_s, name, "generation time outside the horizon");
    }
    require(std::isfinite(horizon_s) && horizon_s > 0.0, "simulation.horizon_s", "must be > 0");
}

std::vector<Region> default_regions() {
    // rows: 30..60N, 0..30N, 30S..0, 60S..30S; columns: 60-degree bands from 180W
    static constexpr double weights[4][6] = {
        {0.5, 8.0, 1.0, 12.0, 10.0, 6.0},
        {0.5, 3.0, 2.0, 6.0, 16.0, 3.0},
        {0.2, 2.0, 4.0, 5.0, 4.0, 1.0},
        {0.1, 1.0, 1.0, 1.0, 0.1, 1.0},
    };
    std::vector<Region> out;
    for (int row = 0; row < 4; ++row) {
        for (int col = 0; col < 6; ++col) {
            const double lat_max = 60.0 - 30.0 * row;
            const double lon_min = -180.0 + 60.0 * col;
            out.push_back({lat_max - 30.0, lat_max, lon_min, lon_min + 60.0, weights[row][col]});
        }
    }
    return out;
}

Scenario default_scenario() {
    Scenario s;
    s.network.ground_sites = offload::default_ground_sites();
    s.workload.regions = default_regions();
    s.workload.arrival_rate = 1000.0;
    s.workload.rate_unit_s = 180.0;
    s.horizon_s = 900.0;
    s.seed = 1;
    return s;
}

Scenario probe_scenario() {
    Scenario s;
    s.network.ground_sites = offload::default_ground_sites();
    // equatorial Africa: far from every ground site, with the compute of the
    // satellites overhead mostly taken by other work
    s.network.background_load = {{0.0, 20.0, 2500.0, 0.75}};
    s.workload.arrival_rate = 0.0;
    s.workload.probes = {{0.0, 20.0, 1, 0.0}};
    s.horizon_s = 1.0;
    return s;
}

std::vector<offload::Task> generate_tasks(const Scenario& scenario) {
    scenario.validate();
    const auto& w = scenario.workload;
    std::mt19937_64 rng(scenario.seed);
    const double radius = orbit::kEarthRadiusKm + w.source_altitude_km;
    const int sites = static_cast<int>(scenario.network.ground_sites.size());

    std::vector<offload::Task> tasks;
    auto add = [&](double lat, double lon, int dest, Seconds t) {
        offload::Task task;
        task.source = {lat, lon, radius};
        task.destination = dest;
        task.gen_time = t;
        task.compute_gflo = w.compute_gflo;
        task.data_in_bits = w.data_in_bits;
        task.data_out_bits = w.data_out_bits;
        tasks.push_back(task);
    };

    if (w.arrival_rate > 0.0) {
        double total_weight = 0.0;
        for (const auto& r : w.regions) total_weight += r.weight;
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        std::uniform_int_distribution<int> site(0, sites - 1);
        for (const auto& r : w.regions) {
            const double per_second = w.arrival_rate * (r.weight / total_weight) / w.rate_unit_s;
            if (per_second <= 0.0) continue;
            std::exponential_distribution<double> gap(per_second);
            const double z0 = std::sin(r.lat_min_deg * kDeg);
            const double z1 = std::sin(r.lat_max_deg * kDeg);
            for (Seconds t = gap(rng); t < scenario.horizon_s; t += gap(rng)) {
                const double lat = std::asin(z0 + (z1 - z0) * unit(rng)) / kDeg;
                const double lon = r.lon_min_deg + (r.lon_max_deg - r.lon_min_deg) * unit(rng);
                add(lat, lon, site(rng), t);
            }
        }
    }
    for (const auto& p : w.probes) add(p.lat_deg, p.lon_deg, p.destination, p.gen_time_s);

    std::stable_sort(tasks.begin(), tasks.end(),
                     [](const offload::Task& a, const offload::Task& b) { return a.gen_time < b.gen_time; });
    for (std::size_t i = 0; i < tasks.size(); ++i) tasks[i].id = i + 1;
    return tasks;
}

MetricsReport run(const Scenario& scenario) {
    const auto tasks = generate_tasks(scenario);
    offload::NetworkState net(scenario.network);
    MetricsReport report;
    report.scheme = scenario.scheme;
    for (const auto& task : tasks) {
        auto plan = offload::plan_offload(net, task, scenario.scheme);
        if (!plan) {
            report.dropped.push_back(task.id);
            continue;
        }
        offload::commit(net, *plan);
        report.records.push_back({task, std::move(*plan)});
    }

    if (!report.records.empty()) {
        const double n = static_cast<double>(report.records.size());
        offload::DelayBreakdown sum;
        double total = 0.0;
        for (const auto& r : report.records) {
            total += r.plan.overall_delay;
            sum.isl_tx += r.plan.breakdown.isl_tx;
            sum.sgl_tx += r.plan.breakdown.sgl_tx;
            sum.compute += r.plan.breakdown.compute;
            ++report.site_counts[static_cast<std::size_t>(r.plan.site)];
        }
        report.mean_delay_s = total / n;
        report.mean_breakdown = {sum.isl_tx / n, sum.sgl_tx / n, sum.compute / n};
    }
    return report;
}

std::vector<MetricsReport> compare(const Scenario& base, const std::vector<Scheme>& schemes, int jobs) {
    std::vector<MetricsReport> out(schemes.size());
    parallel_for(schemes.size(), jobs, [&](std::size_t i) {
        auto s = base;
        s.scheme = schemes[i];
        out[i] = run(s);
    });
    return out;
}

std::vector<SweepRow> sweep(const Scenario& base, const std::vector<double>& n_grid_bits,
                            const std::vector<double>& c_grid_gflo, const std::vector<Scheme>& schemes, int jobs) {
    if (n_grid_bits.empty() || c_grid_gflo.empty() || schemes.empty()) {
        throw std::invalid_argument("sweep grids and scheme list must be non-empty");
    }
    std::vector<SweepRow> rows;
    for (double n : n_grid_bits)
        for (double c : c_grid_gflo)
            for (auto s : schemes) rows.push_back({n, c, s, 0.0, s, {}, 0});

    parallel_for(rows.size(), jobs, [&](std::size_t i) {
        auto& row = rows[i];
        auto s = base;
        s.scheme = row.scheme;
        s.workload.data_in_bits = row.n_bits;
        s.workload.compute_gflo = row.c_gflo;
        const auto report = run(s);
        row.mean_delay_s = report.mean_delay_s;
        row.dropped = report.dropped.size();
        if (!report.records.empty()) {
            for (std::size_t k = 0; k < 3; ++k)
                row.site_share[k] = static_cast<double>(report.site_counts[k]) / report.records.size();
        }
    });

    static constexpr Scheme preference[] = {Scheme::Ground, Scheme::OneHop, Scheme::Adaptive};
    const std::size_t width = schemes.size();
    for (std::size_t cell = 0; cell < rows.size(); cell += width) {
        double best = rows[cell].mean_delay_s;
        for (std::size_t j = 1; j < width; ++j) best = std::min(best, rows[cell + j].mean_delay_s);
        const double tol = 1e-9 * std::max(1.0, best);
        Scheme label = rows[cell].scheme;
        for (auto p : preference) {
            const auto it = std::find_if(rows.begin() + cell, rows.begin() + cell + width,
                                         [&](const SweepRow& r) { return r.scheme == p && r.mean_delay_s <= best + tol; });
            if (it != rows.begin() + cell + width) {
                label = p;
                break;
            }
        }
        for (std::size_t j = 0; j < width; ++j) rows[cell + j].argmin = label;
    }
    return rows;
}

std::vector<PlatformRow> platform_table(const Scenario& base, const std::vector<double>& capabilities, int jobs) {
    if (capabilities.empty()) throw std::invalid_argument("capability list must be non-empty");
    std::vector<PlatformRow> rows(capabilities.size());
    std::vector<Seconds> delays(capabilities.size() * 3);
    parallel_for(delays.size(), jobs, [&](std::size_t i) {
        auto s = base;
        s.network.compute_gflops = capabilities[i / 3];
        s.scheme = offload::kAllSchemes[i % 3];
        delays[i] = run(s).mean_delay_s;
    });
    for (std::size_t r = 0; r < rows.size(); ++r) {
        rows[r].capability_gflops = capabilities[r];
        rows[r].adaptive_s = delays[3 * r + static_cast<int>(Scheme::Adaptive)];
        rows[r].ground_s = delays[3 * r + static_cast<int>(Scheme::Ground)];
        rows[r].onehop_s = delays[3 * r + static_cast<int>(Scheme::OneHop)];
    }
    return rows;
}

}  // namespace leo::sim
