// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits nonzero if any fails.

#include "graph_fixtures.hpp"

#include <leo/simulator.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace leo;
using sim::Scheme;

struct Outcome {
    bool ok = false;
    std::string detail;
};

std::string fmt(double v, int precision = 4) {
    std::ostringstream os;
    os.precision(precision);
    os << v;
    return os.str();
}

Outcome oracle_equivalence() {
    const auto t0 = std::chrono::steady_clock::now();
    std::mt19937_64 rng(20240601);
    std::uniform_int_distribution<int> states(1, 3), nodes(2, 6);
    int graphs = 0;
    for (; graphs < 1000; ++graphs) {
        const int k = states(rng);
        const int v = nodes(rng);
        const auto g = testing::to_graph(testing::random_table(rng, k, v));
        const int src = std::uniform_int_distribution<int>(0, v - 1)(rng);
        const int dst = std::uniform_int_distribution<int>(0, v - 1)(rng);
        const auto fast = graph::shortest_path(g, src, dst, 0.0);
        const auto slow = graph::brute_force_shortest_path(g, src, dst, 0.0);
        if (fast.has_value() != slow.has_value() || (fast && fast->length != slow->length)) {
            return {false, "graph " + std::to_string(graphs) + " disagrees with enumeration"};
        }
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return {secs < 60.0, std::to_string(graphs) + "/1000 graphs agree in " + fmt(secs, 3) + " s (limit 60 s)"};
}

Outcome classic_reduction() {
    std::mt19937_64 rng(77);
    std::uniform_int_distribution<int> nodes(2, 12);
    for (int i = 0; i < 100; ++i) {
        const int v = nodes(rng);
        const auto table = testing::random_table(rng, 1, v);
        std::vector<std::vector<double>> dense(v, std::vector<double>(v));
        for (int a = 0; a < v; ++a)
            for (int b = 0; b < v; ++b) dense[a][b] = table.e(0, a, b);
        const auto g = testing::to_graph(table);
        const int src = std::uniform_int_distribution<int>(0, v - 1)(rng);
        const auto expect = testing::textbook_dijkstra(dense, src);
        graph::SearchOptions all;
        all.stop_at_target = false;
        const auto got = graph::run_search(g, src, 0.0, all);
        for (int n = 0; n < v; ++n) {
            if (got.distance({0, n}) != expect[n]) return {false, "graph " + std::to_string(i) + " node " + std::to_string(n)};
        }
    }
    return {true, "100/100 graphs match a single-state Dijkstra"};
}

const std::vector<double> kDataGrid = {16.0, 8e3, 8e6, 8e8, 3.2e9, 1.6e10};  // 16 bits .. 2 GB
const std::vector<double> kComputeGrid = {1.0, 10.0, 100.0, 500.0, 1000.0, 2000.0};

const std::vector<sim::SweepRow>& probe_sweep() {
    static const auto rows = sim::sweep(sim::probe_scenario(), kDataGrid, kComputeGrid,
                                        {Scheme::Adaptive, Scheme::Ground, Scheme::OneHop});
    return rows;
}

Outcome dominance() {
    const auto& rows = probe_sweep();
    double worst = -graph::kInfinity;
    for (std::size_t i = 0; i < rows.size(); i += 3) {
        const double gap = rows[i].mean_delay_s - std::min(rows[i + 1].mean_delay_s, rows[i + 2].mean_delay_s);
        worst = std::max(worst, gap);
        if (gap > 1e-9) {
            return {false, "N=" + fmt(rows[i].n_bits) + " bits, C=" + fmt(rows[i].c_gflo) + " GFLO: adaptive " +
                               fmt(gap) + " s above the best baseline"};
        }
    }
    return {true, std::to_string(rows.size() / 3) + " cells, max(adaptive - best baseline) = " + fmt(worst) + " s"};
}

Outcome region_structure() {
    const auto& rows = probe_sweep();
    int ground = 0, onehop = 0, beyond = 0;
    double best_margin = 0.0;
    for (std::size_t i = 0; i < rows.size(); i += 3) {
        const auto& a = rows[i];
        if (a.dropped) continue;
        if (a.site_share[0] == 1.0) ++ground;
        if (a.site_share[1] == 1.0) ++onehop;
        if (a.site_share[2] == 1.0) {
            const double best = std::min(rows[i + 1].mean_delay_s, rows[i + 2].mean_delay_s);
            const double margin = 1.0 - a.mean_delay_s / best;
            best_margin = std::max(best_margin, margin);
            if (margin > 0.05) ++beyond;
        }
    }
    return {ground > 0 && onehop > 0 && beyond > 0,
            "cells computing at ground " + std::to_string(ground) + ", one hop " + std::to_string(onehop) +
                ", beyond one hop and >5% faster " + std::to_string(beyond) + " (best margin " +
                fmt(100 * best_margin, 3) + "%)"};
}

Outcome headline() {
    auto s = sim::default_scenario();
    s.workload.data_in_bits = 0.4 * sim::kBitsPerGB;
    s.workload.compute_gflo = 1000.0;
    s.network.compute_gflops = 200.0;
    const auto r = sim::compare(s, {Scheme::Adaptive, Scheme::Ground, Scheme::OneHop});
    for (const auto& m : r) {
        if (!m.dropped.empty()) return {false, std::string(offload::to_string(m.scheme)) + " dropped tasks"};
    }
    const double vs_ground = 1.0 - r[0].mean_delay_s / r[1].mean_delay_s;
    const double vs_onehop = 1.0 - r[0].mean_delay_s / r[2].mean_delay_s;
    return {vs_ground >= 0.20 && vs_onehop >= 0.20,
            std::to_string(r[0].num_tasks()) + " tasks; mean delay adaptive " + fmt(r[0].mean_delay_s) + " s, ground " +
                fmt(r[1].mean_delay_s) + " s, one-hop " + fmt(r[2].mean_delay_s) + " s; reduction " +
                fmt(100 * vs_ground, 3) + "% vs ground, " + fmt(100 * vs_onehop, 3) + "% vs one-hop (floor 20%)"};
}

Outcome platform_trend() {
    auto s = sim::default_scenario();
    s.workload.data_in_bits = 0.3 * sim::kBitsPerGB;
    s.workload.compute_gflo = 1000.0;
    const auto rows = sim::platform_table(s, {127.0, 200.0, 590.0, 1000.0});
    bool ok = true;
    std::string detail;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (i > 0) {
            ok &= rows[i].impr_vs_ground_pct() >= rows[i - 1].impr_vs_ground_pct();
            ok &= rows[i].impr_vs_onehop_pct() <= rows[i - 1].impr_vs_onehop_pct();
        }
        detail += (i ? "; " : "") + fmt(rows[i].capability_gflops) + ": " + fmt(rows[i].impr_vs_ground_pct(), 3) +
                  "% / " + fmt(rows[i].impr_vs_onehop_pct(), 3) + "%";
    }
    return {ok, "vs ground / vs one-hop by capability: " + detail};
}

Outcome complexity_scaling() {
    const int sizes[] = {64, 128, 256};
    std::vector<graph::StateGraph> graphs;
    for (int v : sizes) {
        std::mt19937_64 rng(static_cast<std::uint64_t>(v));
        graphs.push_back(testing::to_graph(testing::random_table(rng, 2, v, 0.0)));
    }
    graph::SearchOptions opt;
    opt.extraction = graph::Extraction::LinearScan;
    opt.stop_at_target = false;

    // Sizes are interleaved round by round so drift in machine speed hits all
    // three alike; each sample times a batch long enough to swamp timer jitter.
    std::vector<double> samples[3];
    double sink = 0.0;
    for (int round = 0; round < 41; ++round) {
        for (int i = 0; i < 3; ++i) {
            const int batch = 64 >> (2 * i);  // 64, 16, 4 searches
            const auto t0 = std::chrono::steady_clock::now();
            for (int b = 0; b < batch; ++b) sink += graph::run_search(graphs[i], 0, 0.0, opt).dist.back();
            const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            if (round > 0) samples[i].push_back(dt / batch);  // first round warms the caches
        }
    }
    double t[3];
    for (int i = 0; i < 3; ++i) {
        auto& v = samples[i];
        std::nth_element(v.begin(), v.begin() + v.size() / 2, v.end());
        t[i] = v[v.size() / 2];
    }
    const double r1 = t[1] / t[0], r2 = t[2] / t[1];
    const auto in = [](double r) { return r >= 3.0 && r <= 6.0; };
    return {in(r1) && in(r2) && sink >= 0.0, "median " + fmt(1e3 * t[0]) + " / " + fmt(1e3 * t[1]) + " / " +
                                                 fmt(1e3 * t[2]) + " ms at |V| = 64/128/256; ratios " + fmt(r1, 3) +
                                                 ", " + fmt(r2, 3) + " (want [3, 6])"};
}

Outcome conservation() {
    auto s = sim::default_scenario();
    s.horizon_s = 660.0;
    s.network.background_load = {{30.0, 80.0, 3000.0, 0.5}};
    std::mt19937_64 rng(4242);
    std::uniform_real_distribution<double> log_n(std::log(16.0), std::log(1.6e10)), log_c(0.0, std::log(2000.0));
    std::size_t plans = 0, hops_checked = 0;
    double worst_sum = 0.0, worst_rel = 0.0;
    for (auto scheme : offload::kAllSchemes) {
        auto tasks = sim::generate_tasks(s);
        offload::NetworkState net(s.network);
        for (auto& task : tasks) {
            task.data_in_bits = std::exp(log_n(rng));
            task.compute_gflo = std::exp(log_c(rng));
            const auto plan = offload::plan_offload(net, task, scheme);
            if (!plan) continue;
            worst_sum = std::max(worst_sum, std::abs(plan->breakdown.total() - plan->overall_delay));
            for (const auto& h : plan->hops) {
                const offload::ResourceTimeline* tl = nullptr;
                if (h.kind == offload::HopKind::Isl) tl = &net.isl(h.from.node, h.to.node);
                if (h.kind == offload::HopKind::Sgl) tl = &net.sgl(h.from.node, task.destination);
                if (h.kind == offload::HopKind::Compute && h.from.node < net.num_satellites()) tl = &net.cpu(h.from.node);
                if (tl == nullptr || h.amount == 0.0) continue;
                worst_rel = std::max(worst_rel, std::abs(tl->integrate_span(h.start, h.service) - h.amount) / h.amount);
                ++hops_checked;
            }
            offload::commit(net, *plan);
            ++plans;
        }
    }
    return {plans >= 10000 && worst_sum <= 1e-9 && worst_rel <= 1e-9,
            std::to_string(plans) + " plans, " + std::to_string(hops_checked) +
                " resource intervals; max |sum - delay| = " + fmt(worst_sum) + " s, max relative re-integration error " +
                fmt(worst_rel)};
}

Outcome determinism() {
    const auto s = sim::default_scenario();
    std::string csv[2];
    for (auto& out : csv) {
        std::ostringstream os;
        sim::write_tasks_csv(os, sim::run(s));
        out = os.str();
    }
    const auto lines = std::count(csv[0].begin(), csv[0].end(), '\n');
    return {csv[0] == csv[1], std::to_string(csv[0].size()) + " bytes, " + std::to_string(lines) + " lines, " +
                                  (csv[0] == csv[1] ? "identical" : "different")};
}

}  // namespace

int main() {
    const std::pair<const char*, std::function<Outcome()>> criteria[] = {
        {"1 oracle-equivalence", oracle_equivalence},
        {"2 classic-reduction", classic_reduction},
        {"3 dominance", dominance},
        {"4 region-structure", region_structure},
        {"5 headline-improvement", headline},
        {"6 platform-trend", platform_trend},
        {"7 complexity-scaling", complexity_scaling},
        {"8 conservation", conservation},
        {"9 determinism", determinism},
    };
    int failed = 0;
    for (const auto& [name, check] : criteria) {
        Outcome o;
        try {
            o = check();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        std::cout << (o.ok ? "PASS " : "FAIL ") << name << ": " << o.detail << std::endl;
        failed += !o.ok;
    }
    return failed == 0 ? 0 : 1;
}
