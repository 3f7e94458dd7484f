#include "leo/cli.hpp"

#include <cmath>
#include <functional>
#include <memory>
#include <ostream>
#include <random>

namespace leo::cli {

namespace {

using graph::kInfinity;

struct Outcome {
    bool ok = true;
    std::string detail;
};

// Dense random graph with integer weights; `negate` flips every weight's
// sign, which the suites must notice.
graph::StateGraph random_graph(std::mt19937_64& rng, int states, int nodes, bool negate) {
    auto w = std::make_shared<std::vector<double>>(static_cast<std::size_t>(states) * nodes * (nodes + 1), kInfinity);
    std::uniform_int_distribution<int> weight(0, 9);
    std::bernoulli_distribution absent(0.3);
    for (auto& x : *w)
        if (!absent(rng)) x = weight(rng);
    if (negate)
        for (auto& x : *w) x = -1.0 - x;
    const int stride = nodes + 1;  // column `nodes` holds the transition
    return graph::StateGraph(
        states, nodes,
        [w, nodes, stride](int k, int a, int b, double) {
            return a == b ? kInfinity : (*w)[(static_cast<std::size_t>(k) * nodes + a) * stride + b];
        },
        [w, nodes, stride](int k, int s, double) {
            return (*w)[(static_cast<std::size_t>(k) * nodes + s) * stride + nodes];
        });
}

Outcome oracle_equivalence(const VerifyOptions& opt, int min_states, int max_states, int graphs) {
    std::mt19937_64 rng(101 + min_states);
    std::uniform_int_distribution<int> k_dist(min_states, max_states);
    std::uniform_int_distribution<int> v_dist(2, 6);
    for (int i = 0; i < graphs; ++i) {
        const int k = k_dist(rng);
        const int v = v_dist(rng);
        const auto g = random_graph(rng, k, v, opt.inject_negative_weight && i == 0);
        std::uniform_int_distribution<int> pick(0, v - 1);
        const int src = pick(rng);
        const int dst = pick(rng);
        const auto fast = graph::shortest_path(g, src, dst, 0.0);
        const auto slow = graph::brute_force_shortest_path(g, src, dst, 0.0);
        const double a = fast ? fast->length : kInfinity;
        const double b = slow ? slow->length : kInfinity;
        if (a != b) return {false, "graph " + std::to_string(i) + ": search " + std::to_string(a) + " vs oracle " + std::to_string(b)};
    }
    return {true, std::to_string(graphs) + " graphs"};
}

Outcome dominance() {
    const auto base = sim::probe_scenario();
    const std::vector<double> n = {16.0, 8e6, 3.2e9, 1.6e10};
    const std::vector<double> c = {1.0, 100.0, 2000.0};
    const auto rows = sim::sweep(base, n, c, {sim::Scheme::Adaptive, sim::Scheme::Ground, sim::Scheme::OneHop});
    for (std::size_t i = 0; i < rows.size(); i += 3) {
        const double best_baseline = std::min(rows[i + 1].mean_delay_s, rows[i + 2].mean_delay_s);
        if (rows[i].mean_delay_s > best_baseline + 1e-9) {
            return {false, "cell N=" + std::to_string(rows[i].n_bits) + " C=" + std::to_string(rows[i].c_gflo)};
        }
    }
    return {true, std::to_string(rows.size() / 3) + " cells"};
}

Outcome conservation_and_replay() {
    auto s = sim::default_scenario();
    s.horizon_s = 60.0;
    s.seed = 7;
    s.network.background_load = {{30.0, 80.0, 3000.0, 0.5}};
    std::size_t plans = 0;
    for (auto scheme : offload::kAllSchemes) {
        s.scheme = scheme;
        const auto tasks = sim::generate_tasks(s);
        offload::NetworkState net(s.network);
        for (const auto& task : tasks) {
            const auto plan = offload::plan_offload(net, task, scheme);
            if (!plan) return {false, "task " + std::to_string(task.id) + " unreachable"};
            if (std::abs(plan->breakdown.total() - plan->overall_delay) > 1e-9) {
                return {false, "breakdown of task " + std::to_string(task.id) + " does not sum to its delay"};
            }
            for (const auto& h : plan->hops) {
                const offload::ResourceTimeline* tl = nullptr;
                if (h.kind == offload::HopKind::Isl) tl = &net.isl(h.from.node, h.to.node);
                if (h.kind == offload::HopKind::Sgl) tl = &net.sgl(h.from.node, task.destination);
                if (h.kind == offload::HopKind::Compute && h.from.node < net.num_satellites()) tl = &net.cpu(h.from.node);
                if (tl == nullptr || h.amount == 0.0) continue;
                if (std::abs(tl->integrate_span(h.start, h.service) - h.amount) > 1e-9 * h.amount) {
                    return {false, "re-integration of task " + std::to_string(task.id) + " misses its demand"};
                }
            }
            offload::commit(net, *plan);
            ++plans;
        }
        auto same = [](const offload::ResourceTimeline& tl) { return tl.replay().segments() == tl.segments(); };
        for (const auto& [key, tl] : net.isl_timelines())
            if (!same(tl)) return {false, "ISL ledger replay differs"};
        for (const auto& [key, tl] : net.sgl_timelines())
            if (!same(tl)) return {false, "SGL ledger replay differs"};
        for (const auto& tl : net.cpu_timelines())
            if (!same(tl)) return {false, "CPU ledger replay differs"};
    }
    return {true, std::to_string(plans) + " plans"};
}

Outcome fifo() {
    auto s = sim::default_scenario();
    s.horizon_s = 20.0;
    s.scheme = offload::Scheme::OneHop;
    const auto tasks = sim::generate_tasks(s);
    offload::NetworkState net(s.network);
    for (const auto& task : tasks)
        if (auto plan = offload::plan_offload(net, task, s.scheme)) offload::commit(net, *plan);
    auto probe = tasks.back();
    const auto og = offload::build_offload_graph(net, probe, offload::Scheme::Adaptive);
    std::vector<double> times;
    for (int i = 0; i < 8; ++i) times.push_back(probe.gen_time + 0.75 * i);
    if (auto violation = graph::check_fifo(og.graph(), times)) return {false, *violation};
    return {true, "offload weights sampled at " + std::to_string(times.size()) + " instants"};
}

}  // namespace

int cmd_verify(const VerifyOptions& options, std::ostream& out) {
    const std::pair<const char*, std::function<Outcome()>> suites[] = {
        {"oracle-equivalence", [&] { return oracle_equivalence(options, 1, 3, 400); }},
        {"classic-reduction", [&] { return oracle_equivalence(options, 1, 1, 100); }},
        {"fifo", fifo},
        {"dominance", dominance},
        {"conservation", conservation_and_replay},
    };
    const char* first_failure = nullptr;
    for (const auto& [name, suite] : suites) {
        Outcome o;
        try {
            o = suite();
        } catch (const std::exception& e) {
            o = {false, e.what()};
        }
        out << (o.ok ? "PASS " : "FAIL ") << name << ": " << o.detail << '\n';
        if (!o.ok && !first_failure) first_failure = name;
    }
    if (first_failure) {
        out << "verify failed: " << first_failure << '\n';
        return kVerifyFailed;
    }
    out << "verify passed\n";
    return kOk;
}

}  // namespace leo::cli
