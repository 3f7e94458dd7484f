#include <doctest.h>

#include <leo/offload.hpp>

#include <algorithm>
#include <cmath>
#include <queue>
#include <random>

using namespace leo;
using namespace leo::offload;
using graph::kInfinity;

namespace {

constexpr double kGB = 8e9;

NetworkConfig default_network() {
    NetworkConfig cfg;
    cfg.ground_sites = default_ground_sites();
    return cfg;
}

Task make_task(double lat, double lon, int dest, double t, double gflo, double bits_in, std::uint64_t id = 1) {
    Task task;
    task.id = id;
    task.source = {lat, lon, orbit::kEarthRadiusKm + 600.0};
    task.destination = dest;
    task.gen_time = t;
    task.compute_gflo = gflo;
    task.data_in_bits = bits_in;
    task.data_out_bits = 16.0;
    return task;
}

// Independent reference for an idle network: freeze the topology at the task
// time, run plain Dijkstra for raw data out of the source and for results
// into the destination, and try every compute target.
struct SnapshotOracle {
    double best = kInfinity;
    int best_node = -1;
};

SnapshotOracle snapshot_oracle(const NetworkState& net, const Task& task) {
    const auto& c = net.constellation();
    const int sats = c.num_satellites();
    const int src = sats;
    const int dst = sats + 1;
    const int n = sats + 2;
    const auto site = net.config().ground_sites[task.destination];
    std::vector<std::vector<std::pair<int, double>>> rate(n);  // adjacency with link rate
    for (int a = 0; a < sats; ++a) {
        const auto sa = orbit::satellite_at(c, a);
        for (const auto& b : orbit::isl_neighbors(c, sa, task.gen_time))
            rate[a].push_back({orbit::node_id(c, b), net.config().isl_rate_bps});
        if (orbit::sgl_visible(c, sa, site, task.gen_time)) rate[a].push_back({dst, net.config().sgl_rate_bps});
    }
    for (int a = 0; a < sats; ++a) {
        const auto p = orbit::satellite_position(c, orbit::satellite_at(c, a), task.gen_time);
        if (orbit::distance_km(task.source, p) <= net.config().source_range_km)
            rate[src].push_back({a, net.config().isl_rate_bps});
    }
    auto dijkstra = [&](int from, double bits, bool reverse) {
        std::vector<std::vector<std::pair<int, double>>> adj(n);
        for (int a = 0; a < n; ++a)
            for (auto [b, r] : rate[a]) (reverse ? adj[b] : adj[a]).push_back({reverse ? a : b, bits / r});
        std::vector<double> d(n, kInfinity);
        using Item = std::pair<double, int>;
        std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
        d[from] = 0;
        pq.push({0, from});
        while (!pq.empty()) {
            auto [du, u] = pq.top();
            pq.pop();
            if (du > d[u]) continue;
            for (auto [v, w] : adj[u]) {
                if (v == src && !reverse) continue;
                if (du + w < d[v]) pq.push({d[v] = du + w, v});
            }
        }
        return d;
    };
    const auto raw = dijkstra(src, task.data_in_bits, false);
    const auto res = dijkstra(dst, task.data_out_bits, true);
    SnapshotOracle o;
    o.best = raw[dst];
    o.best_node = dst;
    for (int s = 0; s < sats; ++s) {
        const double total = raw[s] + task.compute_gflo / net.config().compute_gflops + res[s];
        if (total < o.best) {
            o.best = total;
            o.best_node = s;
        }
    }
    return o;
}

double delay_of(const NetworkState& net, const Task& task, Scheme scheme) {
    const auto plan = plan_offload(net, task, scheme);
    return plan ? plan->overall_delay : kInfinity;
}

}  // namespace

TEST_CASE("scheme names round-trip") {
    for (auto s : kAllSchemes) CHECK(parse_scheme(to_string(s)) == s);
    CHECK_FALSE(parse_scheme("cloud"));
}

TEST_CASE("attach_source") {
    const NetworkState net(default_network());
    const auto& c = net.constellation();
    const double t = 321.0;
    const auto sat_pos = orbit::satellite_position(c, {2, 5}, t);
    const auto colocated = net.attach_source(sat_pos, t);
    CHECK(std::find(colocated.begin(), colocated.end(), orbit::node_id(c, {2, 5})) != colocated.end());

    auto cfg = default_network();
    cfg.source_range_km = 0.0;
    const NetworkState blind(cfg);
    CHECK(blind.attach_source({10.0, 10.0, 6971.0}, 0.0).empty());

    // exhaustive distance scan using a law-of-cosines distance
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> lat(-89.0, 89.0);
    std::uniform_real_distribution<double> lon(-180.0, 180.0);
    std::uniform_real_distribution<double> time(0.0, 6000.0);
    for (int i = 0; i < 50; ++i) {
        const orbit::GeoPosition src{lat(rng), lon(rng), 6971.0};
        const double tt = time(rng);
        std::vector<int> expect;
        for (int n = 0; n < 128; ++n) {
            const auto p = orbit::satellite_position(c, orbit::satellite_at(c, n), tt);
            const double angle = orbit::central_angle_rad(src, p);
            const double d = std::sqrt(src.radius_km * src.radius_km + p.radius_km * p.radius_km -
                                       2 * src.radius_km * p.radius_km * std::cos(angle));
            if (d <= 2000.0) expect.push_back(n);
        }
        CHECK(net.attach_source(src, tt) == expect);
        CHECK_FALSE(expect.empty());
    }
}

TEST_CASE("scheme masks on the transition weights") {
    const NetworkState net(default_network());
    const auto task = make_task(48.0, 5.0, 0, 100.0, 1000.0, 0.4 * kGB);
    const auto ground = build_offload_graph(net, task, Scheme::Ground);
    const auto onehop = build_offload_graph(net, task, Scheme::OneHop);
    const auto adaptive = build_offload_graph(net, task, Scheme::Adaptive);
    const int n = ground.graph().num_nodes();
    REQUIRE(n == 130);
    REQUIRE_FALSE(onehop.attached().empty());

    for (int s = 0; s < n; ++s) {
        const double tg = ground.graph().transition_weight(0, s, 100.0);
        if (s == ground.dest_node()) {
            CHECK(tg == 0.0);
        } else {
            CHECK(tg == kInfinity);
        }
        const bool attached =
            std::find(onehop.attached().begin(), onehop.attached().end(), s) != onehop.attached().end();
        const double to = onehop.graph().transition_weight(0, s, 100.0);
        CHECK((to < kInfinity) == attached);

        // adaptive keeps every finite weight of the masked graphs
        const double ta = adaptive.graph().transition_weight(0, s, 100.0);
        if (tg < kInfinity) CHECK(ta == tg);
        if (to < kInfinity) CHECK(ta == to);
    }
    CHECK(adaptive.graph().transition_weight(0, adaptive.source_node(), 100.0) == kInfinity);

    // same-state edges do not depend on the scheme
    for (int k = 0; k < 2; ++k)
        for (int a = 0; a < n; a += 7)
            for (int b = 0; b < n; ++b) {
                if (a == b) continue;
                CHECK(adaptive.graph().edge_weight(k, a, b, 100.0) == ground.graph().edge_weight(k, a, b, 100.0));
            }
}

TEST_CASE("edge weights follow the link model") {
    const NetworkState net(default_network());
    const auto task = make_task(48.0, 5.0, 0, 0.0, 1000.0, 0.4 * kGB);
    const auto og = build_offload_graph(net, task, Scheme::Adaptive);
    const auto& c = net.constellation();
    const int a = orbit::node_id(c, {3, 2});
    const int b = orbit::node_id(c, {4, 2});
    CHECK(og.graph().edge_weight(0, a, b, 0.0) == doctest::Approx(0.4 * kGB / 5e9));
    CHECK(og.graph().edge_weight(1, a, b, 0.0) == doctest::Approx(16.0 / 5e9));
    CHECK(og.graph().edge_weight(0, a, orbit::node_id(c, {5, 2}), 0.0) == kInfinity);
    // nothing leaves the destination and nothing enters the source
    CHECK(og.graph().edge_weight(0, og.dest_node(), a, 0.0) == kInfinity);
    CHECK(og.graph().edge_weight(0, a, og.source_node(), 0.0) == kInfinity);
    CHECK(og.graph().edge_weight(0, og.source_node(), og.dest_node(), 0.0) == kInfinity);
}

TEST_CASE("tiny input, heavy compute goes to the ground") {
    const NetworkState net(default_network());
    const auto task = make_task(30.0, 20.0, 1, 250.0, 1e6, 16.0);
    const auto plan = plan_offload(net, task, Scheme::Adaptive);
    REQUIRE(plan);
    const auto oracle = snapshot_oracle(net, task);
    CHECK(oracle.best_node == net.num_satellites() + 1);
    CHECK(plan->site == ComputeSite::Ground);
    CHECK(plan->overall_delay == doctest::Approx(oracle.best).epsilon(1e-9));
}

TEST_CASE("huge input, light compute stays one hop away") {
    const NetworkState net(default_network());
    const auto task = make_task(-10.0, 60.0, 2, 40.0, 1.0, 4 * kGB);
    const auto plan = plan_offload(net, task, Scheme::Adaptive);
    REQUIRE(plan);
    const auto oracle = snapshot_oracle(net, task);
    CHECK(plan->site == ComputeSite::OneHop);
    CHECK(plan->compute_node == oracle.best_node);
    CHECK(plan->overall_delay == doctest::Approx(oracle.best).epsilon(1e-9));
}

TEST_CASE("plans on an idle network match the snapshot oracle") {
    const NetworkState net(default_network());
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> lat(-60.0, 60.0);
    std::uniform_real_distribution<double> lon(-180.0, 180.0);
    std::uniform_real_distribution<double> logn(3.0, 10.2);
    std::uniform_real_distribution<double> gflo(1.0, 2000.0);
    std::uniform_int_distribution<int> site(0, 7);
    int agree = 0;
    for (int i = 0; i < 60; ++i) {
        const auto task = make_task(lat(rng), lon(rng), site(rng), 30.0 * i, gflo(rng), std::pow(10.0, logn(rng)));
        const auto plan = plan_offload(net, task, Scheme::Adaptive);
        REQUIRE(plan);
        const auto oracle = snapshot_oracle(net, task);
        // delays are differences of absolute times, so roundoff scales with the clock
        if (std::abs(plan->overall_delay - oracle.best) <= 1e-9 * std::max(1.0, oracle.best) + 1e-12 * task.gen_time)
            ++agree;
    }
    CHECK(agree == 60);
}

TEST_CASE("adaptive dominates both baselines on a loaded snapshot") {
    auto cfg = default_network();
    cfg.background_load = {{45.0, 10.0, 2500.0, 0.8}, {35.0, 135.0, 3000.0, 0.5}};
    NetworkState net(cfg);
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> lat(-60.0, 60.0);
    std::uniform_real_distribution<double> lon(-180.0, 180.0);
    std::uniform_real_distribution<double> gb(0.001, 2.0);
    std::uniform_real_distribution<double> gflo(1.0, 2000.0);
    std::uniform_int_distribution<int> site(0, 7);
    // commit a few tasks first so timelines carry reservations
    for (int i = 0; i < 40; ++i) {
        const auto task = make_task(lat(rng), lon(rng), site(rng), 2.0 * i, gflo(rng), gb(rng) * kGB, i + 1);
        const auto plan = plan_offload(net, task, kAllSchemes[i % 3]);
        REQUIRE(plan);
        commit(net, *plan);
    }
    for (int i = 0; i < 40; ++i) {
        const auto task = make_task(lat(rng), lon(rng), site(rng), 20.0 + i, gflo(rng), gb(rng) * kGB, 100 + i);
        const double a = delay_of(net, task, Scheme::Adaptive);
        CHECK(a <= delay_of(net, task, Scheme::Ground) + 1e-9);
        CHECK(a <= delay_of(net, task, Scheme::OneHop) + 1e-9);
    }
}

TEST_CASE("plan bookkeeping: breakdown, single transition, inversion") {
    auto cfg = default_network();
    cfg.background_load = {{0.0, 0.0, 3000.0, 0.6}};
    NetworkState net(cfg);
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> lat(-60.0, 60.0);
    std::uniform_real_distribution<double> lon(-30.0, 30.0);
    std::uniform_real_distribution<double> gb(0.01, 1.0);
    std::uniform_real_distribution<double> gflo(0.0, 1500.0);
    for (int i = 0; i < 80; ++i) {
        const auto scheme = kAllSchemes[i % 3];
        const auto task = make_task(lat(rng), lon(rng), i % 8, 1.5 * i, gflo(rng), gb(rng) * kGB, i + 1);
        const auto plan = plan_offload(net, task, scheme);
        REQUIRE(plan);
        CHECK(std::abs(plan->breakdown.total() - plan->overall_delay) <= 1e-9);

        const auto transitions = std::count_if(plan->hops.begin(), plan->hops.end(),
                                               [](const Hop& h) { return h.kind == HopKind::Compute; });
        CHECK(transitions == 1);
        const auto og = build_offload_graph(net, task, scheme);
        CHECK(og.compute_permitted(plan->compute_node));

        for (const auto& h : plan->hops) {
            const ResourceTimeline* tl = nullptr;
            if (h.kind == HopKind::Isl) tl = &net.isl(h.from.node, h.to.node);
            if (h.kind == HopKind::Sgl) tl = &net.sgl(h.from.node, task.destination);
            if (h.kind == HopKind::SourceLink) tl = &net.source_link();
            if (h.kind == HopKind::Compute && h.from.node < net.num_satellites()) tl = &net.cpu(h.from.node);
            if (tl == nullptr || h.amount == 0.0) continue;
            CHECK(std::abs(tl->integrate_span(h.start, h.service) - h.amount) <= 1e-9 * h.amount);
        }
        commit(net, *plan);
    }
}

TEST_CASE("FIFO holds on a loaded offload graph") {
    NetworkState net(default_network());
    for (int i = 0; i < 20; ++i) {
        const auto task = make_task(40.0, 0.5 * i, i % 3, 0.2 * i, 500.0, 0.3 * kGB, i + 1);
        const auto plan = plan_offload(net, task, Scheme::OneHop);
        REQUIRE(plan);
        commit(net, *plan);
    }
    const auto task = make_task(40.0, 3.0, 1, 1.0, 500.0, 0.3 * kGB, 99);
    const auto og = build_offload_graph(net, task, Scheme::Adaptive);
    CHECK_FALSE(graph::check_fifo(og.graph(), {1.0, 1.3, 2.0, 2.5, 4.0}));
}

TEST_CASE("FIFO queueing across commits") {
    NetworkState net(default_network());
    // two identical tasks at the same instant on a forced route: the second waits
    const auto first = make_task(48.0, 5.0, 0, 10.0, 1000.0, 0.4 * kGB, 1);
    auto second = first;
    second.id = 2;
    const auto p1 = plan_offload(net, first, Scheme::OneHop);
    REQUIRE(p1);
    commit(net, *p1);
    const auto p2 = plan_offload(net, second, Scheme::OneHop);
    REQUIRE(p2);
    CHECK(p2->overall_delay >= p1->overall_delay);

    // committing a stale plan is refused
    CHECK_THROWS_AS(commit(net, *p1), std::logic_error);
}

TEST_CASE("monotone response to task size") {
    const NetworkState net(default_network());
    double last_ground = 0.0;
    double last_onehop = 0.0;
    for (double gb : {0.001, 0.01, 0.1, 0.4, 1.0, 2.0}) {
        const double d = delay_of(net, make_task(20.0, 40.0, 3, 5.0, 100.0, gb * kGB), Scheme::Ground);
        CHECK(d >= last_ground);
        last_ground = d;
    }
    for (double gflo : {1.0, 10.0, 100.0, 1000.0, 2000.0}) {
        const double d = delay_of(net, make_task(20.0, 40.0, 3, 5.0, gflo, 0.1 * kGB), Scheme::OneHop);
        CHECK(d >= last_onehop);
        last_onehop = d;
    }
}

TEST_CASE("propagation delay toggle adds distance over c") {
    auto cfg = default_network();
    const auto task = make_task(48.0, 5.0, 0, 10.0, 1000.0, 0.4 * kGB);
    const NetworkState plain(cfg);
    cfg.propagation_delay = true;
    const NetworkState with_prop(cfg);
    const auto a = plan_offload(plain, task, Scheme::Ground);
    const auto b = plan_offload(with_prop, task, Scheme::Ground);
    REQUIRE(a);
    REQUIRE(b);
    CHECK(b->overall_delay > a->overall_delay);
    CHECK(b->overall_delay - a->overall_delay < 0.2);  // a few thousand km at most
    CHECK(std::abs(b->breakdown.total() - b->overall_delay) <= 1e-9);
}

TEST_CASE("background load lowers capability near the hotspot only") {
    auto cfg = default_network();
    cfg.background_load = {{0.0, 0.0, 500.0, 0.75}};
    const NetworkState net(cfg);
    // satellite (0,0) starts right above (0, 0)
    CHECK(net.cpu(0).capacity_at(0.0) == doctest::Approx(50.0));
    CHECK(net.cpu(0).max_capacity() == 200.0);
    CHECK(net.cpu(1).capacity_at(0.0) == 200.0);
}

TEST_CASE("invalid tasks and configs are rejected") {
    const NetworkState net(default_network());
    auto task = make_task(0, 0, 0, 0, 1, 1);
    task.destination = 8;
    CHECK_THROWS_AS((void)plan_offload(net, task, Scheme::Adaptive), std::invalid_argument);
    task = make_task(0, 0, 0, 0, 1, 0);
    CHECK_THROWS_AS((void)plan_offload(net, task, Scheme::Adaptive), std::invalid_argument);

    auto cfg = default_network();
    cfg.ground_sites.clear();
    CHECK_THROWS_WITH_AS(NetworkState{cfg}, doctest::Contains("ground_sites"), std::invalid_argument);
}

TEST_CASE("unreachable when the source attaches to nothing") {
    auto cfg = default_network();
    cfg.source_range_km = 0.0;
    const NetworkState net(cfg);
    CHECK_FALSE(plan_offload(net, make_task(10, 10, 0, 0, 10, 1e6), Scheme::Adaptive));
}
