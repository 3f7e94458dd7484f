#include "leo/offload.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace leo::offload {

using graph::kInfinity;

std::string_view to_string(Scheme scheme) {
    switch (scheme) {
        case Scheme::Adaptive:
            return "adaptive";
        case Scheme::Ground:
            return "ground";
        case Scheme::OneHop:
            return "onehop";
    }
    return "?";
}

std::optional<Scheme> parse_scheme(std::string_view text) {
    for (auto s : kAllSchemes) {
        if (to_string(s) == text) return s;
    }
    return std::nullopt;
}

std::string_view to_string(ComputeSite site) {
    switch (site) {
        case ComputeSite::Ground:
            return "ground";
        case ComputeSite::OneHop:
            return "onehop";
        case ComputeSite::BeyondOneHop:
            return "beyond";
    }
    return "?";
}

namespace {

void require(bool ok, const std::string& field, const char* rule) {
    if (!ok) throw std::invalid_argument(field + ": " + rule);
}

bool positive(double x) { return std::isfinite(x) && x > 0.0; }

}  // namespace

void NetworkConfig::validate() const {
    constellation.validate();
    require(positive(isl_rate_bps), "isl_rate_bps", "must be positive");
    require(positive(sgl_rate_bps), "sgl_rate_bps", "must be positive");
    require(positive(compute_gflops), "compute_gflops", "must be positive");
    require(std::isfinite(source_range_km) && source_range_km >= 0.0, "source_range_km", "must be nonnegative");
    require(!ground_sites.empty(), "ground_sites", "at least one site is required");
    for (std::size_t i = 0; i < ground_sites.size(); ++i) {
        const auto& g = ground_sites[i];
        const auto key = "ground_sites[" + std::to_string(i) + "]";
        require(std::abs(g.lat_deg) <= 90.0, key + ".lat_deg", "must lie in [-90, 90]");
        require(std::isfinite(g.lon_deg), key + ".lon_deg", "must be finite");
    }
    for (std::size_t i = 0; i < background_load.size(); ++i) {
        const auto& b = background_load[i];
        const auto key = "background_load[" + std::to_string(i) + "]";
        require(b.utilization >= 0.0 && b.utilization <= 1.0, key + ".utilization", "must lie in [0, 1]");
        require(std::isfinite(b.radius_km) && b.radius_km >= 0.0, key + ".radius_km", "must be nonnegative");
        require(std::abs(b.lat_deg) <= 90.0, key + ".lat_deg", "must lie in [-90, 90]");
    }
}

std::vector<orbit::GroundNode> default_ground_sites() {
    return {
        {51.44, -0.94},    // Reading
        {50.10, 8.77},     // Offenbach
        {55.75, 37.62},    // Moscow
        {45.42, -75.70},   // Ottawa
        {43.06, 141.35},   // Sapporo
        {67.86, 20.96},    // Kiruna
        {64.84, -147.72},  // Fairbanks
        {-42.88, 147.33},  // Hobart
    };
}

void Task::validate(int num_sites) const {
    require(std::isfinite(compute_gflo) && compute_gflo >= 0.0, "compute_gflo", "must be nonnegative");
    require(positive(data_in_bits), "data_in_bits", "must be positive");
    require(positive(data_out_bits), "data_out_bits", "must be positive");
    require(std::isfinite(gen_time) && gen_time >= 0.0, "gen_time", "must be nonnegative");
    require(destination >= 0 && destination < num_sites, "destination", "unknown ground site");
    require(source.radius_km >= orbit::kEarthRadiusKm, "source.radius_km", "must not be below the surface");
}

// ---------------------------------------------------------------------------
// NetworkState

NetworkState::NetworkState(NetworkConfig config)
    : config_(std::move(config)), idle_isl_(config_.isl_rate_bps), idle_sgl_(config_.sgl_rate_bps) {
    config_.validate();
    const auto& c = config_.constellation;
    cpus_.reserve(c.num_satellites());
    for (int n = 0; n < c.num_satellites(); ++n) {
        const auto pos = orbit::satellite_position(c, orbit::satellite_at(c, n), c.epoch_s);
        double load = 0.0;
        for (const auto& b : config_.background_load) {
            const double ground_km =
                orbit::central_angle_rad(pos, {b.lat_deg, b.lon_deg, orbit::kEarthRadiusKm}) * orbit::kEarthRadiusKm;
            if (ground_km <= b.radius_km) load = std::max(load, b.utilization);
        }
        const double cap = config_.compute_gflops * (1.0 - load);
        cpus_.emplace_back(config_.compute_gflops, std::vector<ResourceTimeline::Segment>{{0.0, cap}});
    }
}

const ResourceTimeline& NetworkState::isl(int from, int to) const {
    auto it = isl_.find({from, to});
    return it == isl_.end() ? idle_isl_ : it->second;
}

const ResourceTimeline& NetworkState::sgl(int sat, int site) const {
    auto it = sgl_.find({sat, site});
    return it == sgl_.end() ? idle_sgl_ : it->second;
}

const ResourceTimeline& NetworkState::cpu(int sat) const { return cpus_.at(static_cast<std::size_t>(sat)); }

ResourceTimeline& NetworkState::isl_mut(int from, int to) {
    return isl_.try_emplace({from, to}, config_.isl_rate_bps).first->second;
}

ResourceTimeline& NetworkState::sgl_mut(int sat, int site) {
    return sgl_.try_emplace({sat, site}, config_.sgl_rate_bps).first->second;
}

ResourceTimeline& NetworkState::cpu_mut(int sat) { return cpus_.at(static_cast<std::size_t>(sat)); }

std::vector<int> NetworkState::attach_source(const orbit::GeoPosition& source, Seconds t) const {
    std::vector<int> out;
    const auto& c = config_.constellation;
    for (int n = 0; n < c.num_satellites(); ++n) {
        const auto pos = orbit::satellite_position(c, orbit::satellite_at(c, n), t);
        if (orbit::distance_km(source, pos) <= config_.source_range_km && orbit::line_of_sight(source, pos)) {
            out.push_back(n);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// OffloadGraph

struct OffloadGraph::Model {
    const NetworkState* net = nullptr;
    Task task;
    Scheme scheme = Scheme::Adaptive;
    int sats = 0;
    std::vector<int> attached;
    std::vector<char> is_attached;
    orbit::GroundNode site;

    int source() const { return sats; }
    int dest() const { return sats + 1; }

    NodeKind kind(int node) const {
        if (node == source()) return NodeKind::Source;
        if (node == dest()) return NodeKind::Ground;
        return NodeKind::Satellite;
    }

    bool permitted(int node) const {
        switch (scheme) {
            case Scheme::Adaptive:
                return true;
            case Scheme::Ground:
                return node == dest();
            case Scheme::OneHop:
                return node < sats && is_attached[node];
        }
        return false;
    }

    bool linked(int a, int b, Seconds t) const {
        const auto& c = net->constellation();
        for (const auto& n : orbit::isl_neighbors(c, orbit::satellite_at(c, a), t)) {
            if (orbit::node_id(c, n) == b) return true;
        }
        return false;
    }

    orbit::GeoPosition position(int node, Seconds t) const {
        if (node == source()) return task.source;
        if (node == dest()) return site.position();
        const auto& c = net->constellation();
        return orbit::satellite_position(c, orbit::satellite_at(c, node), t);
    }

    EdgeCost edge(int state, int a, int b, Seconds t) const {
        EdgeCost cost;
        if (a == b || a == dest() || b == source()) return cost;
        const double bits = state == 0 ? task.data_in_bits : task.data_out_bits;
        const auto& c = net->constellation();
        if (a == source()) {
            if (b == dest() || !is_attached[b]) return cost;
            cost.transmit = transmit_delay(net->source_link(), bits, t);
        } else if (b == dest()) {
            if (!orbit::sgl_visible(c, orbit::satellite_at(c, a), site, t)) return cost;
            cost.transmit = transmit_delay(net->sgl(a, task.destination), bits, t);
        } else {
            if (!linked(a, b, t)) return cost;
            cost.transmit = transmit_delay(net->isl(a, b), bits, t);
        }
        if (net->config().propagation_delay && cost.transmit != kInfinity) {
            cost.propagation = orbit::distance_km(position(a, t), position(b, t)) / orbit::kSpeedOfLightKmPerS;
        }
        return cost;
    }

    Seconds compute(int node, Seconds t) const {
        if (!permitted(node)) return kInfinity;
        const auto k = kind(node);
        const auto& cpu = k == NodeKind::Satellite ? net->cpu(node) : net->source_link();
        return compute_delay(cpu, task.compute_gflo, t, k);
    }

    void neighbors(int a, Seconds t, std::vector<int>& out) const {
        if (a == dest()) return;
        if (a == source()) {
            out.insert(out.end(), attached.begin(), attached.end());
            return;
        }
        const auto& c = net->constellation();
        const auto sat = orbit::satellite_at(c, a);
        for (const auto& n : orbit::isl_neighbors(c, sat, t)) out.push_back(orbit::node_id(c, n));
        if (orbit::sgl_visible(c, sat, site, t)) out.push_back(dest());
    }
};

namespace {

std::shared_ptr<const OffloadGraph::Model> make_model(const NetworkState& net, const Task& task, Scheme scheme) {
    task.validate(net.num_sites());
    auto m = std::make_shared<OffloadGraph::Model>();
    m->net = &net;
    m->task = task;
    m->scheme = scheme;
    m->sats = net.num_satellites();
    m->attached = net.attach_source(task.source, task.gen_time);
    m->is_attached.assign(m->sats, 0);
    for (int a : m->attached) m->is_attached[a] = 1;
    m->site = net.config().ground_sites[task.destination];
    return m;
}

graph::StateGraph make_graph(const std::shared_ptr<const OffloadGraph::Model>& m) {
    return graph::StateGraph(
        2, m->sats + 2, [m](int k, int a, int b, double t) { return m->edge(k, a, b, t).total(); },
        [m](int, int s, double t) { return m->compute(s, t); },
        [m](int, int a, double t, std::vector<int>& out) { m->neighbors(a, t, out); });
}

}  // namespace

OffloadGraph::OffloadGraph(const NetworkState& net, const Task& task, Scheme scheme)
    : model_(make_model(net, task, scheme)), graph_(make_graph(model_)) {}

int OffloadGraph::source_node() const noexcept { return model_->source(); }
int OffloadGraph::dest_node() const noexcept { return model_->dest(); }
const std::vector<int>& OffloadGraph::attached() const noexcept { return model_->attached; }
Scheme OffloadGraph::scheme() const noexcept { return model_->scheme; }
NodeKind OffloadGraph::kind(int node) const { return model_->kind(node); }
bool OffloadGraph::compute_permitted(int node) const { return model_->permitted(node); }

EdgeCost OffloadGraph::edge_cost(int state, int from, int to, Seconds t) const {
    return model_->edge(state, from, to, t);
}

Seconds OffloadGraph::compute_cost(int node, Seconds t) const { return model_->compute(node, t); }

OffloadGraph build_offload_graph(const NetworkState& net, const Task& task, Scheme scheme) {
    return OffloadGraph(net, task, scheme);
}

// ---------------------------------------------------------------------------
// Planning

namespace {

const ResourceTimeline* hop_resource(const NetworkState& net, const OffloadGraph& og, const Hop& hop, int site) {
    switch (hop.kind) {
        case HopKind::SourceLink:
            return &net.source_link();
        case HopKind::Isl:
            return &net.isl(hop.from.node, hop.to.node);
        case HopKind::Sgl:
            return &net.sgl(hop.from.node, site);
        case HopKind::Compute:
            return og.kind(hop.from.node) == NodeKind::Satellite ? &net.cpu(hop.from.node) : nullptr;
    }
    return nullptr;
}

}  // namespace

std::optional<OffloadPlan> plan_offload(const NetworkState& net, const Task& task, Scheme scheme,
                                        const graph::SearchOptions& options) {
    const OffloadGraph og(net, task, scheme);
    auto path = graph::shortest_path(og.graph(), og.source_node(), og.dest_node(), task.gen_time, options);
    if (!path) return std::nullopt;

    OffloadPlan plan;
    plan.task_id = task.id;
    plan.scheme = scheme;
    plan.num_satellites = net.num_satellites();
    plan.destination_site = task.destination;
    plan.overall_delay = path->length;

    // Re-walk the path accumulating exactly as the search did.
    double elapsed = 0.0;
    for (std::size_t i = 1; i < path->hops.size(); ++i) {
        const auto from = path->hops[i - 1];
        const auto to = path->hops[i];
        const Seconds t = task.gen_time + elapsed;
        Hop hop{from, to, HopKind::Compute, t, t, {}, 0.0, 0.0};
        if (from.state != to.state) {
            hop.kind = HopKind::Compute;
            hop.delay = og.compute_cost(from.node, t);
            hop.amount = task.compute_gflo;
            plan.compute_node = from.node;
            plan.breakdown.compute += hop.delay;
        } else {
            const auto cost = og.edge_cost(from.state, from.node, to.node, t);
            hop.delay = cost.total();
            hop.amount = from.state == 0 ? task.data_in_bits : task.data_out_bits;
            if (from.node == og.source_node()) {
                hop.kind = HopKind::SourceLink;
                plan.breakdown.isl_tx += hop.delay;
            } else if (to.node == og.dest_node()) {
                hop.kind = HopKind::Sgl;
                plan.breakdown.sgl_tx += hop.delay;
            } else {
                hop.kind = HopKind::Isl;
                plan.breakdown.isl_tx += hop.delay;
            }
        }
        if (const auto* tl = hop_resource(net, og, hop, task.destination); tl && hop.amount > 0.0) {
            hop.service = tl->service_span(t, hop.amount);
        } else {
            hop.service.tail = hop.kind == HopKind::Compute ? hop.delay : og.edge_cost(from.state, from.node, to.node, t).transmit;
        }
        hop.busy_end = t + hop.service.total();
        elapsed += hop.delay;
        plan.hops.push_back(hop);
    }
    if (plan.compute_node < 0) throw std::logic_error("offload path has no compute transition");

    if (plan.compute_node == og.dest_node()) {
        plan.site = ComputeSite::Ground;
    } else if (std::find(og.attached().begin(), og.attached().end(), plan.compute_node) != og.attached().end()) {
        plan.site = ComputeSite::OneHop;
    } else {
        plan.site = ComputeSite::BeyondOneHop;
    }
    plan.path = std::move(*path);
    return plan;
}

void commit(NetworkState& net, const OffloadPlan& plan) {
    const int sats = plan.num_satellites;
    if (sats != net.num_satellites()) throw std::logic_error("plan made for a different constellation");
    for (const auto& hop : plan.hops) {
        ResourceTimeline* resource = nullptr;
        switch (hop.kind) {
            case HopKind::SourceLink:
                break;
            case HopKind::Isl:
                resource = &net.isl_mut(hop.from.node, hop.to.node);
                break;
            case HopKind::Sgl:
                resource = &net.sgl_mut(hop.from.node, plan.destination_site);
                break;
            case HopKind::Compute:
                if (hop.from.node < sats) resource = &net.cpu_mut(hop.from.node);
                break;
        }
        if (resource == nullptr) continue;
        const Seconds end = resource->reserve(hop.start, hop.amount, plan.task_id);
        if (std::abs(end - hop.busy_end) > 1e-9 * std::max(1.0, std::abs(end))) {
            throw std::logic_error("network changed since the plan was made");
        }
    }
}

}  // namespace leo::offload
