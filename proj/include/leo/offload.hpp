#pragma once

/**
 * @file offload.hpp
 * @brief Task offloading over a LEO constellation as a two-state shortest path.
 *
 * Every satellite, the task's source spacecraft and its ground destination
 * appear twice: once in the uncomputed state (state 0) and once in the
 * computed state (state 1). Same-state edges cost the time to push the raw
 * input (state 0) or the result (state 1) over a link; the transition at a
 * node costs the time to compute the task there. Both are found by
 * integrating the resource's available capacity forward from the moment the
 * task reaches the node, so queueing behind earlier reservations is part of
 * the weight.
 *
 * Node numbering inside an offload graph: satellites 0..N-1, then the source
 * (N) and the destination (N+1).
 */

#include "leo/constellation.hpp"
#include "leo/state_graph.hpp"
#include "leo/timeline.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

namespace leo::offload {

enum class Scheme { Adaptive, Ground, OneHop };

[[nodiscard]] std::string_view to_string(Scheme scheme);
[[nodiscard]] std::optional<Scheme> parse_scheme(std::string_view text);
inline constexpr Scheme kAllSchemes[] = {Scheme::Adaptive, Scheme::Ground, Scheme::OneHop};

/// Pre-existing compute load around a region: satellites whose sub-point is
/// within `radius_km` of the centre at the epoch lose `utilization` of their
/// capability for the whole run.
struct BackgroundLoad {
    double lat_deg = 0.0;
    double lon_deg = 0.0;
    double radius_km = 0.0;
    double utilization = 0.0;

    friend bool operator==(const BackgroundLoad&, const BackgroundLoad&) = default;
};

struct NetworkConfig {
    orbit::ConstellationConfig constellation;
    double isl_rate_bps = 5e9;
    double sgl_rate_bps = 1e9;
    double compute_gflops = 200.0;
    double source_range_km = 2000.0;
    bool propagation_delay = false;
    std::vector<orbit::GroundNode> ground_sites;
    std::vector<BackgroundLoad> background_load;

    void validate() const;

    friend bool operator==(const NetworkConfig&, const NetworkConfig&) = default;
};

/// Institutions used as task destinations unless configured otherwise. All
/// sit poleward of 40 degrees, where the default shell never leaves a gap
/// in SGL coverage.
[[nodiscard]] std::vector<orbit::GroundNode> default_ground_sites();

struct Task {
    std::uint64_t id = 0;
    orbit::GeoPosition source;  // source spacecraft when the task is generated
    int destination = 0;        // index into NetworkConfig::ground_sites
    Seconds gen_time = 0.0;
    double compute_gflo = 0.0;
    double data_in_bits = 0.0;
    double data_out_bits = 16.0;

    void validate(int num_sites) const;
};

/**
 * Resource availability of the whole network. ISL timelines are directed
 * (each direction of a link is its own channel); SGL timelines are keyed by
 * (satellite, ground site). Timelines are materialized on first write;
 * reading an untouched link yields an idle timeline at the link maximum.
 *
 * Whether a link exists at a given time is decided by the geometry, not by
 * the timeline.
 */
class NetworkState {
public:
    explicit NetworkState(NetworkConfig config);

    [[nodiscard]] const NetworkConfig& config() const noexcept { return config_; }
    [[nodiscard]] const orbit::ConstellationConfig& constellation() const noexcept { return config_.constellation; }
    [[nodiscard]] int num_satellites() const noexcept { return config_.constellation.num_satellites(); }
    [[nodiscard]] int num_sites() const noexcept { return static_cast<int>(config_.ground_sites.size()); }

    [[nodiscard]] const ResourceTimeline& isl(int from, int to) const;
    [[nodiscard]] const ResourceTimeline& sgl(int sat, int site) const;
    [[nodiscard]] const ResourceTimeline& cpu(int sat) const;
    /// Private, always idle link between a source spacecraft and a satellite.
    [[nodiscard]] const ResourceTimeline& source_link() const noexcept { return idle_isl_; }

    ResourceTimeline& isl_mut(int from, int to);
    ResourceTimeline& sgl_mut(int sat, int site);
    ResourceTimeline& cpu_mut(int sat);

    /// Satellites in line of sight and within source range of `source` at `t`.
    [[nodiscard]] std::vector<int> attach_source(const orbit::GeoPosition& source, Seconds t) const;

    [[nodiscard]] const std::map<std::pair<int, int>, ResourceTimeline>& isl_timelines() const noexcept {
        return isl_;
    }
    [[nodiscard]] const std::map<std::pair<int, int>, ResourceTimeline>& sgl_timelines() const noexcept {
        return sgl_;
    }
    [[nodiscard]] const std::vector<ResourceTimeline>& cpu_timelines() const noexcept { return cpus_; }

private:
    NetworkConfig config_;
    ResourceTimeline idle_isl_;
    ResourceTimeline idle_sgl_;
    std::vector<ResourceTimeline> cpus_;
    std::map<std::pair<int, int>, ResourceTimeline> isl_;
    std::map<std::pair<int, int>, ResourceTimeline> sgl_;
};

struct EdgeCost {
    Seconds transmit = graph::kInfinity;  // includes waiting for the link
    Seconds propagation = 0.0;

    [[nodiscard]] Seconds total() const noexcept { return transmit + propagation; }
};

/**
 * The two-state graph for one task under one scheme. Holds a pointer to the
 * NetworkState, which must outlive it and must not change while it is used.
 */
class OffloadGraph {
public:
    OffloadGraph(const NetworkState& net, const Task& task, Scheme scheme);

    [[nodiscard]] const graph::StateGraph& graph() const noexcept { return graph_; }
    [[nodiscard]] int source_node() const noexcept;
    [[nodiscard]] int dest_node() const noexcept;
    [[nodiscard]] const std::vector<int>& attached() const noexcept;
    [[nodiscard]] Scheme scheme() const noexcept;
    [[nodiscard]] NodeKind kind(int node) const;
    [[nodiscard]] bool compute_permitted(int node) const;

    [[nodiscard]] EdgeCost edge_cost(int state, int from, int to, Seconds t) const;
    [[nodiscard]] Seconds compute_cost(int node, Seconds t) const;

    struct Model;

private:
    std::shared_ptr<const Model> model_;
    graph::StateGraph graph_;
};

[[nodiscard]] OffloadGraph build_offload_graph(const NetworkState& net, const Task& task, Scheme scheme);

enum class HopKind { SourceLink, Isl, Sgl, Compute };
enum class ComputeSite { Ground, OneHop, BeyondOneHop };

[[nodiscard]] std::string_view to_string(ComputeSite site);

struct Hop {
    graph::StateNode from;
    graph::StateNode to;
    HopKind kind = HopKind::Isl;
    Seconds start = 0.0;             // arrival at `from`
    Seconds busy_end = 0.0;          // resource released (transfer or computation finished)
    ResourceTimeline::Span service;  // time holding or waiting for the resource
    Seconds delay = 0.0;             // edge weight, propagation included
    double amount = 0.0;             // bits or GFLO served
};

struct DelayBreakdown {
    Seconds isl_tx = 0.0;
    Seconds sgl_tx = 0.0;
    Seconds compute = 0.0;

    [[nodiscard]] Seconds total() const noexcept { return isl_tx + sgl_tx + compute; }
};

struct OffloadPlan {
    std::uint64_t task_id = 0;
    Scheme scheme = Scheme::Adaptive;
    graph::StatePath path;
    int compute_node = -1;
    ComputeSite site = ComputeSite::Ground;
    Seconds overall_delay = 0.0;
    DelayBreakdown breakdown;
    std::vector<Hop> hops;
    int num_satellites = 0;
    int destination_site = 0;
};

/// Shortest path from the uncomputed source to the computed destination.
/// Returns nullopt when the destination cannot be reached.
[[nodiscard]] std::optional<OffloadPlan> plan_offload(const NetworkState& net, const Task& task, Scheme scheme,
                                                      const graph::SearchOptions& options = {});

/// Commits the plan's link and CPU reservations. Throws std::logic_error if
/// the network no longer matches the snapshot the plan was made on.
void commit(NetworkState& net, const OffloadPlan& plan);

}  // namespace leo::offload
