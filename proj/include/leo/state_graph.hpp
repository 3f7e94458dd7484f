#pragma once

/**
 * @file state_graph.hpp
 * @brief Multi-state graphs and the extended Dijkstra search over them.
 *
 * A state graph replicates every base node across an ordered list of
 * states. Within a state, nodes are joined by edges whose weights come from
 * a per-state edge provider; a node in state k is joined to the same node in
 * state k+1 by a transition whose weight comes from a transition provider.
 * Weights may depend on the time at which the search reaches the head of the
 * edge, which is how transmission and computation delays over time-varying
 * resources are expressed.
 *
 * States are 0-based in this API: a graph with three states has states
 * 0, 1 and 2, and a path runs from (0, source) to (2, dest).
 */

#include <compare>
#include <cstddef>
#include <functional>
#include <iosfwd>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace leo::graph {

using Seconds = double;

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Base node `node` replicated in state `state`.
struct StateNode {
    int state = 0;
    int node = 0;

    friend auto operator<=>(const StateNode&, const StateNode&) = default;
};

/// Weight of the same-state edge from -> to, queried when the search reaches `from`.
using EdgeWeightFn = std::function<double(int state, int from, int to, Seconds arrival)>;
/// Weight of the transition (state, node) -> (state + 1, node).
using TransitionWeightFn = std::function<double(int state, int node, Seconds arrival)>;
/// Optional adjacency hint. Appends every node that may have a finite edge
/// from `node` in `state`; nodes left out are treated as unreachable in one hop.
using NeighborFn = std::function<void(int state, int node, Seconds arrival, std::vector<int>& out)>;

class WeightError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidPath : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class BoundExceeded : public std::length_error {
public:
    using std::length_error::length_error;
};

/**
 * Immutable state graph with a dense query model: an infinite weight means
 * the edge or transition is absent. Providers must be safe to call
 * concurrently if the graph is shared between searches.
 *
 * Time-dependent providers must satisfy the FIFO property
 * (t1 <= t2 implies t1 + w(t1) <= t2 + w(t2)) for the search to be exact;
 * see check_fifo().
 */
class StateGraph {
public:
    StateGraph(int num_states, int num_nodes, EdgeWeightFn edge, TransitionWeightFn transition,
               NeighborFn neighbors = {});

    [[nodiscard]] int num_states() const noexcept { return num_states_; }
    [[nodiscard]] int num_nodes() const noexcept { return num_nodes_; }
    [[nodiscard]] int size() const noexcept { return num_states_ * num_nodes_; }

    /// Checked queries: throw WeightError on negative or NaN weights.
    [[nodiscard]] double edge_weight(int state, int from, int to, Seconds arrival) const;
    [[nodiscard]] double transition_weight(int state, int node, Seconds arrival) const;

    [[nodiscard]] bool has_neighbor_hint() const noexcept { return static_cast<bool>(neighbors_); }
    void neighbors(int state, int node, Seconds arrival, std::vector<int>& out) const;

    [[nodiscard]] int index(StateNode v) const noexcept { return v.state * num_nodes_ + v.node; }
    [[nodiscard]] StateNode node_at(int index) const noexcept {
        return {index / num_nodes_, index % num_nodes_};
    }

private:
    int num_states_;
    int num_nodes_;
    EdgeWeightFn edge_;
    TransitionWeightFn transition_;
    NeighborFn neighbors_;
};

/// Sequence of visited (state, node) pairs; `hops.size() - 1` edges.
struct StatePath {
    std::vector<StateNode> hops;
    double length = 0.0;

    [[nodiscard]] std::size_t num_edges() const noexcept {
        return hops.empty() ? 0 : hops.size() - 1;
    }
    [[nodiscard]] bool empty() const noexcept { return num_edges() == 0; }
};

struct PathViolation {
    std::size_t hop_index = 0;
    std::string reason;
};

/// Checks the path rules: states never decrease, no (state, node) repeats,
/// and each step is either a same-state move or a +1 state transition in place.
[[nodiscard]] std::optional<PathViolation> validate_path(const StatePath& path);

/// Sum of edge weights along `path`, each queried at the cumulative arrival
/// time. Throws InvalidPath if the path fails validation.
[[nodiscard]] double path_length(const StateGraph& graph, const StatePath& path, Seconds depart_time);

enum class Extraction {
    LinearScan,  // reference: scan every unvisited node for the minimum
    BinaryHeap,
};

struct SearchOptions {
    Extraction extraction = Extraction::LinearScan;
    /// Stop as soon as the target is extracted. The target's distance and
    /// path are already final at that point.
    bool stop_at_target = true;
};

/// Working state of one search. Indexed by StateGraph::index().
struct SearchState {
    int num_states = 0;
    int num_nodes = 0;
    std::vector<double> dist;
    std::vector<int> parent;  // -1 when undefined
    std::vector<char> visited;
    std::vector<int> extraction_order;

    [[nodiscard]] double distance(StateNode v) const { return dist[v.state * num_nodes + v.node]; }
};

/// Runs the extended Dijkstra search from (0, source). When `target` is set
/// and options.stop_at_target is true, the search ends once the target is
/// extracted. Ties at extraction go to the lexicographically smallest
/// (state, node).
[[nodiscard]] SearchState run_search(const StateGraph& graph, int source, Seconds depart_time,
                                     const SearchOptions& options = {},
                                     std::optional<StateNode> target = std::nullopt);

/// Follows parent links back from `target`. Returns nullopt if unreachable.
[[nodiscard]] std::optional<StatePath> extract_path(const SearchState& state, int source, StateNode target);

/// Shortest path from (0, source) to (last state, dest); nullopt if unreachable.
[[nodiscard]] std::optional<StatePath> shortest_path(const StateGraph& graph, int source, int dest,
                                                     Seconds depart_time, const SearchOptions& options = {});

inline constexpr int kDefaultEnumerationBound = 24;

/// Exhaustive enumeration over every valid path. Test oracle; throws
/// BoundExceeded when num_states * num_nodes exceeds `bound`.
[[nodiscard]] std::optional<StatePath> brute_force_shortest_path(const StateGraph& graph, int source, int dest,
                                                                 Seconds depart_time,
                                                                 int bound = kDefaultEnumerationBound);

/// Samples every edge and transition at consecutive pairs of `times` and
/// reports the first FIFO violation found, if any.
[[nodiscard]] std::optional<std::string> check_fifo(const StateGraph& graph, const std::vector<Seconds>& times,
                                                    double tolerance = 1e-9);

/// Line-oriented debug dump: one line per (state, node).
void dump(std::ostream& os, const SearchState& state);

}  // namespace leo::graph
