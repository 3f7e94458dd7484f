#include "leo/state_graph.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <ostream>
#include <queue>
#include <sstream>
#include <utility>

namespace leo::graph {

namespace {

double checked(double w, const char* what, int state, int a, int b) {
    if (std::isnan(w) || w < 0.0) {
        std::ostringstream msg;
        msg << what << " weight " << w << " at state " << state << ", node " << a;
        if (b >= 0) msg << " -> " << b;
        throw WeightError(msg.str());
    }
    return w;
}

}  // namespace

StateGraph::StateGraph(int num_states, int num_nodes, EdgeWeightFn edge, TransitionWeightFn transition,
                       NeighborFn neighbors)
    : num_states_(num_states),
      num_nodes_(num_nodes),
      edge_(std::move(edge)),
      transition_(std::move(transition)),
      neighbors_(std::move(neighbors)) {
    if (num_states_ < 1) throw std::invalid_argument("state graph needs at least one state");
    if (num_nodes_ < 1) throw std::invalid_argument("state graph needs at least one node");
    if (!edge_) throw std::invalid_argument("missing edge weight provider");
    if (num_states_ > 1 && !transition_) throw std::invalid_argument("missing transition weight provider");
}

double StateGraph::edge_weight(int state, int from, int to, Seconds arrival) const {
    return checked(edge_(state, from, to, arrival), "edge", state, from, to);
}

double StateGraph::transition_weight(int state, int node, Seconds arrival) const {
    if (state < 0 || state + 1 >= num_states_) throw std::out_of_range("no transition out of the last state");
    return checked(transition_(state, node, arrival), "transition", state, node, -1);
}

void StateGraph::neighbors(int state, int node, Seconds arrival, std::vector<int>& out) const {
    if (neighbors_) {
        neighbors_(state, node, arrival, out);
        return;
    }
    for (int n = 0; n < num_nodes_; ++n) {
        if (n != node) out.push_back(n);
    }
}

std::optional<PathViolation> validate_path(const StatePath& path) {
    const auto& hops = path.hops;
    for (std::size_t i = 0; i < hops.size(); ++i) {
        if (hops[i].state < 0 || hops[i].node < 0) return PathViolation{i, "negative index"};
        if (i == 0) continue;
        const auto& prev = hops[i - 1];
        const auto& cur = hops[i];
        if (cur.state < prev.state) return PathViolation{i, "state decreases"};
        if (cur.state == prev.state) {
            if (cur.node == prev.node) return PathViolation{i, "self-loop within a state"};
        } else if (cur.state != prev.state + 1) {
            return PathViolation{i, "transition skips a state"};
        } else if (cur.node != prev.node) {
            return PathViolation{i, "transition changes node"};
        }
        for (std::size_t j = 0; j < i; ++j) {
            if (hops[j] == cur) return PathViolation{i, "repeated node within a state"};
        }
    }
    return std::nullopt;
}

double path_length(const StateGraph& graph, const StatePath& path, Seconds depart_time) {
    if (auto v = validate_path(path)) {
        throw InvalidPath("hop " + std::to_string(v->hop_index) + ": " + v->reason);
    }
    double total = 0.0;
    for (std::size_t i = 1; i < path.hops.size(); ++i) {
        const auto& a = path.hops[i - 1];
        const auto& b = path.hops[i];
        if (a.state >= graph.num_states() || b.state >= graph.num_states() || a.node >= graph.num_nodes() ||
            b.node >= graph.num_nodes()) {
            throw InvalidPath("hop " + std::to_string(i) + ": index outside the graph");
        }
        const Seconds t = depart_time + total;
        const double w = a.state == b.state ? graph.edge_weight(a.state, a.node, b.node, t)
                                            : graph.transition_weight(a.state, a.node, t);
        if (w == kInfinity) return kInfinity;
        total += w;
    }
    return total;
}

SearchState run_search(const StateGraph& graph, int source, Seconds depart_time, const SearchOptions& options,
                       std::optional<StateNode> target) {
    const int num_states = graph.num_states();
    const int num_nodes = graph.num_nodes();
    if (source < 0 || source >= num_nodes) throw std::out_of_range("source outside the graph");

    SearchState st;
    st.num_states = num_states;
    st.num_nodes = num_nodes;
    const int total = graph.size();
    st.dist.assign(total, kInfinity);
    st.parent.assign(total, -1);
    st.visited.assign(total, 0);
    st.extraction_order.reserve(total);

    const int source_index = graph.index({0, source});
    const int target_index = target ? graph.index(*target) : -1;
    st.dist[source_index] = 0.0;

    using Entry = std::pair<double, int>;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
    const bool use_heap = options.extraction == Extraction::BinaryHeap;
    if (use_heap) heap.emplace(0.0, source_index);

    std::vector<int> adjacent;
    for (int round = 0; round < total; ++round) {
        int best = -1;
        double theta = kInfinity;
        if (use_heap) {
            while (!heap.empty()) {
                auto [d, i] = heap.top();
                heap.pop();
                if (!st.visited[i] && d == st.dist[i]) {
                    best = i;
                    theta = d;
                    break;
                }
            }
        } else {
            // strict '<' keeps the first, i.e. lexicographically smallest, minimum
            for (int i = 0; i < total; ++i) {
                if (!st.visited[i] && st.dist[i] < theta) {
                    theta = st.dist[i];
                    best = i;
                }
            }
        }
        if (best < 0) break;  // everything left is unreachable

        st.visited[best] = 1;
        st.extraction_order.push_back(best);
        if (options.stop_at_target && best == target_index) break;

        const StateNode v = graph.node_at(best);
        const Seconds arrival = depart_time + theta;

        adjacent.clear();
        graph.neighbors(v.state, v.node, arrival, adjacent);
        for (int n : adjacent) {
            if (n == v.node) continue;
            const int ni = graph.index({v.state, n});
            if (st.visited[ni]) continue;
            const double w = graph.edge_weight(v.state, v.node, n, arrival);
            if (w == kInfinity) continue;
            const double gamma = theta + w;
            if (gamma < st.dist[ni]) {
                st.dist[ni] = gamma;
                st.parent[ni] = best;
                if (use_heap) heap.emplace(gamma, ni);
            }
        }

        if (v.state + 1 < num_states) {
            const int ni = graph.index({v.state + 1, v.node});
            if (!st.visited[ni]) {
                const double w = graph.transition_weight(v.state, v.node, arrival);
                if (w != kInfinity) {
                    const double gamma = theta + w;
                    if (gamma < st.dist[ni]) {
                        st.dist[ni] = gamma;
                        st.parent[ni] = best;
                        if (use_heap) heap.emplace(gamma, ni);
                    }
                }
            }
        }
    }
    return st;
}

std::optional<StatePath> extract_path(const SearchState& state, int source, StateNode target) {
    const int n = state.num_nodes;
    const int ti = target.state * n + target.node;
    if (state.dist[ti] == kInfinity) return std::nullopt;

    StatePath path;
    path.length = state.dist[ti];
    for (int i = ti; i >= 0; i = state.parent[i]) {
        path.hops.push_back({i / n, i % n});
        if (i == source) break;  // source index is (0, source) == source
    }
    std::reverse(path.hops.begin(), path.hops.end());
    return path;
}

std::optional<StatePath> shortest_path(const StateGraph& graph, int source, int dest, Seconds depart_time,
                                       const SearchOptions& options) {
    if (dest < 0 || dest >= graph.num_nodes()) throw std::out_of_range("destination outside the graph");
    const StateNode target{graph.num_states() - 1, dest};
    const auto st = run_search(graph, source, depart_time, options, target);
    return extract_path(st, source, target);
}

namespace {

struct Enumerator {
    const StateGraph& graph;
    StateNode target;
    Seconds depart;
    std::vector<std::vector<char>> seen;  // [state][node]
    std::vector<StateNode> current;
    std::optional<StatePath> best;

    void visit(StateNode v, double length) {
        if (v == target) {
            if (!best || length < best->length) best = StatePath{current, length};
            return;
        }
        const Seconds arrival = depart + length;
        for (int n = 0; n < graph.num_nodes(); ++n) {
            if (n == v.node || seen[v.state][n]) continue;
            const double w = graph.edge_weight(v.state, v.node, n, arrival);
            if (w == kInfinity) continue;
            step({v.state, n}, length + w);
        }
        if (v.state + 1 < graph.num_states()) {
            const double w = graph.transition_weight(v.state, v.node, arrival);
            if (w != kInfinity) step({v.state + 1, v.node}, length + w);
        }
    }

    void step(StateNode next, double length) {
        seen[next.state][next.node] = 1;
        current.push_back(next);
        visit(next, length);
        current.pop_back();
        seen[next.state][next.node] = 0;
    }
};

}  // namespace

std::optional<StatePath> brute_force_shortest_path(const StateGraph& graph, int source, int dest,
                                                   Seconds depart_time, int bound) {
    if (graph.size() > bound) {
        throw BoundExceeded("enumeration bound " + std::to_string(bound) + " exceeded by graph of size " +
                            std::to_string(graph.size()));
    }
    if (source < 0 || source >= graph.num_nodes() || dest < 0 || dest >= graph.num_nodes()) {
        throw std::out_of_range("endpoint outside the graph");
    }
    Enumerator e{graph,
                 {graph.num_states() - 1, dest},
                 depart_time,
                 std::vector<std::vector<char>>(graph.num_states(), std::vector<char>(graph.num_nodes(), 0)),
                 {},
                 std::nullopt};
    e.step({0, source}, 0.0);
    return e.best;
}

std::optional<std::string> check_fifo(const StateGraph& graph, const std::vector<Seconds>& times, double tolerance) {
    auto report = [](const char* what, int k, int a, int b, Seconds t1, Seconds t2) {
        std::ostringstream msg;
        msg << what << " state " << k << " node " << a;
        if (b >= 0) msg << " -> " << b;
        msg << ": departing at " << t1 << " arrives after departing at " << t2;
        return msg.str();
    };
    for (std::size_t i = 1; i < times.size(); ++i) {
        const Seconds t1 = times[i - 1];
        const Seconds t2 = times[i];
        if (t2 < t1) return std::string("sample times must be sorted");
        for (int k = 0; k < graph.num_states(); ++k) {
            for (int a = 0; a < graph.num_nodes(); ++a) {
                for (int b = 0; b < graph.num_nodes(); ++b) {
                    if (a == b) continue;
                    const double w1 = graph.edge_weight(k, a, b, t1);
                    const double w2 = graph.edge_weight(k, a, b, t2);
                    if (t1 + w1 > t2 + w2 + tolerance) return report("edge", k, a, b, t1, t2);
                }
                if (k + 1 < graph.num_states()) {
                    const double w1 = graph.transition_weight(k, a, t1);
                    const double w2 = graph.transition_weight(k, a, t2);
                    if (t1 + w1 > t2 + w2 + tolerance) return report("transition", k, a, -1, t1, t2);
                }
            }
        }
    }
    return std::nullopt;
}

void dump(std::ostream& os, const SearchState& state) {
    os << "# state node dist parent_state parent_node visited\n";
    for (int i = 0; i < static_cast<int>(state.dist.size()); ++i) {
        os << i / state.num_nodes << ' ' << i % state.num_nodes << ' ' << state.dist[i] << ' ';
        if (state.parent[i] < 0) {
            os << "- -";
        } else {
            os << state.parent[i] / state.num_nodes << ' ' << state.parent[i] % state.num_nodes;
        }
        os << ' ' << (state.visited[i] ? 1 : 0) << '\n';
    }
}

}  // namespace leo::graph
