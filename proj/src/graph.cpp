#include "tdakit/graph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>
#include <string>

#include "tdakit/error.hpp"
#include "tdakit/flag.hpp"

namespace tdakit {

namespace {

std::vector<Edge> normalize_edges(std::size_t n, const std::vector<std::pair<Vertex, Vertex>>& raw)
{
    std::vector<Edge> edges;
    edges.reserve(raw.size());
    for (auto [a, b] : raw) {
        if (a == b)
            throw ValidationError("graph: self-loop at vertex " + std::to_string(a));
        if (a >= n || b >= n)
            throw ValidationError("graph: edge (" + std::to_string(a) + "," + std::to_string(b) +
                                  ") has an endpoint out of range");
        edges.push_back({std::min(a, b), std::max(a, b)});
    }
    return edges;
}

}  // namespace

Graph::Graph(std::size_t n, std::vector<std::pair<Vertex, Vertex>> edges)
{
    edges_ = normalize_edges(n, edges);
    std::sort(edges_.begin(), edges_.end());
    auto dup = std::adjacent_find(edges_.begin(), edges_.end());
    if (dup != edges_.end())
        throw ValidationError("graph: duplicate edge (" + std::to_string(dup->u) + "," +
                              std::to_string(dup->v) + ")");
    adjacency_.resize(n);
    for (const auto& e : edges_) {
        adjacency_[e.u].push_back(e.v);
        adjacency_[e.v].push_back(e.u);
    }
    for (auto& list : adjacency_)
        std::sort(list.begin(), list.end());
}

Graph::Graph(std::size_t n, std::vector<std::pair<Vertex, Vertex>> edges, std::vector<double> weights)
{
    if (weights.size() != edges.size())
        throw ValidationError("graph: edge weight count does not match edge count");
    auto normalized = normalize_edges(n, edges);
    std::vector<std::size_t> order(normalized.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return normalized[a] < normalized[b]; });
    std::vector<std::pair<Vertex, Vertex>> sorted_edges;
    std::vector<double> sorted_weights;
    for (auto i : order) {
        sorted_edges.emplace_back(normalized[i].u, normalized[i].v);
        sorted_weights.push_back(weights[i]);
    }
    *this = Graph(n, std::move(sorted_edges));
    set_edge_weights(std::move(sorted_weights));
}

bool Graph::has_edge(Vertex a, Vertex b) const { return edge_index(a, b).has_value(); }

std::optional<std::size_t> Graph::edge_index(Vertex a, Vertex b) const
{
    const Edge key{std::min(a, b), std::max(a, b)};
    auto it = std::lower_bound(edges_.begin(), edges_.end(), key);
    if (it == edges_.end() || *it != key)
        return std::nullopt;
    return static_cast<std::size_t>(it - edges_.begin());
}

std::span<const double> Graph::edge_weights() const
{
    if (!weights_)
        throw ValidationError("graph has no edge weights");
    return *weights_;
}

void Graph::set_edge_weights(std::vector<double> weights)
{
    if (weights.size() != edges_.size())
        throw ValidationError("graph: edge weight count does not match edge count");
    for (double w : weights)
        if (!std::isfinite(w))
            throw ValidationError("graph: edge weights must be finite");
    weights_ = std::move(weights);
}

std::span<const double> Graph::node_values() const
{
    if (!node_values_)
        throw ValidationError("graph has no node values");
    return *node_values_;
}

void Graph::set_node_values(std::vector<double> values)
{
    if (values.size() != num_vertices())
        throw ValidationError("graph: expected " + std::to_string(num_vertices()) + " node values, got " +
                              std::to_string(values.size()));
    for (double v : values)
        if (!std::isfinite(v))
            throw ValidationError("graph: node values must be finite");
    node_values_ = std::move(values);
}

Graph Graph::induced(std::span<const Vertex> keep) const
{
    std::vector<Vertex> sorted(keep.begin(), keep.end());
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw ValidationError("induced subgraph: repeated vertex");
    constexpr auto none = std::numeric_limits<Vertex>::max();
    std::vector<Vertex> relabel(num_vertices(), none);
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        if (sorted[i] >= num_vertices())
            throw ValidationError("induced subgraph: vertex out of range");
        relabel[sorted[i]] = static_cast<Vertex>(i);
    }
    std::vector<std::pair<Vertex, Vertex>> edges;
    std::vector<double> weights;
    for (std::size_t i = 0; i < edges_.size(); ++i) {
        const auto& e = edges_[i];
        if (relabel[e.u] != none && relabel[e.v] != none) {
            edges.emplace_back(relabel[e.u], relabel[e.v]);
            if (weights_)
                weights.push_back((*weights_)[i]);
        }
    }
    Graph out = weights_ ? Graph(sorted.size(), std::move(edges), std::move(weights))
                         : Graph(sorted.size(), std::move(edges));
    if (node_values_) {
        std::vector<double> values;
        for (Vertex v : sorted)
            values.push_back((*node_values_)[v]);
        out.set_node_values(std::move(values));
    }
    return out;
}

std::vector<std::size_t> Graph::component_labels() const
{
    constexpr auto none = std::numeric_limits<std::size_t>::max();
    std::vector<std::size_t> label(num_vertices(), none);
    std::size_t next = 0;
    std::vector<Vertex> stack;
    for (Vertex s = 0; s < num_vertices(); ++s) {
        if (label[s] != none)
            continue;
        label[s] = next;
        stack.assign(1, s);
        while (!stack.empty()) {
            Vertex v = stack.back();
            stack.pop_back();
            for (Vertex w : adjacency_[v])
                if (label[w] == none) {
                    label[w] = next;
                    stack.push_back(w);
                }
        }
        ++next;
    }
    return label;
}

std::size_t Graph::component_count() const
{
    auto labels = component_labels();
    return labels.empty() ? 0 : *std::max_element(labels.begin(), labels.end()) + 1;
}

// ---------------------------------------------------------------------------

std::vector<long> hop_distances(const Graph& g, Vertex source)
{
    std::vector<long> dist(g.num_vertices(), -1);
    std::queue<Vertex> queue;
    dist[source] = 0;
    queue.push(source);
    while (!queue.empty()) {
        Vertex v = queue.front();
        queue.pop();
        for (Vertex w : g.neighbors(v))
            if (dist[w] < 0) {
                dist[w] = dist[v] + 1;
                queue.push(w);
            }
    }
    return dist;
}

std::vector<double> node_filtration_values(const Graph& g, NodeFunction fn)
{
    const std::size_t n = g.num_vertices();
    std::vector<double> out(n);
    switch (fn) {
    case NodeFunction::External: {
        auto v = g.node_values();
        return {v.begin(), v.end()};
    }
    case NodeFunction::Degree:
        for (Vertex v = 0; v < n; ++v)
            out[v] = static_cast<double>(g.degree(v));
        return out;
    case NodeFunction::Eccentricity:
    case NodeFunction::Closeness:
        for (Vertex v = 0; v < n; ++v) {
            auto d = hop_distances(g, v);
            long max_d = 0, sum_d = 0;
            for (long x : d) {
                if (x < 0)
                    throw ValidationError(std::string(fn == NodeFunction::Eccentricity ? "eccentricity"
                                                                                        : "closeness") +
                                          " is undefined on a disconnected graph");
                max_d = std::max(max_d, x);
                sum_d += x;
            }
            if (fn == NodeFunction::Eccentricity)
                out[v] = static_cast<double>(max_d);
            else
                out[v] = sum_d == 0 ? 0.0 : static_cast<double>(n - 1) / static_cast<double>(sum_d);
        }
        return out;
    }
    return out;
}

namespace {

// Smallest threshold >= value for every entry, or a ValidationError listing
// the ids left uncovered.
std::vector<double> snap_to_thresholds(std::span<const double> values, std::span<const double> thresholds,
                                       const char* what, const char* item)
{
    if (thresholds.empty())
        throw ValidationError(std::string(what) + ": threshold list is empty");
    for (std::size_t i = 1; i < thresholds.size(); ++i)
        if (!(thresholds[i] > thresholds[i - 1]))
            throw ValidationError(std::string(what) + ": thresholds must be strictly increasing");
    std::vector<double> out(values.size());
    std::string uncovered;
    for (std::size_t i = 0; i < values.size(); ++i) {
        auto it = std::lower_bound(thresholds.begin(), thresholds.end(), values[i]);
        if (it == thresholds.end())
            uncovered += (uncovered.empty() ? "" : ",") + std::to_string(i);
        else
            out[i] = *it;
    }
    if (!uncovered.empty())
        throw ValidationError(std::string(what) + ": thresholds do not cover " + item + "s " + uncovered);
    return out;
}

FilteredComplex node_clique_filtration(const Graph& g, std::span<const double> entry, int clique_dim)
{
    if (clique_dim < 1)
        throw ValidationError("clique dimension must be at least 1");
    std::vector<WeightedEdge> edges;
    edges.reserve(g.num_edges());
    for (const auto& e : g.edges())
        edges.push_back({e.u, e.v, std::max(entry[e.u], entry[e.v])});
    return flag_filtration(entry, edges, clique_dim, clique_dim);
}

}  // namespace

FilteredComplex sublevel_node_filtration(const Graph& g, std::span<const double> thresholds, int clique_dim)
{
    const auto entry = snap_to_thresholds(g.node_values(), thresholds, "sublevel_node_filtration", "vertex");
    return node_clique_filtration(g, entry, clique_dim);
}

FilteredComplex superlevel_node_filtration(const Graph& g, std::span<const double> thresholds, int clique_dim)
{
    for (std::size_t i = 1; i < thresholds.size(); ++i)
        if (!(thresholds[i] < thresholds[i - 1]))
            throw ValidationError("superlevel_node_filtration: thresholds must be strictly decreasing");
    std::vector<double> neg_values, neg_thresholds;
    for (double v : g.node_values())
        neg_values.push_back(-v);
    for (double t : thresholds)
        neg_thresholds.push_back(-t);
    const auto entry =
        snap_to_thresholds(neg_values, neg_thresholds, "superlevel_node_filtration", "vertex");
    return node_clique_filtration(g, entry, clique_dim);
}

FilteredComplex sublevel_edge_filtration(const Graph& g, std::span<const double> thresholds, int clique_dim)
{
    if (clique_dim < 1)
        throw ValidationError("clique dimension must be at least 1");
    const auto entry = snap_to_thresholds(g.edge_weights(), thresholds, "sublevel_edge_filtration", "edge");
    std::vector<double> vertex_entry(g.num_vertices(), thresholds.back());
    std::vector<WeightedEdge> edges;
    for (std::size_t i = 0; i < g.num_edges(); ++i) {
        const auto& e = g.edges()[i];
        vertex_entry[e.u] = std::min(vertex_entry[e.u], entry[i]);
        vertex_entry[e.v] = std::min(vertex_entry[e.v], entry[i]);
        edges.push_back({e.u, e.v, entry[i]});
    }
    return flag_filtration(vertex_entry, edges, clique_dim, clique_dim);
}

FilteredComplex power_filtration(const Graph& g, int max_hops, int max_cell_dim)
{
    if (max_hops < 1)
        throw ValidationError("power_filtration: max_hops must be at least 1");
    if (max_cell_dim < 1)
        throw ValidationError("power_filtration: max_cell_dim must be at least 1");
    const std::size_t n = g.num_vertices();
    std::optional<int> cap = max_cell_dim;
    if (n > 0 && static_cast<std::size_t>(max_cell_dim) > n - 1) {
        max_cell_dim = static_cast<int>(n - 1);
        cap.reset();
    }
    std::vector<WeightedEdge> edges;
    for (Vertex s = 0; s < n; ++s) {
        auto d = hop_distances(g, s);
        for (Vertex t = s + 1; t < n; ++t)
            if (d[t] > 0 && d[t] <= max_hops)
                edges.push_back({s, t, static_cast<double>(d[t])});
    }
    std::vector<double> zeros(n, 0.0);
    return flag_filtration(zeros, edges, std::max(max_cell_dim, 0), cap);
}

FilteredComplex weighted_power_filtration(const Graph& g, double max_distance, int max_cell_dim,
                                          const std::function<double(double)>& length)
{
    if (!(max_distance > 0.0))
        throw ValidationError("weighted_power_filtration: max_distance must be positive");
    if (max_cell_dim < 1)
        throw ValidationError("weighted_power_filtration: max_cell_dim must be at least 1");
    const auto weights = g.edge_weights();
    std::vector<double> lengths(weights.size());
    for (std::size_t i = 0; i < weights.size(); ++i) {
        lengths[i] = length ? length(weights[i]) : 1.0 / weights[i];
        if (!(lengths[i] > 0.0) || !std::isfinite(lengths[i]))
            throw ValidationError("weighted_power_filtration: edge " + std::to_string(i) +
                                  " has a non-positive or infinite length");
    }
    const std::size_t n = g.num_vertices();
    std::optional<int> cap = max_cell_dim;
    if (n > 0 && static_cast<std::size_t>(max_cell_dim) > n - 1) {
        max_cell_dim = static_cast<int>(n - 1);
        cap.reset();
    }
    std::vector<WeightedEdge> edges;
    constexpr double inf = std::numeric_limits<double>::infinity();
    using Item = std::pair<double, Vertex>;
    for (Vertex s = 0; s < n; ++s) {
        std::vector<double> dist(n, inf);
        std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
        dist[s] = 0.0;
        heap.emplace(0.0, s);
        while (!heap.empty()) {
            auto [d, v] = heap.top();
            heap.pop();
            if (d > dist[v])
                continue;
            for (Vertex w : g.neighbors(v)) {
                const double nd = d + lengths[*g.edge_index(v, w)];
                if (nd < dist[w]) {
                    dist[w] = nd;
                    heap.emplace(nd, w);
                }
            }
        }
        for (Vertex t = s + 1; t < n; ++t)
            if (dist[t] <= max_distance)
                edges.push_back({s, t, dist[t]});
    }
    std::vector<double> zeros(n, 0.0);
    return flag_filtration(zeros, edges, std::max(max_cell_dim, 0), cap);
}

std::vector<double> normalize_edge_weights(std::span<const double> amounts, double alpha)
{
    if (!(alpha > 0.0))
        throw ValidationError("normalize_edge_weights: alpha must be positive");
    if (amounts.empty())
        throw ValidationError("normalize_edge_weights: no amounts given");
    const auto [lo, hi] = std::minmax_element(amounts.begin(), amounts.end());
    const double a_min = *lo, a_max = *hi;
    if (a_max == a_min)
        throw ValidationError("normalize_edge_weights: all amounts are equal (degenerate range)");
    std::vector<double> out(amounts.size());
    for (std::size_t i = 0; i < amounts.size(); ++i)
        out[i] = 1.0 / (1.0 + alpha * (amounts[i] - a_min) / (a_max - a_min));
    return out;
}

Subgraph coral_reduce(const Graph& g, int k)
{
    if (k < 1)
        throw ValidationError("coral_reduce: k must be at least 1");
    const std::size_t n = g.num_vertices();
    std::vector<std::size_t> degree(n);
    std::vector<bool> removed(n, false);
    std::vector<Vertex> queue;
    for (Vertex v = 0; v < n; ++v) {
        degree[v] = g.degree(v);
        if (degree[v] <= static_cast<std::size_t>(k)) {
            removed[v] = true;
            queue.push_back(v);
        }
    }
    while (!queue.empty()) {
        Vertex v = queue.back();
        queue.pop_back();
        for (Vertex w : g.neighbors(v)) {
            if (removed[w])
                continue;
            if (--degree[w] <= static_cast<std::size_t>(k)) {
                removed[w] = true;
                queue.push_back(w);
            }
        }
    }
    Subgraph out;
    for (Vertex v = 0; v < n; ++v)
        if (!removed[v])
            out.original.push_back(v);
    out.graph = g.induced(out.original);
    return out;
}

Subgraph prune_dominated(const Graph& g, std::span<const Vertex> filtration_order)
{
    const std::size_t n = g.num_vertices();
    constexpr auto none = std::numeric_limits<std::size_t>::max();
    std::vector<std::size_t> position(n, none);
    for (std::size_t i = 0; i < filtration_order.size(); ++i) {
        const Vertex v = filtration_order[i];
        if (v >= n || position[v] != none)
            throw ValidationError("prune_dominated: filtration order must list every vertex exactly once");
        position[v] = i;
    }
    if (filtration_order.size() != n)
        throw ValidationError("prune_dominated: filtration order must list every vertex exactly once");

    std::vector<bool> alive(n, true);
    // closed neighbourhood of v (alive vertices only) contained in that of u
    auto dominated_by = [&](Vertex v, Vertex u) {
        for (Vertex w : g.neighbors(v)) {
            if (!alive[w] || w == u)
                continue;
            if (!g.has_edge(u, w))
                return false;
        }
        return true;
    };

    bool changed = true;
    while (changed) {
        changed = false;
        // latest-entering vertices first
        for (auto it = filtration_order.rbegin(); it != filtration_order.rend(); ++it) {
            const Vertex v = *it;
            if (!alive[v])
                continue;
            for (Vertex u : g.neighbors(v)) {
                if (alive[u] && position[u] < position[v] && dominated_by(v, u)) {
                    alive[v] = false;
                    changed = true;
                    break;
                }
            }
        }
    }
    Subgraph out;
    for (Vertex v = 0; v < n; ++v)
        if (alive[v])
            out.original.push_back(v);
    out.graph = g.induced(out.original);
    return out;
}

std::vector<Vertex> order_by_value(std::span<const double> values)
{
    std::vector<Vertex> order(values.size());
    std::iota(order.begin(), order.end(), Vertex{0});
    std::stable_sort(order.begin(), order.end(), [&](Vertex a, Vertex b) { return values[a] < values[b]; });
    return order;
}

}  // namespace tdakit
