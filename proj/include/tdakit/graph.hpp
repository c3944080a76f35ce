#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "tdakit/complex.hpp"

namespace tdakit {

struct Edge {
    Vertex u = 0;  // u < v
    Vertex v = 0;

    friend bool operator==(const Edge&, const Edge&) = default;
    friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Simple undirected graph on vertices 0..n-1 with optional edge weights and
/// node values. Edges are kept sorted; weights align with edges().
class Graph {
public:
    Graph() = default;
    /// Throws ValidationError on self-loops, duplicate edges or endpoints out
    /// of range.
    Graph(std::size_t n, std::vector<std::pair<Vertex, Vertex>> edges);
    Graph(std::size_t n, std::vector<std::pair<Vertex, Vertex>> edges, std::vector<double> weights);

    std::size_t num_vertices() const { return adjacency_.size(); }
    std::size_t num_edges() const { return edges_.size(); }
    std::span<const Edge> edges() const { return edges_; }
    std::span<const Vertex> neighbors(Vertex v) const { return adjacency_[v]; }
    std::size_t degree(Vertex v) const { return adjacency_[v].size(); }
    bool has_edge(Vertex a, Vertex b) const;
    std::optional<std::size_t> edge_index(Vertex a, Vertex b) const;

    bool has_edge_weights() const { return weights_.has_value(); }
    std::span<const double> edge_weights() const;
    void set_edge_weights(std::vector<double> weights);

    bool has_node_values() const { return node_values_.has_value(); }
    std::span<const double> node_values() const;
    void set_node_values(std::vector<double> values);

    /// Subgraph induced on `keep` (any order, no repeats). Vertex i of the
    /// result is keep-sorted[i]; weights and node values are carried over.
    Graph induced(std::span<const Vertex> keep) const;

    /// Number of connected components.
    std::size_t component_count() const;
    /// Component label per vertex, labels numbered by smallest member.
    std::vector<std::size_t> component_labels() const;

private:
    std::vector<Edge> edges_;
    std::vector<std::vector<Vertex>> adjacency_;
    std::optional<std::vector<double>> weights_;
    std::optional<std::vector<double>> node_values_;
};

/// A reduced graph together with the original id of each of its vertices.
struct Subgraph {
    Graph graph;
    std::vector<Vertex> original;
};

/// Breadth-first hop counts from `source`; -1 marks unreachable vertices.
std::vector<long> hop_distances(const Graph& g, Vertex source);

enum class NodeFunction { Degree, Eccentricity, Closeness, External };

/// Degree, eccentricity (max hop distance) or closeness ((n-1) / sum of hop
/// distances); External returns the graph's stored node values.
std::vector<double> node_filtration_values(const Graph& g, NodeFunction fn);

/// Node sublevel filtration of the clique complex (cells up to clique_dim).
/// A vertex enters at the smallest threshold >= its node value; cliques enter
/// when all members are active. Requires node values on the graph.
FilteredComplex sublevel_node_filtration(const Graph& g, std::span<const double> thresholds,
                                         int clique_dim = 2);

/// Node superlevel filtration: vertices with value >= s_m are active at step
/// m (thresholds strictly decreasing). Cell values are reported negated
/// (-s_m) so the filtration order stays increasing.
FilteredComplex superlevel_node_filtration(const Graph& g, std::span<const double> thresholds,
                                           int clique_dim = 2);

/// Edge sublevel filtration from edge weights. Vertices enter with their
/// earliest incident edge; isolated vertices enter at the last threshold.
FilteredComplex sublevel_edge_filtration(const Graph& g, std::span<const double> thresholds,
                                         int clique_dim = 2);

/// Rips filtration of the hop metric: simplices enter at the largest pairwise
/// hop distance of their vertices, pairs further apart than max_hops never
/// connect.
FilteredComplex power_filtration(const Graph& g, int max_hops, int max_cell_dim);

/// Rips filtration of shortest weighted paths where each edge has length
/// `length(weight)` (default 1/weight, so heavy edges are short).
FilteredComplex weighted_power_filtration(const Graph& g, double max_distance, int max_cell_dim,
                                          const std::function<double(double)>& length = {});

/// Maps amounts A to [1 + alpha (A - Amin) / (Amax - Amin)]^-1, i.e. into
/// [1 / (1 + alpha), 1], decreasing in the amount.
std::vector<double> normalize_edge_weights(std::span<const double> amounts, double alpha);

/// (k+1)-core: repeatedly removes vertices of degree <= k. Preserves
/// diagrams of dimension k and higher for vertex-induced clique filtrations.
Subgraph coral_reduce(const Graph& g, int k);

/// Removes vertices v whose closed neighbourhood is contained in that of a
/// neighbour u appearing earlier in `filtration_order`, until none remain.
Subgraph prune_dominated(const Graph& g, std::span<const Vertex> filtration_order);

/// Entry order for a vertex-valued sublevel filtration: by value, then id.
std::vector<Vertex> order_by_value(std::span<const double> values);

}  // namespace tdakit
