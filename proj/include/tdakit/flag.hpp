#pragma once

#include <optional>
#include <span>
#include <vector>

#include "tdakit/complex.hpp"

namespace tdakit {

struct WeightedEdge {
    Vertex u = 0;
    Vertex v = 0;
    double value = 0.0;
};

/// Clique (flag) filtration: every vertex set whose pairs are all edges
/// becomes a simplex of dimension <= max_dim, entering at the largest value
/// among its vertices and edges.
FilteredComplex flag_filtration(std::span<const double> vertex_values,
                                std::span<const WeightedEdge> edges, int max_dim,
                                std::optional<int> dim_cap = std::nullopt);

}  // namespace tdakit
