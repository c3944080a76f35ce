#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "tdakit/persistence.hpp"

namespace tdakit {

/// One edge of a diagram matching. An empty side means the point is matched
/// to its orthogonal projection on the diagonal.
struct MatchedPair {
    std::optional<std::size_t> a;
    std::optional<std::size_t> b;
};

struct Matching {
    std::vector<MatchedPair> pairs;
    double cost = 0.0;  // W_p value (or bottleneck value for p = inf)
};

/// l-infinity distance between two diagram points.
double point_distance(const PersistencePair& x, const PersistencePair& y);
/// l-infinity distance from a point to the diagonal, (d - b) / 2.
double diagonal_distance(const PersistencePair& x);

/// Optimal matching for the p-Wasserstein distance (p >= 1, or kInfinity for
/// the bottleneck distance). Infinite bars must appear in equal numbers in
/// both diagrams; they are matched to each other in birth order at cost
/// |birth difference|.
Matching optimal_matching(const PersistenceDiagram& a, const PersistenceDiagram& b, double p);

double wasserstein_distance(const PersistenceDiagram& a, const PersistenceDiagram& b, double p);
double bottleneck_distance(const PersistenceDiagram& a, const PersistenceDiagram& b);

/// Persistence weighted Gaussian kernel with weight (d - b)^weight_power and
/// Gaussian width sigma in the (birth, death) plane.
double pwgk(const PersistenceDiagram& a, const PersistenceDiagram& b, double sigma, double weight_power = 1.0);

/// Square assignment problem: returns col[i] minimising sum cost[i][col[i]].
std::vector<std::size_t> solve_assignment(const std::vector<std::vector<double>>& cost);

}  // namespace tdakit
