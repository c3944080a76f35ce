#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tdakit/complex.hpp"
#include "tdakit/cubical.hpp"
#include "tdakit/graph.hpp"
#include "tdakit/pointcloud.hpp"
#include "tdakit/vectorize.hpp"

namespace tdakit {

struct GridIndex {
    std::size_t row = 0;
    std::size_t col = 0;

    friend bool operator==(const GridIndex&, const GridIndex&) = default;
    /// Product order: this index lies below-left of (or at) `other`.
    bool precedes(const GridIndex& other) const { return row <= other.row && col <= other.col; }
};

/// A cell with the minimal grid indices at which it is present. Several
/// grades occur when a cell can enter through different routes (shared image
/// corners); the cell is present at (i, j) iff some grade precedes (i, j).
struct BifiltrationCell {
    Simplex simplex;
    std::vector<GridIndex> grades;
};

/// Two-parameter filtration on an m x n grid of threshold pairs. Rows and
/// columns are labelled by the threshold values that produced them.
class Bifiltration {
public:
    Bifiltration() = default;
    /// Reduces grade lists to antichains and validates ranges and face
    /// closure at every grade (StructureError).
    Bifiltration(std::vector<double> row_values, std::vector<double> col_values, std::vector<BifiltrationCell> cells,
                 std::optional<int> dim_cap = std::nullopt);

    std::size_t rows() const { return row_values_.size(); }
    std::size_t cols() const { return col_values_.size(); }
    std::span<const double> row_values() const { return row_values_; }
    std::span<const double> col_values() const { return col_values_; }
    std::span<const BifiltrationCell> cells() const { return cells_; }
    std::optional<int> dim_cap() const { return dim_cap_; }

    bool present(std::size_t cell, std::size_t i, std::size_t j) const;
    /// Complex at grid position (i, j).
    SimplicialComplex complex_at(std::size_t i, std::size_t j) const;

    /// Single-parameter filtration along row i; cell values are column
    /// threshold values (negated when the column values decrease).
    FilteredComplex row_filtration(std::size_t i) const;
    /// Swaps the two axes.
    Bifiltration transposed() const;

    /// Values used as the filtration scale along columns: the column values
    /// themselves, or their negation when they decrease.
    std::vector<double> column_scale() const;

private:
    std::vector<double> row_values_;
    std::vector<double> col_values_;
    std::vector<BifiltrationCell> cells_;
    std::optional<int> dim_cap_;
};

/// Vertices with f(v) <= alphas[i] and h(v) <= betas[j]; cell (i, j) is the
/// clique complex (up to clique_dim) of the induced subgraph.
Bifiltration graph_bifiltration(const Graph& g, std::span<const double> f, std::span<const double> h,
                                std::span<const double> alphas, std::span<const double> betas, int clique_dim = 2);

/// Node function rows x edge weight columns: vertex v enters at row of f(v),
/// an edge enters once both endpoints are present and its weight is <= betas[j].
Bifiltration graph_edge_bifiltration(const Graph& g, std::span<const double> f, std::span<const double> alphas,
                                     std::span<const double> betas, int clique_dim = 2);

/// Pixel active at (m, n) iff channel0 <= alphas[m] and channel1 <= betas[n].
/// With three channels, `third` selects a fixed gamma threshold: pixels with
/// channel2 > gamma are inactive throughout.
Bifiltration image_multichannel_bifiltration(std::span<const GrayImage> channels,
                                             std::span<const std::vector<double>> thresholds,
                                             std::optional<std::size_t> third = std::nullopt);

/// Density of p: number of points (p included) within `radius`.
std::vector<std::size_t> point_density(const PointCloud& pc, double radius);

/// Row i: Rips filtration (up to triangles) of the points with density >=
/// density_thresholds[i] (strictly decreasing), at the given scales.
Bifiltration density_rips_bifiltration(const PointCloud& pc, double density_radius,
                                       std::span<const double> density_thresholds, std::span<const double> scales,
                                       int max_cell_dim = 2);

struct BigradedBettiTensor {
    int dim = 0;
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<long> values;

    long operator()(std::size_t i, std::size_t j) const { return values[i * cols + j]; }
};

/// beta_dim of the complex at every grid cell.
BigradedBettiTensor bigraded_betti(const Bifiltration& bf, int dim);

enum class SliceVectorizer { Betti, Silhouette, Landscape };

struct SliceOptions {
    SliceVectorizer vectorizer = SliceVectorizer::Betti;
    double silhouette_power = 1.0;
    int landscape_level = 1;
    bool vertical = false;  // fix columns instead of rows
};

/// Rows (or columns) stacked: each slice's diagram vectorized on the shared
/// scale of the other axis.
struct SliceMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> values;
    std::vector<double> grid;

    double operator()(std::size_t i, std::size_t j) const { return values[i * cols + j]; }
};

SliceMatrix slice_vectorize(const Bifiltration& bf, int dim, const SliceOptions& options,
                            Warnings* warnings = nullptr);

TopologicalVector to_vector(const SliceMatrix& m, std::string method, std::string parameters, int dim);

}  // namespace tdakit
