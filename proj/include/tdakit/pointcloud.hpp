#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "tdakit/complex.hpp"
#include "tdakit/error.hpp"

namespace tdakit {

/// n points in R^N, stored row-major.
class PointCloud {
public:
    PointCloud() = default;
    /// Throws ValidationError on an empty list, mixed dimensionality or
    /// non-finite coordinates.
    explicit PointCloud(const std::vector<std::vector<double>>& points);
    PointCloud(std::size_t dimension, std::vector<double> flat_coordinates);

    std::size_t size() const { return n_; }
    std::size_t dimension() const { return dim_; }
    std::span<const double> point(std::size_t i) const { return {coords_.data() + i * dim_, dim_}; }
    double coord(std::size_t i, std::size_t axis) const { return coords_[i * dim_ + axis]; }

    /// Points at the given indices, in that order.
    PointCloud subset(std::span<const std::size_t> indices) const;

private:
    std::size_t n_ = 0;
    std::size_t dim_ = 0;
    std::vector<double> coords_;
};

/// Dense symmetric matrix with zero diagonal and finite non-negative entries.
class DistanceMatrix {
public:
    DistanceMatrix() = default;
    /// Validates the metric-matrix invariants.
    DistanceMatrix(std::size_t n, std::vector<double> entries);
    explicit DistanceMatrix(const std::vector<std::vector<double>>& rows);

    std::size_t size() const { return n_; }
    double operator()(std::size_t i, std::size_t j) const { return d_[i * n_ + j]; }
    double diameter() const;
    /// Entries above the diagonal, row by row.
    std::vector<double> upper_triangle() const;
    DistanceMatrix subset(std::span<const std::size_t> indices) const;

private:
    std::size_t n_ = 0;
    std::vector<double> d_;
};

enum class Metric { Euclidean, Manhattan, Chebyshev };

double distance(std::span<const double> a, std::span<const double> b, Metric metric);

DistanceMatrix pairwise_distances(const PointCloud& pc, Metric metric = Metric::Euclidean);

/// Vietoris-Rips filtration: a simplex enters at the largest pairwise
/// distance among its vertices, provided that value is <= max_scale.
/// max_cell_dim above n-1 is clamped (and reported through `warnings`).
FilteredComplex rips_filtration(const DistanceMatrix& dm, double max_scale, int max_cell_dim,
                                Warnings* warnings = nullptr);

/// Twice the radius of the smallest ball enclosing up to three points.
double enclosing_ball_diameter(std::span<const std::span<const double>> points);

/// Cech filtration for cells of dimension <= 2 on the diameter scale: a
/// simplex enters at twice the radius of its minimum enclosing ball.
FilteredComplex cech_filtration(const PointCloud& pc, double max_scale, int max_cell_dim);

enum class ThresholdStrategy { Uniform, Quantile };

/// Filtration scales spanning the data. Uniform: evenly spaced over
/// [0, diameter]. Quantile: linear-interpolated quantiles of the positive
/// off-diagonal distances, from the smallest to the diameter.
std::vector<double> select_thresholds(const DistanceMatrix& dm, std::size_t count,
                                      ThresholdStrategy strategy);
std::vector<double> select_thresholds(std::span<const double> distances, std::size_t count,
                                      ThresholdStrategy strategy);

}  // namespace tdakit
