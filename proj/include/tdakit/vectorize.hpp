#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tdakit/error.hpp"
#include "tdakit/persistence.hpp"

namespace tdakit {

/// A function sampled on an increasing grid.
class SampledFunction {
public:
    SampledFunction() = default;
    SampledFunction(std::vector<double> grid, std::vector<double> values);

    /// `count` equally spaced points over [t_min, t_max], count >= 2.
    static std::vector<double> uniform_grid(double t_min, double t_max, std::size_t count);

    std::span<const double> grid() const { return grid_; }
    std::span<const double> values() const { return values_; }
    std::size_t size() const { return values_.size(); }
    double operator[](std::size_t i) const { return values_[i]; }

    /// Piecewise-linear interpolation; constant outside the grid.
    double evaluate(double t) const;
    /// Resamples on a new grid by linear interpolation.
    SampledFunction resample(std::span<const double> grid) const;

private:
    std::vector<double> grid_;
    std::vector<double> values_;
};

/// `count` samples over [min birth, max finite death] of all diagrams.
/// Falls back to [0, 1] when the diagrams carry no finite extent.
std::vector<double> default_grid(std::span<const PersistenceDiagram> diagrams, std::size_t count = 100);

SampledFunction betti_curve(const PersistenceDiagram& pd, std::span<const double> grid);

/// m-th largest tent value at each grid point. Infinite bars are cut at the
/// last grid point (reported through `warnings`).
SampledFunction landscape(const PersistenceDiagram& pd, int level, std::span<const double> grid,
                          Warnings* warnings = nullptr);

/// Lifespan^p weighted mean of tents. Empty diagrams give the zero function
/// with a warning.
SampledFunction silhouette(const PersistenceDiagram& pd, double p, std::span<const double> grid,
                           Warnings* warnings = nullptr);

enum class CurveGenerator { Constant, Lifespan, Entropy };
enum class CurveStatistic { Sum, Mean, Max };

CurveGenerator parse_curve_generator(const std::string& name);
CurveStatistic parse_curve_statistic(const std::string& name);

/// T applied to psi(b, d) over the pairs alive at each grid point. The
/// entropy generator is -(l/L) log(l/L) with l the lifespan and L the total
/// lifespan of the diagram; infinite bars are cut at the last grid point.
SampledFunction persistence_curve(const PersistenceDiagram& pd, CurveGenerator psi, CurveStatistic stat,
                                  std::span<const double> grid);

struct ImageBounds {
    double birth_min = 0.0;
    double birth_max = 1.0;
    double pers_min = 0.0;
    double pers_max = 1.0;
};

/// Grid of k (birth) x l (persistence) cells, stored row-major with one row
/// per persistence bin: value(r, c) covers persistence bin r, birth bin c.
struct PersistenceImageGrid {
    std::size_t birth_bins = 0;
    std::size_t pers_bins = 0;
    ImageBounds bounds;
    std::vector<double> cells;

    double operator()(std::size_t r, std::size_t c) const { return cells[r * birth_bins + c]; }
    double total() const;
};

struct PersistenceImageParams {
    std::size_t birth_bins = 20;
    std::size_t pers_bins = 20;
    double sigma = 0.1;
    double weight_power = 1.0;
    std::optional<ImageBounds> bounds;  // derived from the diagram when absent
    std::optional<double> t_max;        // cut for infinite bars
};

/// Bounds enclosing every (birth, persistence) point with a 3 sigma margin;
/// persistence starts at 0.
ImageBounds default_image_bounds(std::span<const PersistenceDiagram> diagrams, double sigma,
                                 std::optional<double> t_max = std::nullopt);

PersistenceImageGrid persistence_image(const PersistenceDiagram& pd, const PersistenceImageParams& params,
                                       Warnings* warnings = nullptr);

struct VectorSegment {
    std::string method;
    std::string parameters;
    int dim = 0;
    std::size_t length = 0;

    friend bool operator==(const VectorSegment&, const VectorSegment&) = default;
};

/// Flat feature vector with a record of how each slice was produced.
struct TopologicalVector {
    std::vector<double> values;
    std::vector<VectorSegment> segments;

    std::size_t size() const { return values.size(); }
};

TopologicalVector to_vector(const SampledFunction& f, std::string method, std::string parameters, int dim);
TopologicalVector to_vector(const PersistenceImageGrid& img, std::string parameters, int dim);

/// Concatenates in order; throws ValidationError on an empty list.
TopologicalVector concat_dimensions(std::span<const TopologicalVector> per_dim);

}  // namespace tdakit
