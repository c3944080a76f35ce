#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "tdakit/complex.hpp"
#include "tdakit/persistence.hpp"

namespace tdakit {

/// Row-major grayscale image.
class GrayImage {
public:
    GrayImage() = default;
    GrayImage(std::size_t rows, std::size_t cols, std::vector<double> values);
    explicit GrayImage(const std::vector<std::vector<double>>& rows);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t size() const { return values_.size(); }
    double operator()(std::size_t r, std::size_t c) const { return values_[r * cols_ + c]; }
    double& operator()(std::size_t r, std::size_t c) { return values_[r * cols_ + c]; }
    std::span<const double> values() const { return values_; }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> values_;
};

/// Cubical filtration of an image. Each pixel is a closed unit box with the
/// pixel's (snapped) value; its corner vertices and sides take the minimum
/// over incident pixels. The box is stored as two triangles split along a
/// diagonal, all carrying the pixel value, so every prefix has the homotopy
/// type of the union of active closed boxes.
///
/// For superlevel filtrations `values_negated` is set: cell values are the
/// negated gray levels and diagrams must be flipped with to_image_scale().
struct CubicalFiltration {
    FilteredComplex complex;
    std::size_t rows = 0;
    std::size_t cols = 0;
    bool values_negated = false;
    /// Snapped per-pixel entry values on the filtration scale; +inf marks
    /// pixels that never enter.
    std::vector<double> pixel_values;

    /// Vertex id of grid corner (r, c), 0 <= r <= rows, 0 <= c <= cols.
    Vertex corner(std::size_t r, std::size_t c) const { return static_cast<Vertex>(r * (cols + 1) + c); }
};

/// Pixel values are snapped up to the smallest threshold >= value; pixels
/// above the last threshold are left out.
CubicalFiltration sublevel_filtration(const GrayImage& img, std::span<const double> thresholds);
/// Raw mode: thresholds are the distinct pixel values.
CubicalFiltration sublevel_filtration(const GrayImage& img);

/// Pixels with value >= s_m are active at step m; thresholds must be
/// strictly decreasing.
CubicalFiltration superlevel_filtration(const GrayImage& img, std::span<const double> thresholds);

/// `count` evenly spaced thresholds over [0, 255].
std::vector<double> default_image_thresholds(std::size_t count = 64);

/// Flips birth/death signs of superlevel diagrams back to gray levels.
/// Sublevel diagrams are returned unchanged.
std::vector<PersistenceDiagram> to_image_scale(const CubicalFiltration& filtration,
                                               std::vector<PersistenceDiagram> diagrams);

/// Pixels active at threshold t (value <= t on the filtration's scale).
std::vector<bool> active_pixels(const CubicalFiltration& filtration, double t);

enum class GridMetric { Chessboard, Taxicab };

/// Distance transform of a binary image: 0 on black (0) pixels, grid
/// distance to the nearest black pixel on white (1) pixels.
GrayImage erosion_values(const GrayImage& binary, GridMetric metric);

/// The complement's erosion values, i.e. distance to the nearest white pixel.
GrayImage dilation_values(const GrayImage& binary, GridMetric metric);

/// Erosion distance on white pixels, minus the dilation distance on black ones.
GrayImage signed_distance_values(const GrayImage& binary, GridMetric metric);

}  // namespace tdakit
