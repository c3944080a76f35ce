#include "tdakit/cubical.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <string>

#include "cubical_cells.hpp"
#include "tdakit/error.hpp"

namespace tdakit {

GrayImage::GrayImage(std::size_t rows, std::size_t cols, std::vector<double> values)
    : rows_(rows), cols_(cols), values_(std::move(values))
{
    if (rows_ == 0 || cols_ == 0)
        throw ValidationError("image must have positive dimensions");
    if (values_.size() != rows_ * cols_)
        throw ValidationError("image has " + std::to_string(values_.size()) + " values, expected " +
                              std::to_string(rows_ * cols_));
    for (double v : values_)
        if (!std::isfinite(v))
            throw ValidationError("image contains a non-finite value");
}

namespace {
std::vector<double> flatten_image(const std::vector<std::vector<double>>& rows)
{
    std::vector<double> flat;
    for (const auto& r : rows) {
        if (r.size() != rows.front().size())
            throw ValidationError("image rows have different lengths");
        flat.insert(flat.end(), r.begin(), r.end());
    }
    return flat;
}
}  // namespace

GrayImage::GrayImage(const std::vector<std::vector<double>>& rows)
    : GrayImage(rows.size(), rows.empty() ? 0 : rows.front().size(), flatten_image(rows))
{
}

// ---------------------------------------------------------------------------

namespace {

void require_strictly_increasing(std::span<const double> t, const char* what)
{
    if (t.empty())
        throw ValidationError(std::string(what) + ": threshold list is empty");
    for (std::size_t i = 1; i < t.size(); ++i)
        if (!(t[i] > t[i - 1]))
            throw ValidationError(std::string(what) + ": thresholds must be strictly increasing");
}

CubicalFiltration build_from_pixel_values(std::size_t rows, std::size_t cols, std::vector<double> pixel)
{
    constexpr double absent = std::numeric_limits<double>::infinity();
    std::vector<FilteredCell> cells;
    detail::for_each_grid_cell(rows, cols, [&](Simplex s, const std::size_t* incident, std::size_t count) {
        double v = absent;
        for (std::size_t i = 0; i < count; ++i)
            v = std::min(v, pixel[incident[i]]);
        if (v != absent)
            cells.push_back({std::move(s), v});
    });
    CubicalFiltration out;
    out.complex = FilteredComplex::from_cells(std::move(cells));
    out.rows = rows;
    out.cols = cols;
    out.pixel_values = std::move(pixel);
    return out;
}

}  // namespace

CubicalFiltration sublevel_filtration(const GrayImage& img, std::span<const double> thresholds)
{
    require_strictly_increasing(thresholds, "sublevel_filtration");
    std::vector<double> snapped(img.size());
    for (std::size_t i = 0; i < img.size(); ++i) {
        auto it = std::lower_bound(thresholds.begin(), thresholds.end(), img.values()[i]);
        snapped[i] = it == thresholds.end() ? std::numeric_limits<double>::infinity() : *it;
    }
    return build_from_pixel_values(img.rows(), img.cols(), std::move(snapped));
}

CubicalFiltration sublevel_filtration(const GrayImage& img)
{
    std::vector<double> levels(img.values().begin(), img.values().end());
    std::sort(levels.begin(), levels.end());
    levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
    return sublevel_filtration(img, levels);
}

CubicalFiltration superlevel_filtration(const GrayImage& img, std::span<const double> thresholds)
{
    if (thresholds.empty())
        throw ValidationError("superlevel_filtration: threshold list is empty");
    for (std::size_t i = 1; i < thresholds.size(); ++i)
        if (!(thresholds[i] < thresholds[i - 1]))
            throw ValidationError("superlevel_filtration: thresholds must be strictly decreasing");
    std::vector<double> negated_values(img.size());
    for (std::size_t i = 0; i < img.size(); ++i)
        negated_values[i] = -img.values()[i];
    std::vector<double> negated_thresholds(thresholds.size());
    std::transform(thresholds.begin(), thresholds.end(), negated_thresholds.begin(),
                   [](double t) { return -t; });
    auto out = sublevel_filtration(GrayImage(img.rows(), img.cols(), std::move(negated_values)),
                                   negated_thresholds);
    out.values_negated = true;
    return out;
}

std::vector<double> default_image_thresholds(std::size_t count)
{
    if (count < 2)
        throw ValidationError("default_image_thresholds: need at least 2 thresholds");
    std::vector<double> t(count);
    for (std::size_t i = 0; i < count; ++i)
        t[i] = 255.0 * static_cast<double>(i) / static_cast<double>(count - 1);
    return t;
}

std::vector<PersistenceDiagram> to_image_scale(const CubicalFiltration& filtration,
                                               std::vector<PersistenceDiagram> diagrams)
{
    if (!filtration.values_negated)
        return diagrams;
    for (auto& pd : diagrams)
        for (auto& p : pd.pairs) {
            p.birth = -p.birth;
            p.death = -p.death;
        }
    return diagrams;
}

std::vector<bool> active_pixels(const CubicalFiltration& filtration, double t)
{
    std::vector<bool> out(filtration.pixel_values.size());
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = filtration.pixel_values[i] <= t;
    return out;
}

// ---------------------------------------------------------------------------

GrayImage erosion_values(const GrayImage& binary, GridMetric metric)
{
    const std::size_t rows = binary.rows(), cols = binary.cols();
    constexpr double unset = -1.0;
    std::vector<double> dist(binary.size(), unset);
    std::deque<std::size_t> queue;
    for (std::size_t i = 0; i < binary.size(); ++i) {
        const double v = binary.values()[i];
        if (v != 0.0 && v != 1.0)
            throw ValidationError("erosion_values: image must be binary (0 = black, 1 = white)");
        if (v == 0.0) {
            dist[i] = 0.0;
            queue.push_back(i);
        }
    }
    if (queue.empty())
        throw ValidationError("erosion_values: image has no black pixel, distance undefined");

    // Unit-step breadth-first search: 4-neighbours realise the taxicab metric,
    // 8-neighbours the chessboard metric.
    const int steps8[8][2] = {{-1, 0}, {1, 0}, {0, -1}, {0, 1}, {-1, -1}, {-1, 1}, {1, -1}, {1, 1}};
    const int nsteps = metric == GridMetric::Taxicab ? 4 : 8;
    while (!queue.empty()) {
        const std::size_t i = queue.front();
        queue.pop_front();
        const long r = static_cast<long>(i / cols), c = static_cast<long>(i % cols);
        for (int s = 0; s < nsteps; ++s) {
            const long nr = r + steps8[s][0], nc = c + steps8[s][1];
            if (nr < 0 || nc < 0 || nr >= static_cast<long>(rows) || nc >= static_cast<long>(cols))
                continue;
            const std::size_t j = static_cast<std::size_t>(nr) * cols + static_cast<std::size_t>(nc);
            if (dist[j] == unset) {
                dist[j] = dist[i] + 1.0;
                queue.push_back(j);
            }
        }
    }
    return GrayImage(rows, cols, std::move(dist));
}

GrayImage dilation_values(const GrayImage& binary, GridMetric metric)
{
    std::vector<double> flipped(binary.size());
    for (std::size_t i = 0; i < binary.size(); ++i) {
        const double v = binary.values()[i];
        if (v != 0.0 && v != 1.0)
            throw ValidationError("dilation_values: image must be binary (0 = black, 1 = white)");
        flipped[i] = 1.0 - v;
    }
    return erosion_values(GrayImage(binary.rows(), binary.cols(), std::move(flipped)), metric);
}

GrayImage signed_distance_values(const GrayImage& binary, GridMetric metric)
{
    const GrayImage outside = erosion_values(binary, metric);
    const GrayImage inside = dilation_values(binary, metric);
    std::vector<double> out(binary.size());
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = outside.values()[i] - inside.values()[i];
    return GrayImage(binary.rows(), binary.cols(), std::move(out));
}

}  // namespace tdakit
