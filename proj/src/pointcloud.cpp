#include "tdakit/pointcloud.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tdakit/flag.hpp"

namespace tdakit {

PointCloud::PointCloud(const std::vector<std::vector<double>>& points)
{
    if (points.empty())
        throw ValidationError("point cloud is empty");
    dim_ = points.front().size();
    if (dim_ == 0)
        throw ValidationError("points must have at least one coordinate");
    n_ = points.size();
    coords_.reserve(n_ * dim_);
    for (std::size_t i = 0; i < n_; ++i) {
        if (points[i].size() != dim_)
            throw ValidationError("point " + std::to_string(i) + " has " +
                                  std::to_string(points[i].size()) + " coordinates, expected " +
                                  std::to_string(dim_));
        for (double x : points[i]) {
            if (!std::isfinite(x))
                throw ValidationError("point " + std::to_string(i) + " has a non-finite coordinate");
            coords_.push_back(x);
        }
    }
}

PointCloud::PointCloud(std::size_t dimension, std::vector<double> flat_coordinates)
    : dim_(dimension), coords_(std::move(flat_coordinates))
{
    if (dim_ == 0 || coords_.empty())
        throw ValidationError("point cloud is empty");
    if (coords_.size() % dim_ != 0)
        throw ValidationError("coordinate count is not a multiple of the dimension");
    for (double x : coords_)
        if (!std::isfinite(x))
            throw ValidationError("point cloud has a non-finite coordinate");
    n_ = coords_.size() / dim_;
}

PointCloud PointCloud::subset(std::span<const std::size_t> indices) const
{
    std::vector<double> flat;
    flat.reserve(indices.size() * dim_);
    for (std::size_t i : indices) {
        auto p = point(i);
        flat.insert(flat.end(), p.begin(), p.end());
    }
    return PointCloud(dim_, std::move(flat));
}

// ---------------------------------------------------------------------------

DistanceMatrix::DistanceMatrix(std::size_t n, std::vector<double> entries) : n_(n), d_(std::move(entries))
{
    if (d_.size() != n_ * n_)
        throw ValidationError("distance matrix must be square");
    for (std::size_t i = 0; i < n_; ++i) {
        if (d_[i * n_ + i] != 0.0)
            throw ValidationError("distance matrix diagonal must be zero (row " + std::to_string(i) + ")");
        for (std::size_t j = 0; j < n_; ++j) {
            const double x = d_[i * n_ + j];
            if (!std::isfinite(x) || x < 0.0)
                throw ValidationError("distance matrix entries must be finite and non-negative");
            if (x != d_[j * n_ + i])
                throw ValidationError("distance matrix is not symmetric at (" + std::to_string(i) +
                                      "," + std::to_string(j) + ")");
        }
    }
}

namespace {
std::vector<double> flatten_rows(const std::vector<std::vector<double>>& rows)
{
    std::vector<double> flat;
    for (const auto& r : rows) {
        if (r.size() != rows.size())
            throw ValidationError("distance matrix must be square");
        flat.insert(flat.end(), r.begin(), r.end());
    }
    return flat;
}
}  // namespace

DistanceMatrix::DistanceMatrix(const std::vector<std::vector<double>>& rows)
    : DistanceMatrix(rows.size(), flatten_rows(rows))
{
}

double DistanceMatrix::diameter() const
{
    return d_.empty() ? 0.0 : *std::max_element(d_.begin(), d_.end());
}

std::vector<double> DistanceMatrix::upper_triangle() const
{
    std::vector<double> out;
    out.reserve(n_ * (n_ - 1) / 2);
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = i + 1; j < n_; ++j)
            out.push_back(d_[i * n_ + j]);
    return out;
}

DistanceMatrix DistanceMatrix::subset(std::span<const std::size_t> indices) const
{
    const std::size_t m = indices.size();
    std::vector<double> out(m * m);
    for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = 0; b < m; ++b)
            out[a * m + b] = (*this)(indices[a], indices[b]);
    return DistanceMatrix(m, std::move(out));
}

// ---------------------------------------------------------------------------

double distance(std::span<const double> a, std::span<const double> b, Metric metric)
{
    double acc = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        const double diff = std::abs(a[k] - b[k]);
        switch (metric) {
        case Metric::Euclidean: acc += diff * diff; break;
        case Metric::Manhattan: acc += diff; break;
        case Metric::Chebyshev: acc = std::max(acc, diff); break;
        }
    }
    return metric == Metric::Euclidean ? std::sqrt(acc) : acc;
}

DistanceMatrix pairwise_distances(const PointCloud& pc, Metric metric)
{
    const std::size_t n = pc.size();
    std::vector<double> d(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            d[i * n + j] = d[j * n + i] = distance(pc.point(i), pc.point(j), metric);
    return DistanceMatrix(n, std::move(d));
}

FilteredComplex rips_filtration(const DistanceMatrix& dm, double max_scale, int max_cell_dim,
                                Warnings* warnings)
{
    if (max_cell_dim < 1)
        throw ValidationError("rips: max_cell_dim must be at least 1");
    if (!(max_scale > 0.0))
        throw ValidationError("rips: max_scale must be positive");
    const std::size_t n = dm.size();
    std::optional<int> cap = max_cell_dim;
    if (n == 0 || static_cast<std::size_t>(max_cell_dim) > n - 1) {
        warn(warnings, "rips: max_cell_dim " + std::to_string(max_cell_dim) + " clamped to " +
                           std::to_string(n == 0 ? 0 : n - 1) + " (number of points - 1)");
        max_cell_dim = n == 0 ? 0 : static_cast<int>(n - 1);
        cap.reset();
    }
    std::vector<double> vertex_values(n, 0.0);
    std::vector<WeightedEdge> edges;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (dm(i, j) <= max_scale)
                edges.push_back({static_cast<Vertex>(i), static_cast<Vertex>(j), dm(i, j)});
    return flag_filtration(vertex_values, edges, std::max(max_cell_dim, 0), cap);
}

double enclosing_ball_diameter(std::span<const std::span<const double>> points)
{
    if (points.empty() || points.size() > 3)
        throw ValidationError("enclosing ball supports 1 to 3 points");
    if (points.size() == 1)
        return 0.0;
    auto sq = [](std::span<const double> a, std::span<const double> b) {
        double s = 0.0;
        for (std::size_t k = 0; k < a.size(); ++k)
            s += (a[k] - b[k]) * (a[k] - b[k]);
        return s;
    };
    if (points.size() == 2)
        return std::sqrt(sq(points[0], points[1]));

    const double a2 = sq(points[1], points[2]);
    const double b2 = sq(points[0], points[2]);
    const double c2 = sq(points[0], points[1]);
    const double longest2 = std::max({a2, b2, c2});
    // Right or obtuse (including collinear): the longest side is a diameter.
    if (2.0 * longest2 >= a2 + b2 + c2)
        return std::sqrt(longest2);
    // Acute: circumscribed circle. Area from the Gram determinant of two sides.
    double uu = 0.0, vv = 0.0, uv = 0.0;
    for (std::size_t k = 0; k < points[0].size(); ++k) {
        const double u = points[1][k] - points[0][k];
        const double v = points[2][k] - points[0][k];
        uu += u * u;
        vv += v * v;
        uv += u * v;
    }
    const double area = 0.5 * std::sqrt(std::max(uu * vv - uv * uv, 0.0));
    const double radius = std::sqrt(a2 * b2 * c2) / (4.0 * area);
    return 2.0 * radius;
}

FilteredComplex cech_filtration(const PointCloud& pc, double max_scale, int max_cell_dim)
{
    if (max_cell_dim > 2)
        throw ValidationError("cech: cells above dimension 2 are unsupported (requested " +
                              std::to_string(max_cell_dim) + ")");
    if (max_cell_dim < 1)
        throw ValidationError("cech: max_cell_dim must be at least 1");
    if (!(max_scale > 0.0))
        throw ValidationError("cech: max_scale must be positive");
    const std::size_t n = pc.size();
    std::optional<int> cap = max_cell_dim;
    if (static_cast<std::size_t>(max_cell_dim) > n - 1)
        cap.reset();

    std::vector<FilteredCell> cells;
    for (std::size_t i = 0; i < n; ++i)
        cells.push_back({Simplex{static_cast<Vertex>(i)}, 0.0});
    std::vector<std::vector<bool>> adjacent(n, std::vector<bool>(n, false));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double d = distance(pc.point(i), pc.point(j), Metric::Euclidean);
            if (d <= max_scale) {
                cells.push_back({Simplex{static_cast<Vertex>(i), static_cast<Vertex>(j)}, d});
                adjacent[i][j] = true;
            }
        }
    if (max_cell_dim >= 2) {
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) {
                if (!adjacent[i][j])
                    continue;
                for (std::size_t k = j + 1; k < n; ++k) {
                    if (!adjacent[i][k] || !adjacent[j][k])
                        continue;
                    const std::span<const double> pts[] = {pc.point(i), pc.point(j), pc.point(k)};
                    const double v = enclosing_ball_diameter(pts);
                    if (v <= max_scale)
                        cells.push_back({Simplex{static_cast<Vertex>(i), static_cast<Vertex>(j),
                                                 static_cast<Vertex>(k)},
                                         v});
                }
            }
    }
    return FilteredComplex::from_cells(std::move(cells), cap);
}

// ---------------------------------------------------------------------------

std::vector<double> select_thresholds(std::span<const double> distances, std::size_t count,
                                      ThresholdStrategy strategy)
{
    if (count < 2)
        throw ValidationError("select_thresholds: count must be at least 2");
    std::vector<double> positive;
    for (double d : distances)
        if (d > 0.0)
            positive.push_back(d);
    if (positive.empty())
        throw ValidationError("select_thresholds: zero diameter (all points coincide)");
    std::sort(positive.begin(), positive.end());
    const double diameter = positive.back();

    std::vector<double> out(count);
    for (std::size_t i = 0; i < count; ++i) {
        const double q = static_cast<double>(i) / static_cast<double>(count - 1);
        if (strategy == ThresholdStrategy::Uniform) {
            out[i] = q * diameter;
        } else {
            const double pos = q * static_cast<double>(positive.size() - 1);
            const auto lo = static_cast<std::size_t>(std::floor(pos));
            const auto hi = std::min(lo + 1, positive.size() - 1);
            const double frac = pos - static_cast<double>(lo);
            out[i] = positive[lo] + frac * (positive[hi] - positive[lo]);
        }
    }
    out.back() = diameter;
    return out;
}

std::vector<double> select_thresholds(const DistanceMatrix& dm, std::size_t count,
                                      ThresholdStrategy strategy)
{
    const auto upper = dm.upper_triangle();
    return select_thresholds(upper, count, strategy);
}

}  // namespace tdakit
