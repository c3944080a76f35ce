#include "tdakit/vectorize.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

namespace tdakit {

SampledFunction::SampledFunction(std::vector<double> grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values))
{
    if (grid_.size() != values_.size())
        throw ValidationError("sampled function: grid and value lengths differ");
    if (grid_.empty())
        throw ValidationError("sampled function: empty grid");
    for (std::size_t i = 1; i < grid_.size(); ++i)
        if (!(grid_[i] > grid_[i - 1]))
            throw ValidationError("sampled function: grid must be strictly increasing");
}

std::vector<double> SampledFunction::uniform_grid(double t_min, double t_max, std::size_t count)
{
    if (count < 2)
        throw ValidationError("uniform grid needs at least 2 samples");
    if (!(t_max > t_min) || !std::isfinite(t_min) || !std::isfinite(t_max))
        throw ValidationError("uniform grid needs a finite range with t_max > t_min");
    std::vector<double> g(count);
    for (std::size_t i = 0; i < count; ++i)
        g[i] = t_min + (t_max - t_min) * static_cast<double>(i) / static_cast<double>(count - 1);
    g.back() = t_max;
    return g;
}

double SampledFunction::evaluate(double t) const
{
    if (t <= grid_.front())
        return values_.front();
    if (t >= grid_.back())
        return values_.back();
    const auto it = std::upper_bound(grid_.begin(), grid_.end(), t);
    const std::size_t j = static_cast<std::size_t>(it - grid_.begin());
    const double w = (t - grid_[j - 1]) / (grid_[j] - grid_[j - 1]);
    return (1.0 - w) * values_[j - 1] + w * values_[j];
}

SampledFunction SampledFunction::resample(std::span<const double> grid) const
{
    std::vector<double> v;
    v.reserve(grid.size());
    for (double t : grid)
        v.push_back(evaluate(t));
    return {std::vector<double>(grid.begin(), grid.end()), std::move(v)};
}

std::vector<double> default_grid(std::span<const PersistenceDiagram> diagrams, std::size_t count)
{
    double lo = kInfinity, hi = -kInfinity;
    for (const auto& pd : diagrams)
        for (const auto& q : pd.pairs) {
            lo = std::min(lo, q.birth);
            hi = std::max(hi, q.birth);
            if (!q.is_infinite())
                hi = std::max(hi, q.death);
        }
    if (!(hi > lo))
        return SampledFunction::uniform_grid(0.0, 1.0, count);
    return SampledFunction::uniform_grid(lo, hi, count);
}

namespace {

void require_grid(std::span<const double> grid)
{
    if (grid.empty())
        throw ValidationError("sample grid is empty");
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (!(grid[i] > grid[i - 1]))
            throw ValidationError("sample grid must be strictly increasing");
}

double tent(double b, double d, double t)
{
    return std::max(0.0, std::min(t - b, d - t));
}

// Finite (birth, death) pairs with infinite deaths cut at `t_max`; pairs that
// collapse after the cut are dropped.
std::vector<std::pair<double, double>> truncated(const PersistenceDiagram& pd, double t_max, const char* what,
                                                 Warnings* warnings)
{
    std::vector<std::pair<double, double>> out;
    bool cut = false;
    for (const auto& q : pd.pairs) {
        double d = q.death;
        if (q.is_infinite()) {
            d = t_max;
            cut = true;
        }
        if (d > q.birth)
            out.emplace_back(q.birth, d);
    }
    if (cut)
        warn(warnings, std::string(what) + ": infinite bars truncated at " + std::to_string(t_max));
    return out;
}

SampledFunction make(std::span<const double> grid, std::vector<double> values)
{
    return {std::vector<double>(grid.begin(), grid.end()), std::move(values)};
}

}  // namespace

SampledFunction betti_curve(const PersistenceDiagram& pd, std::span<const double> grid)
{
    require_grid(grid);
    std::vector<double> v;
    for (double t : grid)
        v.push_back(static_cast<double>(betti_at(pd, t)));
    return make(grid, std::move(v));
}

SampledFunction landscape(const PersistenceDiagram& pd, int level, std::span<const double> grid,
                          Warnings* warnings)
{
    if (level < 1)
        throw ValidationError("landscape level must be >= 1");
    require_grid(grid);
    const auto pairs = truncated(pd, grid.back(), "landscape", warnings);
    std::vector<double> v, tents;
    for (double t : grid) {
        tents.clear();
        for (auto [b, d] : pairs) {
            const double x = tent(b, d, t);
            if (x > 0.0)
                tents.push_back(x);
        }
        if (tents.size() < static_cast<std::size_t>(level)) {
            v.push_back(0.0);
            continue;
        }
        std::nth_element(tents.begin(), tents.begin() + (level - 1), tents.end(), std::greater<>());
        v.push_back(tents[level - 1]);
    }
    return make(grid, std::move(v));
}

SampledFunction silhouette(const PersistenceDiagram& pd, double p, std::span<const double> grid, Warnings* warnings)
{
    if (!(p > 0.0))
        throw ValidationError("silhouette power p must be positive");
    require_grid(grid);
    const auto pairs = truncated(pd, grid.back(), "silhouette", warnings);
    std::vector<double> v(grid.size(), 0.0);
    if (pairs.empty()) {
        warn(warnings, "silhouette: empty diagram, returning the zero function");
        return make(grid, std::move(v));
    }
    double wsum = 0.0;
    for (auto [b, d] : pairs)
        wsum += std::pow(d - b, p);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        double s = 0.0;
        for (auto [b, d] : pairs)
            s += std::pow(d - b, p) * tent(b, d, grid[i]);
        v[i] = s / wsum;
    }
    return make(grid, std::move(v));
}

CurveGenerator parse_curve_generator(const std::string& name)
{
    if (name == "constant" || name == "one" || name == "constant-1")
        return CurveGenerator::Constant;
    if (name == "lifespan")
        return CurveGenerator::Lifespan;
    if (name == "entropy")
        return CurveGenerator::Entropy;
    throw ValidationError("unknown persistence curve generator '" + name + "' (constant, lifespan, entropy)");
}

CurveStatistic parse_curve_statistic(const std::string& name)
{
    if (name == "sum")
        return CurveStatistic::Sum;
    if (name == "mean")
        return CurveStatistic::Mean;
    if (name == "max")
        return CurveStatistic::Max;
    throw ValidationError("unknown persistence curve statistic '" + name + "' (sum, mean, max)");
}

SampledFunction persistence_curve(const PersistenceDiagram& pd, CurveGenerator psi, CurveStatistic stat,
                                  std::span<const double> grid)
{
    require_grid(grid);
    // only infinite bars are cut at the end of the grid
    auto life = [&](const PersistencePair& q) {
        return std::max(0.0, (q.is_infinite() ? grid.back() : q.death) - q.birth);
    };
    double total = 0.0;
    for (const auto& q : pd.pairs)
        total += life(q);

    auto generator = [&](const PersistencePair& q) {
        switch (psi) {
        case CurveGenerator::Constant:
            return 1.0;
        case CurveGenerator::Lifespan:
            return life(q);
        case CurveGenerator::Entropy: {
            const double l = life(q);
            if (l <= 0.0 || total <= 0.0)
                return 0.0;
            const double r = l / total;
            return -r * std::log(r);
        }
        }
        return 0.0;
    };

    std::vector<double> v;
    v.reserve(grid.size());
    for (double t : grid) {
        double acc = 0.0;
        std::size_t count = 0;
        for (const auto& q : pd.pairs) {
            if (!(q.birth <= t && t < q.death))
                continue;
            const double x = generator(q);
            acc = stat == CurveStatistic::Max ? (count == 0 ? x : std::max(acc, x)) : acc + x;
            ++count;
        }
        if (stat == CurveStatistic::Mean && count > 0)
            acc /= static_cast<double>(count);
        v.push_back(acc);
    }
    return make(grid, std::move(v));
}

// ---------------------------------------------------------------------------

double PersistenceImageGrid::total() const
{
    double s = 0.0;
    for (double x : cells)
        s += x;
    return s;
}

ImageBounds default_image_bounds(std::span<const PersistenceDiagram> diagrams, double sigma,
                                 std::optional<double> t_max)
{
    if (!(sigma > 0.0))
        throw ValidationError("persistence image sigma must be positive");
    double bmin = kInfinity, bmax = -kInfinity, pmax = 0.0;
    for (const auto& pd : diagrams)
        for (const auto& q : pd.pairs) {
            double d = q.death;
            if (q.is_infinite()) {
                if (!t_max)
                    continue;
                d = *t_max;
            }
            bmin = std::min(bmin, q.birth);
            bmax = std::max(bmax, q.birth);
            pmax = std::max(pmax, d - q.birth);
        }
    if (bmin > bmax) {
        bmin = 0.0;
        bmax = 0.0;
    }
    const double pad = 3.0 * sigma;
    return {bmin - pad, bmax + pad, 0.0, pmax + pad};
}

PersistenceImageGrid persistence_image(const PersistenceDiagram& pd, const PersistenceImageParams& params,
                                       Warnings* warnings)
{
    if (!(params.sigma > 0.0))
        throw ValidationError("persistence image sigma must be positive");
    if (params.birth_bins == 0 || params.pers_bins == 0)
        throw ValidationError("persistence image resolution must be positive");

    double t_max = 0.0;
    if (params.t_max) {
        t_max = *params.t_max;
    } else {
        for (const auto& q : pd.pairs)
            t_max = std::max(t_max, q.is_infinite() ? q.birth : q.death);
    }
    const auto pairs = truncated(pd, t_max, "persistence image", warnings);

    PersistenceImageGrid out;
    out.birth_bins = params.birth_bins;
    out.pers_bins = params.pers_bins;
    const PersistenceDiagram single[] = {pd};
    out.bounds = params.bounds ? *params.bounds : default_image_bounds(single, params.sigma, t_max);
    const auto& bd = out.bounds;
    if (!(bd.birth_max > bd.birth_min) || !(bd.pers_max > bd.pers_min))
        throw ValidationError("persistence image bounds have zero area");
    out.cells.assign(out.birth_bins * out.pers_bins, 0.0);

    const double scale = 1.0 / (params.sigma * std::sqrt(2.0));
    auto edges = [](double lo, double hi, std::size_t n) {
        std::vector<double> e(n + 1);
        for (std::size_t i = 0; i <= n; ++i)
            e[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n);
        return e;
    };
    const auto bx = edges(bd.birth_min, bd.birth_max, out.birth_bins);
    const auto py = edges(bd.pers_min, bd.pers_max, out.pers_bins);
    // Gaussian CDF mass of each 1-D bin: 0.5 (erf(hi) - erf(lo)) in scaled units
    auto masses = [&](const std::vector<double>& e, double centre) {
        std::vector<double> m(e.size() - 1);
        for (std::size_t i = 0; i + 1 < e.size(); ++i)
            m[i] = 0.5 * (std::erf((e[i + 1] - centre) * scale) - std::erf((e[i] - centre) * scale));
        return m;
    };
    for (auto [b, d] : pairs) {
        const double w = std::pow(d - b, params.weight_power);
        const auto mx = masses(bx, b);
        const auto my = masses(py, d - b);
        for (std::size_t r = 0; r < out.pers_bins; ++r)
            for (std::size_t c = 0; c < out.birth_bins; ++c)
                out.cells[r * out.birth_bins + c] += w * my[r] * mx[c];
    }
    return out;
}

// ---------------------------------------------------------------------------

TopologicalVector to_vector(const SampledFunction& f, std::string method, std::string parameters, int dim)
{
    TopologicalVector v;
    v.values.assign(f.values().begin(), f.values().end());
    v.segments.push_back({std::move(method), std::move(parameters), dim, f.size()});
    return v;
}

TopologicalVector to_vector(const PersistenceImageGrid& img, std::string parameters, int dim)
{
    TopologicalVector v;
    v.values = img.cells;
    v.segments.push_back({"persistence_image", std::move(parameters), dim, img.cells.size()});
    return v;
}

TopologicalVector concat_dimensions(std::span<const TopologicalVector> per_dim)
{
    if (per_dim.empty())
        throw ValidationError("concat_dimensions: nothing to concatenate");
    TopologicalVector out;
    for (const auto& v : per_dim) {
        out.values.insert(out.values.end(), v.values.begin(), v.values.end());
        out.segments.insert(out.segments.end(), v.segments.begin(), v.segments.end());
    }
    return out;
}

}  // namespace tdakit
