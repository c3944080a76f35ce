#include "tdakit/multipers.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <unordered_map>

#include "cubical_cells.hpp"
#include "tdakit/error.hpp"
#include "tdakit/flag.hpp"
#include "tdakit/persistence.hpp"

namespace tdakit {

namespace {

enum class Direction { Increasing, Decreasing };

Direction require_monotone(std::span<const double> v, const char* what)
{
    if (v.empty())
        throw ValidationError(std::string(what) + ": threshold list is empty");
    bool inc = true, dec = true;
    for (std::size_t i = 1; i < v.size(); ++i) {
        inc = inc && v[i] > v[i - 1];
        dec = dec && v[i] < v[i - 1];
    }
    if (v.size() == 1 || inc)
        return Direction::Increasing;
    if (dec)
        return Direction::Decreasing;
    throw ValidationError(std::string(what) + ": thresholds must be strictly monotone");
}

void require_increasing(std::span<const double> v, const char* what)
{
    if (require_monotone(v, what) != Direction::Increasing)
        throw ValidationError(std::string(what) + ": thresholds must be strictly increasing");
}

// Index of the smallest threshold >= value, or a ValidationError naming the
// uncovered items.
std::vector<std::size_t> snap_indices(std::span<const double> values, std::span<const double> thresholds,
                                      const std::string& what, const char* item)
{
    std::vector<std::size_t> out(values.size());
    std::string uncovered;
    for (std::size_t i = 0; i < values.size(); ++i) {
        auto it = std::lower_bound(thresholds.begin(), thresholds.end(), values[i]);
        if (it == thresholds.end())
            uncovered += (uncovered.empty() ? "" : ",") + std::to_string(i);
        else
            out[i] = static_cast<std::size_t>(it - thresholds.begin());
    }
    if (!uncovered.empty())
        throw ValidationError(what + ": thresholds do not cover " + item + "s " + uncovered);
    return out;
}

void minimize(std::vector<GridIndex>& grades)
{
    std::vector<GridIndex> kept;
    for (const auto& g : grades) {
        bool dominated = false;
        for (const auto& h : grades)
            if (h.precedes(g) && !(h == g)) {
                dominated = true;
                break;
            }
        if (!dominated && std::find(kept.begin(), kept.end(), g) == kept.end())
            kept.push_back(g);
    }
    std::sort(kept.begin(), kept.end(),
              [](const GridIndex& a, const GridIndex& b) { return a.row != b.row ? a.row < b.row : a.col < b.col; });
    grades = std::move(kept);
}

}  // namespace

Bifiltration::Bifiltration(std::vector<double> row_values, std::vector<double> col_values,
                           std::vector<BifiltrationCell> cells, std::optional<int> dim_cap)
    : row_values_(std::move(row_values)), col_values_(std::move(col_values)), cells_(std::move(cells)),
      dim_cap_(dim_cap)
{
    require_monotone(row_values_, "bifiltration rows");
    require_monotone(col_values_, "bifiltration columns");
    std::sort(cells_.begin(), cells_.end(), [](const BifiltrationCell& a, const BifiltrationCell& b) {
        return a.simplex.dim() != b.simplex.dim() ? a.simplex.dim() < b.simplex.dim() : a.simplex < b.simplex;
    });
    std::unordered_map<Simplex, std::size_t, SimplexHash> index;
    for (std::size_t k = 0; k < cells_.size(); ++k) {
        auto& c = cells_[k];
        if (c.grades.empty())
            throw StructureError("bifiltration cell " + c.simplex.to_string() + " has no grade");
        for (const auto& g : c.grades)
            if (g.row >= rows() || g.col >= cols())
                throw StructureError("bifiltration cell " + c.simplex.to_string() + " has a grade outside the grid");
        minimize(c.grades);
        if (!index.emplace(c.simplex, k).second)
            throw StructureError("bifiltration cell " + c.simplex.to_string() + " appears twice");
        if (c.simplex.dim() == 0)
            continue;
        for (const auto& facet : c.simplex.facets()) {
            auto it = index.find(facet);
            if (it == index.end())
                throw StructureError("bifiltration cell " + c.simplex.to_string() + " is missing face " +
                                     facet.to_string());
            for (const auto& g : c.grades) {
                const auto& fg = cells_[it->second].grades;
                if (std::none_of(fg.begin(), fg.end(), [&](const GridIndex& h) { return h.precedes(g); }))
                    throw StructureError("bifiltration cell " + c.simplex.to_string() + " enters before its face " +
                                         facet.to_string());
            }
        }
    }
}

bool Bifiltration::present(std::size_t cell, std::size_t i, std::size_t j) const
{
    const GridIndex at{i, j};
    const auto& g = cells_[cell].grades;
    return std::any_of(g.begin(), g.end(), [&](const GridIndex& h) { return h.precedes(at); });
}

SimplicialComplex Bifiltration::complex_at(std::size_t i, std::size_t j) const
{
    if (i >= rows() || j >= cols())
        throw ValidationError("bifiltration index out of range");
    std::vector<Simplex> simplices;
    for (std::size_t k = 0; k < cells_.size(); ++k)
        if (present(k, i, j))
            simplices.push_back(cells_[k].simplex);
    return SimplicialComplex(std::move(simplices));
}

std::vector<double> Bifiltration::column_scale() const
{
    std::vector<double> scale = col_values_;
    if (require_monotone(col_values_, "bifiltration columns") == Direction::Decreasing)
        for (double& v : scale)
            v = -v;
    return scale;
}

FilteredComplex Bifiltration::row_filtration(std::size_t i) const
{
    if (i >= rows())
        throw ValidationError("bifiltration row out of range");
    const auto scale = column_scale();
    std::vector<FilteredCell> out;
    for (const auto& c : cells_) {
        std::optional<std::size_t> col;
        for (const auto& g : c.grades)
            if (g.row <= i)
                col = col ? std::min(*col, g.col) : g.col;
        if (col)
            out.push_back({c.simplex, scale[*col]});
    }
    return FilteredComplex::from_cells(std::move(out), dim_cap_);
}

Bifiltration Bifiltration::transposed() const
{
    std::vector<BifiltrationCell> cells = cells_;
    for (auto& c : cells)
        for (auto& g : c.grades)
            std::swap(g.row, g.col);
    return Bifiltration(col_values_, row_values_, std::move(cells), dim_cap_);
}

// ---------------------------------------------------------------------------

namespace {

// Every clique of g up to clique_dim, enumerated through the flag builder.
std::vector<Simplex> cliques(const Graph& g, int clique_dim)
{
    std::vector<double> zeros(g.num_vertices(), 0.0);
    std::vector<WeightedEdge> edges;
    for (const auto& e : g.edges())
        edges.push_back({e.u, e.v, 0.0});
    const auto fc = flag_filtration(zeros, edges, clique_dim);
    std::vector<Simplex> out;
    for (const auto& c : fc.cells())
        out.push_back(c.simplex);
    return out;
}

}  // namespace

Bifiltration graph_bifiltration(const Graph& g, std::span<const double> f, std::span<const double> h,
                                std::span<const double> alphas, std::span<const double> betas, int clique_dim)
{
    if (clique_dim < 1)
        throw ValidationError("graph_bifiltration: clique dimension must be at least 1");
    if (f.size() != g.num_vertices() || h.size() != g.num_vertices())
        throw ValidationError("graph_bifiltration: node functions must have one value per vertex");
    require_increasing(alphas, "graph_bifiltration alphas");
    require_increasing(betas, "graph_bifiltration betas");
    const auto a = snap_indices(f, alphas, "graph_bifiltration (first function)", "vertex");
    const auto b = snap_indices(h, betas, "graph_bifiltration (second function)", "vertex");
    std::vector<BifiltrationCell> cells;
    for (auto& s : cliques(g, clique_dim)) {
        GridIndex grade;
        for (Vertex v : s.vertices()) {
            grade.row = std::max(grade.row, a[v]);
            grade.col = std::max(grade.col, b[v]);
        }
        cells.push_back({std::move(s), {grade}});
    }
    return Bifiltration({alphas.begin(), alphas.end()}, {betas.begin(), betas.end()}, std::move(cells), clique_dim);
}

Bifiltration graph_edge_bifiltration(const Graph& g, std::span<const double> f, std::span<const double> alphas,
                                     std::span<const double> betas, int clique_dim)
{
    if (clique_dim < 1)
        throw ValidationError("graph_edge_bifiltration: clique dimension must be at least 1");
    if (f.size() != g.num_vertices())
        throw ValidationError("graph_edge_bifiltration: node function must have one value per vertex");
    require_increasing(alphas, "graph_edge_bifiltration alphas");
    require_increasing(betas, "graph_edge_bifiltration betas");
    const auto a = snap_indices(f, alphas, "graph_edge_bifiltration (node function)", "vertex");
    const auto w = snap_indices(g.edge_weights(), betas, "graph_edge_bifiltration (edge weights)", "edge");
    std::vector<BifiltrationCell> cells;
    for (auto& s : cliques(g, clique_dim)) {
        GridIndex grade;
        const auto vs = s.vertices();
        for (std::size_t x = 0; x < vs.size(); ++x) {
            grade.row = std::max(grade.row, a[vs[x]]);
            for (std::size_t y = x + 1; y < vs.size(); ++y)
                grade.col = std::max(grade.col, w[*g.edge_index(vs[x], vs[y])]);
        }
        cells.push_back({std::move(s), {grade}});
    }
    return Bifiltration({alphas.begin(), alphas.end()}, {betas.begin(), betas.end()}, std::move(cells), clique_dim);
}

Bifiltration image_multichannel_bifiltration(std::span<const GrayImage> channels,
                                             std::span<const std::vector<double>> thresholds,
                                             std::optional<std::size_t> third)
{
    if (channels.size() != 2 && channels.size() != 3)
        throw ValidationError("image_multichannel_bifiltration: expected 2 or 3 channels");
    if (thresholds.size() != channels.size())
        throw ValidationError("image_multichannel_bifiltration: need one threshold list per channel");
    const std::size_t rows = channels[0].rows(), cols = channels[0].cols();
    for (const auto& ch : channels)
        if (ch.rows() != rows || ch.cols() != cols)
            throw ValidationError("image_multichannel_bifiltration: channel shapes differ (" +
                                  std::to_string(rows) + "x" + std::to_string(cols) + " vs " +
                                  std::to_string(ch.rows()) + "x" + std::to_string(ch.cols()) + ")");
    for (const auto& t : thresholds)
        require_increasing(t, "image_multichannel_bifiltration");
    std::optional<double> gamma;
    if (channels.size() == 3) {
        if (!third || *third >= thresholds[2].size())
            throw ValidationError("image_multichannel_bifiltration: three channels need a valid third-axis index");
        gamma = thresholds[2][*third];
    } else if (third) {
        throw ValidationError("image_multichannel_bifiltration: third-axis index given for two channels");
    }

    // per-pixel grade; absent pixels exceed a last threshold or the gamma cut
    std::vector<std::optional<GridIndex>> pixel(rows * cols);
    for (std::size_t p = 0; p < pixel.size(); ++p) {
        const double x = channels[0].values()[p], y = channels[1].values()[p];
        auto ia = std::lower_bound(thresholds[0].begin(), thresholds[0].end(), x);
        auto ib = std::lower_bound(thresholds[1].begin(), thresholds[1].end(), y);
        if (ia == thresholds[0].end() || ib == thresholds[1].end())
            continue;
        if (gamma && channels[2].values()[p] > *gamma)
            continue;
        pixel[p] = GridIndex{static_cast<std::size_t>(ia - thresholds[0].begin()),
                             static_cast<std::size_t>(ib - thresholds[1].begin())};
    }

    std::vector<BifiltrationCell> cells;
    detail::for_each_grid_cell(rows, cols, [&](Simplex s, const std::size_t* incident, std::size_t count) {
        std::vector<GridIndex> grades;
        for (std::size_t k = 0; k < count; ++k)
            if (pixel[incident[k]])
                grades.push_back(*pixel[incident[k]]);
        if (!grades.empty())
            cells.push_back({std::move(s), std::move(grades)});
    });
    return Bifiltration(thresholds[0], thresholds[1], std::move(cells));
}

std::vector<std::size_t> point_density(const PointCloud& pc, double radius)
{
    if (!(radius > 0.0))
        throw ValidationError("density radius must be positive");
    std::vector<std::size_t> out(pc.size(), 0);
    for (std::size_t i = 0; i < pc.size(); ++i)
        for (std::size_t j = 0; j < pc.size(); ++j)
            if (distance(pc.point(i), pc.point(j), Metric::Euclidean) <= radius)
                ++out[i];
    return out;
}

Bifiltration density_rips_bifiltration(const PointCloud& pc, double density_radius,
                                       std::span<const double> density_thresholds, std::span<const double> scales,
                                       int max_cell_dim)
{
    if (max_cell_dim < 1)
        throw ValidationError("density_rips_bifiltration: max_cell_dim must be at least 1");
    if (density_thresholds.size() > 1 &&
        require_monotone(density_thresholds, "density thresholds") != Direction::Decreasing)
        throw ValidationError("density_rips_bifiltration: density thresholds must be strictly decreasing");
    require_monotone(density_thresholds, "density thresholds");
    require_increasing(scales, "density_rips_bifiltration scales");

    const auto density = point_density(pc, density_radius);
    const std::size_t n = pc.size();
    std::vector<std::optional<std::size_t>> row(n);
    for (std::size_t p = 0; p < n; ++p)
        for (std::size_t i = 0; i < density_thresholds.size(); ++i)
            if (static_cast<double>(density[p]) >= density_thresholds[i]) {
                row[p] = i;
                break;
            }

    std::vector<double> zeros(n, 0.0);
    std::vector<WeightedEdge> edges;
    for (Vertex u = 0; u < n; ++u) {
        if (!row[u])
            continue;
        for (Vertex v = u + 1; v < n; ++v) {
            if (!row[v])
                continue;
            const double d = distance(pc.point(u), pc.point(v), Metric::Euclidean);
            auto it = std::lower_bound(scales.begin(), scales.end(), d);
            if (it != scales.end())
                edges.push_back({u, v, static_cast<double>(it - scales.begin())});
        }
    }
    const auto fc = flag_filtration(zeros, edges, max_cell_dim);
    std::vector<BifiltrationCell> cells;
    for (const auto& c : fc.cells()) {
        GridIndex grade{0, static_cast<std::size_t>(c.value)};
        bool present = true;
        for (Vertex v : c.simplex.vertices()) {
            if (!row[v]) {
                present = false;
                break;
            }
            grade.row = std::max(grade.row, *row[v]);
        }
        if (present)
            cells.push_back({c.simplex, {grade}});
    }
    std::optional<int> cap = max_cell_dim;
    if (n > 0 && static_cast<std::size_t>(max_cell_dim) > n - 1)
        cap.reset();
    return Bifiltration({density_thresholds.begin(), density_thresholds.end()}, {scales.begin(), scales.end()},
                        std::move(cells), cap);
}

// ---------------------------------------------------------------------------

namespace {

void require_dim(const Bifiltration& bf, int dim)
{
    if (dim < 0)
        throw ValidationError("homology dimension must be non-negative");
    if (bf.dim_cap() && dim + 1 > *bf.dim_cap())
        throw ValidationError("homology dimension " + std::to_string(dim) +
                              " needs cells of dimension " + std::to_string(dim + 1) +
                              " but the bifiltration was built up to dimension " + std::to_string(*bf.dim_cap()));
}

}  // namespace

BigradedBettiTensor bigraded_betti(const Bifiltration& bf, int dim)
{
    require_dim(bf, dim);
    BigradedBettiTensor out{dim, bf.rows(), bf.cols(), std::vector<long>(bf.rows() * bf.cols(), 0)};
    for (std::size_t i = 0; i < bf.rows(); ++i)
        for (std::size_t j = 0; j < bf.cols(); ++j)
            out.values[i * bf.cols() + j] = betti_numbers(bf.complex_at(i, j), dim)[dim];
    return out;
}

SliceMatrix slice_vectorize(const Bifiltration& bf, int dim, const SliceOptions& options, Warnings* warnings)
{
    if (options.vertical) {
        SliceOptions horizontal = options;
        horizontal.vertical = false;
        return slice_vectorize(bf.transposed(), dim, horizontal, warnings);
    }
    require_dim(bf, dim);
    if (options.vectorizer == SliceVectorizer::Silhouette && !(options.silhouette_power > 0.0))
        throw ValidationError("silhouette power p must be positive");
    if (options.vectorizer == SliceVectorizer::Landscape && options.landscape_level < 1)
        throw ValidationError("landscape level must be >= 1");

    SliceMatrix out;
    out.grid = bf.column_scale();
    out.rows = bf.rows();
    out.cols = out.grid.size();
    for (std::size_t i = 0; i < bf.rows(); ++i) {
        const auto diagrams = compute_persistence(bf.row_filtration(i), dim);
        const auto& pd = diagrams[static_cast<std::size_t>(dim)];
        SampledFunction f;
        switch (options.vectorizer) {
        case SliceVectorizer::Betti:
            f = betti_curve(pd, out.grid);
            break;
        case SliceVectorizer::Silhouette:
            f = silhouette(pd, options.silhouette_power, out.grid, warnings);
            break;
        case SliceVectorizer::Landscape:
            f = landscape(pd, options.landscape_level, out.grid, warnings);
            break;
        }
        out.values.insert(out.values.end(), f.values().begin(), f.values().end());
    }
    return out;
}

TopologicalVector to_vector(const SliceMatrix& m, std::string method, std::string parameters, int dim)
{
    TopologicalVector v;
    v.values = m.values;
    v.segments.push_back({std::move(method), std::move(parameters), dim, m.values.size()});
    return v;
}

}  // namespace tdakit
