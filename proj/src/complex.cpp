#include "tdakit/complex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <unordered_set>

#include "tdakit/error.hpp"
#include "z2_column.hpp"

namespace tdakit {

Simplex::Simplex(std::vector<Vertex> vertices) : vertices_(std::move(vertices))
{
    if (vertices_.empty())
        throw ValidationError("simplex needs at least one vertex");
    std::sort(vertices_.begin(), vertices_.end());
    if (std::adjacent_find(vertices_.begin(), vertices_.end()) != vertices_.end())
        throw ValidationError("simplex has a repeated vertex: " + to_string());
}

Simplex::Simplex(std::initializer_list<Vertex> vertices) : Simplex(std::vector<Vertex>(vertices)) {}

std::vector<Simplex> Simplex::facets() const
{
    std::vector<Simplex> out;
    if (vertices_.size() < 2)
        return out;
    out.reserve(vertices_.size());
    for (std::size_t drop = 0; drop < vertices_.size(); ++drop) {
        Simplex face;
        face.vertices_.reserve(vertices_.size() - 1);
        for (std::size_t i = 0; i < vertices_.size(); ++i)
            if (i != drop)
                face.vertices_.push_back(vertices_[i]);
        out.push_back(std::move(face));
    }
    return out;
}

std::string Simplex::to_string() const
{
    std::ostringstream os;
    os << '[';
    for (std::size_t i = 0; i < vertices_.size(); ++i)
        os << (i ? "," : "") << vertices_[i];
    os << ']';
    return os.str();
}

std::size_t SimplexHash::operator()(const Simplex& s) const noexcept
{
    std::size_t h = 1469598103934665603ull;
    for (Vertex v : s.vertices()) {
        h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    }
    return h;
}

// ---------------------------------------------------------------------------
// SimplicialComplex

SimplicialComplex::SimplicialComplex(std::vector<Simplex> simplices)
{
    std::sort(simplices.begin(), simplices.end(), [](const Simplex& a, const Simplex& b) {
        return a.dim() != b.dim() ? a.dim() < b.dim() : a < b;
    });
    simplices.erase(std::unique(simplices.begin(), simplices.end()), simplices.end());
    for (auto& s : simplices) {
        const auto d = static_cast<std::size_t>(s.dim());
        if (by_dim_.size() <= d)
            by_dim_.resize(d + 1);
        by_dim_[d].push_back(std::move(s));
    }
    for (int d = 1; d <= max_dim(); ++d)
        for (const auto& s : by_dim_[d])
            for (const auto& f : s.facets())
                if (!contains(f))
                    throw StructureError("complex is not closed under faces: " + s.to_string() +
                                         " lacks face " + f.to_string());
}

SimplicialComplex SimplicialComplex::closure_of(std::span<const Simplex> generators)
{
    std::unordered_set<Simplex, SimplexHash> seen;
    std::vector<Simplex> stack(generators.begin(), generators.end());
    while (!stack.empty()) {
        Simplex s = std::move(stack.back());
        stack.pop_back();
        if (!seen.insert(s).second)
            continue;
        for (auto& f : s.facets())
            stack.push_back(std::move(f));
    }
    return SimplicialComplex(std::vector<Simplex>(seen.begin(), seen.end()));
}

std::size_t SimplicialComplex::count(int dim) const
{
    if (dim < 0 || dim > max_dim())
        return 0;
    return by_dim_[dim].size();
}

std::size_t SimplicialComplex::size() const
{
    std::size_t n = 0;
    for (const auto& level : by_dim_)
        n += level.size();
    return n;
}

std::span<const Simplex> SimplicialComplex::simplices(int dim) const
{
    if (dim < 0 || dim > max_dim())
        return {};
    return by_dim_[dim];
}

std::optional<std::size_t> SimplicialComplex::index_in_dim(const Simplex& s) const
{
    auto level = simplices(s.dim());
    auto it = std::lower_bound(level.begin(), level.end(), s);
    if (it == level.end() || *it != s)
        return std::nullopt;
    return static_cast<std::size_t>(it - level.begin());
}

bool SimplicialComplex::contains(const Simplex& s) const { return index_in_dim(s).has_value(); }

// ---------------------------------------------------------------------------
// BoundaryMatrix

bool BoundaryMatrix::entry(std::size_t row, std::size_t col) const
{
    const auto& c = columns.at(col);
    return std::binary_search(c.begin(), c.end(), row);
}

// ---------------------------------------------------------------------------
// FilteredComplex

bool filtration_less(const FilteredCell& a, const FilteredCell& b)
{
    if (a.value != b.value)
        return a.value < b.value;
    if (a.simplex.dim() != b.simplex.dim())
        return a.simplex.dim() < b.simplex.dim();
    return a.simplex < b.simplex;
}

FilteredComplex FilteredComplex::from_cells(std::vector<FilteredCell> cells, std::optional<int> dim_cap)
{
    FilteredComplex fc;
    for (const auto& c : cells)
        if (std::isnan(c.value))
            throw ValidationError("filtration value is NaN for " + c.simplex.to_string());
    std::sort(cells.begin(), cells.end(), filtration_less);
    fc.index_.reserve(cells.size());
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (!fc.index_.emplace(cells[i].simplex, i).second)
            throw StructureError("duplicate simplex in filtration: " + cells[i].simplex.to_string());
        fc.max_dim_ = std::max(fc.max_dim_, cells[i].simplex.dim());
    }
    for (const auto& c : cells) {
        for (const auto& f : c.simplex.facets()) {
            auto it = fc.index_.find(f);
            if (it == fc.index_.end())
                throw StructureError("filtration misses face " + f.to_string() + " of " +
                                     c.simplex.to_string());
            if (cells[it->second].value > c.value)
                throw StructureError("filtration is not monotone: face " + f.to_string() +
                                     " enters after " + c.simplex.to_string());
        }
    }
    fc.cells_ = std::move(cells);
    fc.dim_cap_ = dim_cap;
    return fc;
}

std::optional<std::size_t> FilteredComplex::index_of(const Simplex& s) const
{
    auto it = index_.find(s);
    if (it == index_.end())
        return std::nullopt;
    return it->second;
}

SimplicialComplex FilteredComplex::prefix(double t) const
{
    std::vector<Simplex> out;
    for (const auto& c : cells_) {
        if (c.value > t)
            break;
        out.push_back(c.simplex);
    }
    return SimplicialComplex(std::move(out));
}

std::vector<double> FilteredComplex::values() const
{
    std::vector<double> v;
    for (const auto& c : cells_)
        if (v.empty() || v.back() != c.value)
            v.push_back(c.value);
    return v;
}

// ---------------------------------------------------------------------------
// Boundaries and homology

BoundaryMatrix boundary_matrix(const FilteredComplex& fc)
{
    BoundaryMatrix m;
    m.rows = fc.size();
    m.columns.resize(fc.size());
    for (std::size_t j = 0; j < fc.size(); ++j) {
        auto& col = m.columns[j];
        for (const auto& f : fc[j].simplex.facets()) {
            auto idx = fc.index_of(f);
            if (!idx)
                throw StructureError("missing face " + f.to_string() + " of " +
                                     fc[j].simplex.to_string());
            col.push_back(*idx);
        }
        std::sort(col.begin(), col.end());
    }
    return m;
}

BoundaryMatrix boundary_operator(const SimplicialComplex& complex, int k)
{
    BoundaryMatrix m;
    m.rows = complex.count(k - 1);
    auto cells = complex.simplices(k);
    m.columns.resize(cells.size());
    if (k == 0)
        return m;
    for (std::size_t j = 0; j < cells.size(); ++j) {
        auto& col = m.columns[j];
        for (const auto& f : cells[j].facets())
            col.push_back(*complex.index_in_dim(f));
        std::sort(col.begin(), col.end());
    }
    return m;
}

std::size_t z2_rank(const BoundaryMatrix& m)
{
    constexpr auto none = std::numeric_limits<std::size_t>::max();
    std::vector<std::size_t> pivot_owner(m.rows, none);
    std::vector<std::vector<std::size_t>> reduced;
    reduced.reserve(m.cols());
    std::vector<std::size_t> scratch;
    std::size_t rank = 0;
    for (const auto& original : m.columns) {
        std::vector<std::size_t> col = original;
        while (!col.empty() && pivot_owner[col.back()] != none)
            detail::add_column(col, reduced[pivot_owner[col.back()]], scratch);
        if (!col.empty()) {
            pivot_owner[col.back()] = reduced.size();
            ++rank;
        }
        reduced.push_back(std::move(col));
    }
    return rank;
}

long euler_characteristic(const SimplicialComplex& complex)
{
    long chi = 0;
    for (int k = 0; k <= complex.max_dim(); ++k)
        chi += (k % 2 == 0 ? 1 : -1) * static_cast<long>(complex.count(k));
    return chi;
}

std::vector<long> betti_numbers(const SimplicialComplex& complex, int max_k)
{
    if (max_k < 0)
        throw ValidationError("betti_numbers: max_k must be non-negative");
    // rank of boundary operator d_k for k = 0 .. max_k + 1
    std::vector<long> rank(static_cast<std::size_t>(max_k) + 2, 0);
    for (int k = 1; k <= max_k + 1; ++k)
        if (complex.count(k) > 0)
            rank[k] = static_cast<long>(z2_rank(boundary_operator(complex, k)));
    std::vector<long> betti(static_cast<std::size_t>(max_k) + 1);
    for (int k = 0; k <= max_k; ++k)
        betti[k] = static_cast<long>(complex.count(k)) - rank[k] - rank[k + 1];
    return betti;
}

}  // namespace tdakit
