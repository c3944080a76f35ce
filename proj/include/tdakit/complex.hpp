#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace tdakit {

using Vertex = std::uint32_t;

/// An abstract simplex: a strictly increasing list of vertex ids.
class Simplex {
public:
    Simplex() = default;
    /// Sorts the vertices; throws ValidationError on an empty list or a
    /// repeated vertex.
    explicit Simplex(std::vector<Vertex> vertices);
    Simplex(std::initializer_list<Vertex> vertices);

    int dim() const { return static_cast<int>(vertices_.size()) - 1; }
    std::span<const Vertex> vertices() const { return vertices_; }
    Vertex operator[](std::size_t i) const { return vertices_[i]; }

    /// Codimension-1 faces, the i-th obtained by dropping vertex i.
    std::vector<Simplex> facets() const;

    std::string to_string() const;

    friend bool operator==(const Simplex&, const Simplex&) = default;
    friend auto operator<=>(const Simplex&, const Simplex&) = default;

private:
    std::vector<Vertex> vertices_;
};

struct SimplexHash {
    std::size_t operator()(const Simplex& s) const noexcept;
};

/// Face-closed set of simplices, stored per dimension in lexicographic order.
class SimplicialComplex {
public:
    SimplicialComplex() = default;
    /// Deduplicates the input and throws StructureError if some face of a
    /// member is missing.
    explicit SimplicialComplex(std::vector<Simplex> simplices);

    /// Smallest complex containing every generator.
    static SimplicialComplex closure_of(std::span<const Simplex> generators);

    /// -1 for the empty complex.
    int max_dim() const { return static_cast<int>(by_dim_.size()) - 1; }
    std::size_t count(int dim) const;
    std::size_t size() const;
    std::span<const Simplex> simplices(int dim) const;
    bool contains(const Simplex& s) const;
    std::optional<std::size_t> index_in_dim(const Simplex& s) const;

private:
    std::vector<std::vector<Simplex>> by_dim_;
};

/// Z2 sparse matrix stored by columns; each column is a sorted list of row
/// indices.
struct BoundaryMatrix {
    std::size_t rows = 0;
    std::vector<std::vector<std::size_t>> columns;

    std::size_t cols() const { return columns.size(); }
    bool entry(std::size_t row, std::size_t col) const;
};

struct FilteredCell {
    Simplex simplex;
    double value = 0.0;
};

/// Cells sorted by (value, dimension, vertices). Every face is present with a
/// value no larger than its coface, so each prefix is a simplicial complex.
class FilteredComplex {
public:
    FilteredComplex() = default;

    /// Sorts and validates the cells. `dim_cap` records the dimension at
    /// which a builder stopped adding cells; leave it empty when the cell
    /// list is the whole complex.
    static FilteredComplex from_cells(std::vector<FilteredCell> cells,
                                      std::optional<int> dim_cap = std::nullopt);

    std::span<const FilteredCell> cells() const { return cells_; }
    const FilteredCell& operator[](std::size_t i) const { return cells_[i]; }
    std::size_t size() const { return cells_.size(); }
    bool empty() const { return cells_.empty(); }
    int max_dim() const { return max_dim_; }
    std::optional<int> dim_cap() const { return dim_cap_; }

    std::optional<std::size_t> index_of(const Simplex& s) const;

    /// Subcomplex of cells with value <= t.
    SimplicialComplex prefix(double t) const;
    /// Sorted distinct cell values.
    std::vector<double> values() const;

private:
    std::vector<FilteredCell> cells_;
    std::unordered_map<Simplex, std::size_t, SimplexHash> index_;
    int max_dim_ = -1;
    std::optional<int> dim_cap_;
};

/// Orders cells by (value, dimension, lexicographic vertices).
bool filtration_less(const FilteredCell& a, const FilteredCell& b);

/// Boundary of every cell in filtration order; rows and columns share the
/// cell indexing.
BoundaryMatrix boundary_matrix(const FilteredComplex& fc);

/// The k-th boundary operator of a static complex: columns are k-simplices,
/// rows are (k-1)-simplices, both in lexicographic order.
BoundaryMatrix boundary_operator(const SimplicialComplex& complex, int k);

/// Rank over Z2.
std::size_t z2_rank(const BoundaryMatrix& m);

long euler_characteristic(const SimplicialComplex& complex);

/// [beta_0 ... beta_max_k]. Dimensions above the complex's top dimension
/// report zero.
std::vector<long> betti_numbers(const SimplicialComplex& complex, int max_k);

}  // namespace tdakit
