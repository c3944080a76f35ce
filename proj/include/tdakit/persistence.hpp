#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <utility>
#include <vector>

#include "tdakit/complex.hpp"

namespace tdakit {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

struct PersistencePair {
    int dim = 0;
    double birth = 0.0;
    double death = kInfinity;

    bool is_infinite() const { return death == kInfinity; }
    double lifespan() const { return death - birth; }

    friend bool operator==(const PersistencePair&, const PersistencePair&) = default;
};

struct PersistenceDiagram {
    int dim = 0;
    std::vector<PersistencePair> pairs;

    std::size_t size() const { return pairs.size(); }
    bool empty() const { return pairs.empty(); }
    void add(double birth, double death) { pairs.push_back({dim, birth, death}); }
    /// Sorts pairs by (birth, death); diagrams compare as multisets afterwards.
    void canonicalize();

    friend bool operator==(const PersistenceDiagram&, const PersistenceDiagram&) = default;
};

/// Half-open interval [lo, hi).
struct Bar {
    double lo = 0.0;
    double hi = kInfinity;

    friend bool operator==(const Bar&, const Bar&) = default;
};

struct Barcode {
    int dim = 0;
    std::vector<Bar> bars;
};

Barcode to_barcode(const PersistenceDiagram& pd);
PersistenceDiagram from_barcode(const Barcode& bc);

/// Raw output of the column reduction, in cell indices of the filtration.
/// Zero-length pairs are kept here.
struct Pairing {
    std::vector<std::pair<std::size_t, std::size_t>> finite;  // (birth cell, death cell)
    std::vector<std::size_t> essential;                       // unpaired birth cells
};

/// Reduces the boundary matrix for cells of dimension <= max_hom_dim + 1
/// using the twist/clearing order (high dimensions first).
Pairing reduce_boundary(const FilteredComplex& fc, int max_hom_dim);

/// Diagrams for dimensions 0..max_hom_dim. Throws ValidationError when the
/// complex was built with a dimension cap below max_hom_dim + 1.
std::vector<PersistenceDiagram> compute_persistence(const FilteredComplex& fc, int max_hom_dim);

/// Number of bars [b, d) of dimension `dim` with b <= t < d.
long betti_at(const PersistenceDiagram& pd, double t);
long betti_at(std::span<const PersistenceDiagram> diagrams, int dim, double t);

}  // namespace tdakit
