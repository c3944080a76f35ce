#include "tdakit/persistence.hpp"

#include <algorithm>
#include <string>

#include "tdakit/error.hpp"
#include "z2_column.hpp"

namespace tdakit {

void PersistenceDiagram::canonicalize()
{
    std::sort(pairs.begin(), pairs.end(), [](const PersistencePair& a, const PersistencePair& b) {
        return a.birth != b.birth ? a.birth < b.birth : a.death < b.death;
    });
}

Barcode to_barcode(const PersistenceDiagram& pd)
{
    Barcode bc{pd.dim, {}};
    bc.bars.reserve(pd.size());
    for (const auto& p : pd.pairs)
        bc.bars.push_back({p.birth, p.death});
    return bc;
}

PersistenceDiagram from_barcode(const Barcode& bc)
{
    PersistenceDiagram pd{bc.dim, {}};
    for (const auto& b : bc.bars)
        pd.add(b.lo, b.hi);
    return pd;
}

Pairing reduce_boundary(const FilteredComplex& fc, int max_hom_dim)
{
    if (max_hom_dim < 0)
        throw ValidationError("max_hom_dim must be non-negative");
    constexpr auto none = std::numeric_limits<std::size_t>::max();
    const int top = std::min(max_hom_dim + 1, fc.max_dim());
    const std::size_t n = fc.size();

    std::vector<std::vector<std::size_t>> by_dim(static_cast<std::size_t>(std::max(top, 0)) + 1);
    for (std::size_t j = 0; j < n; ++j) {
        int d = fc[j].simplex.dim();
        if (d <= top)
            by_dim[d].push_back(j);
    }

    std::vector<std::size_t> death_of(n, none);  // birth cell -> death cell
    std::vector<std::size_t> owner(n, none);     // pivot row -> reducing column
    std::vector<std::vector<std::size_t>> reduced(n);
    std::vector<bool> cleared(n, false);
    std::vector<bool> is_death(n, false);
    std::vector<std::size_t> scratch;

    for (int d = top; d >= 1; --d) {
        for (std::size_t j : by_dim[d]) {
            if (cleared[j])
                continue;
            std::vector<std::size_t> col;
            for (const auto& f : fc[j].simplex.facets())
                col.push_back(*fc.index_of(f));
            std::sort(col.begin(), col.end());
            while (!col.empty() && owner[col.back()] != none)
                detail::add_column(col, reduced[owner[col.back()]], scratch);
            if (col.empty())
                continue;
            const std::size_t low = col.back();
            owner[low] = j;
            death_of[low] = j;
            is_death[j] = true;
            cleared[low] = true;
            reduced[j] = std::move(col);
        }
    }

    Pairing out;
    for (int d = 0; d <= std::min(top, max_hom_dim); ++d) {
        for (std::size_t i : by_dim[d]) {
            if (is_death[i])
                continue;
            if (death_of[i] != none)
                out.finite.emplace_back(i, death_of[i]);
            else
                out.essential.push_back(i);
        }
    }
    std::sort(out.finite.begin(), out.finite.end());
    return out;
}

std::vector<PersistenceDiagram> compute_persistence(const FilteredComplex& fc, int max_hom_dim)
{
    if (max_hom_dim < 0)
        throw ValidationError("max_hom_dim must be non-negative");
    if (fc.dim_cap() && *fc.dim_cap() < max_hom_dim + 1)
        throw ValidationError("homology in dimension " + std::to_string(max_hom_dim) +
                              " needs cells up to dimension " + std::to_string(max_hom_dim + 1) +
                              ", but the filtration was built with cells only up to dimension " +
                              std::to_string(*fc.dim_cap()));

    const Pairing pairing = reduce_boundary(fc, max_hom_dim);
    std::vector<PersistenceDiagram> diagrams(static_cast<std::size_t>(max_hom_dim) + 1);
    for (int d = 0; d <= max_hom_dim; ++d)
        diagrams[d].dim = d;
    for (auto [b, d] : pairing.finite) {
        const double birth = fc[b].value;
        const double death = fc[d].value;
        if (birth == death)
            continue;
        diagrams[fc[b].simplex.dim()].add(birth, death);
    }
    for (std::size_t b : pairing.essential)
        diagrams[fc[b].simplex.dim()].add(fc[b].value, kInfinity);
    for (auto& pd : diagrams)
        pd.canonicalize();
    return diagrams;
}

long betti_at(const PersistenceDiagram& pd, double t)
{
    long count = 0;
    for (const auto& p : pd.pairs)
        if (p.birth <= t && t < p.death)
            ++count;
    return count;
}

long betti_at(std::span<const PersistenceDiagram> diagrams, int dim, double t)
{
    long count = 0;
    for (const auto& pd : diagrams)
        if (pd.dim == dim)
            count += betti_at(pd, t);
    return count;
}

}  // namespace tdakit
