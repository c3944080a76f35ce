#include "tdakit/flag.hpp"

#include <algorithm>
#include <string>
#include <utility>

#include "tdakit/error.hpp"

namespace tdakit {

namespace {

using Neighbors = std::vector<std::pair<Vertex, double>>;

double edge_value(const std::vector<Neighbors>& up, Vertex a, Vertex b)
{
    if (a > b)
        std::swap(a, b);
    const auto& list = up[a];
    auto it = std::lower_bound(list.begin(), list.end(), b,
                               [](const auto& e, Vertex key) { return e.first < key; });
    return it->second;
}

struct CliqueWalker {
    const std::vector<Neighbors>& up;
    std::span<const double> vertex_values;
    int max_dim;
    std::vector<FilteredCell>& out;

    void extend(std::vector<Vertex>& clique, double value, const std::vector<Vertex>& candidates)
    {
        out.push_back({Simplex(clique), value});
        if (static_cast<int>(clique.size()) - 1 >= max_dim)
            return;
        for (std::size_t i = 0; i < candidates.size(); ++i) {
            const Vertex w = candidates[i];
            double v = std::max(value, vertex_values[w]);
            for (Vertex c : clique)
                v = std::max(v, edge_value(up, c, w));
            std::vector<Vertex> next;
            const auto& wn = up[w];
            // candidates after w that are also adjacent to w
            std::size_t k = 0;
            for (std::size_t j = i + 1; j < candidates.size(); ++j) {
                while (k < wn.size() && wn[k].first < candidates[j])
                    ++k;
                if (k < wn.size() && wn[k].first == candidates[j])
                    next.push_back(candidates[j]);
            }
            clique.push_back(w);
            extend(clique, v, next);
            clique.pop_back();
        }
    }
};

}  // namespace

FilteredComplex flag_filtration(std::span<const double> vertex_values,
                                std::span<const WeightedEdge> edges, int max_dim,
                                std::optional<int> dim_cap)
{
    if (max_dim < 0)
        throw ValidationError("flag filtration: max_dim must be non-negative");
    const std::size_t n = vertex_values.size();
    std::vector<Neighbors> up(n);
    for (const auto& e : edges) {
        if (e.u == e.v)
            throw ValidationError("flag filtration: self-loop at vertex " + std::to_string(e.u));
        if (e.u >= n || e.v >= n)
            throw ValidationError("flag filtration: edge endpoint out of range");
        auto [a, b] = std::minmax(e.u, e.v);
        up[a].emplace_back(b, e.value);
    }
    for (auto& list : up)
        std::sort(list.begin(), list.end());

    std::vector<FilteredCell> cells;
    CliqueWalker walker{up, vertex_values, max_dim, cells};
    std::vector<Vertex> clique;
    for (Vertex v = 0; v < n; ++v) {
        std::vector<Vertex> candidates;
        candidates.reserve(up[v].size());
        for (const auto& [w, val] : up[v])
            candidates.push_back(w);
        clique.assign(1, v);
        walker.extend(clique, vertex_values[v], candidates);
    }
    return FilteredComplex::from_cells(std::move(cells), dim_cap);
}

}  // namespace tdakit
