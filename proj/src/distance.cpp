#include "tdakit/distance.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <string>

#include "tdakit/error.hpp"

namespace tdakit {

double point_distance(const PersistencePair& x, const PersistencePair& y)
{
    return std::max(std::abs(x.birth - y.birth), std::abs(x.death - y.death));
}

double diagonal_distance(const PersistencePair& x) { return (x.death - x.birth) / 2.0; }

std::vector<std::size_t> solve_assignment(const std::vector<std::vector<double>>& cost)
{
    // Shortest augmenting path with potentials (1-based internally).
    const std::size_t n = cost.size();
    constexpr double inf = std::numeric_limits<double>::infinity();
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
    std::vector<std::size_t> p(n + 1, 0), way(n + 1, 0);
    for (std::size_t i = 1; i <= n; ++i) {
        p[0] = i;
        std::size_t j0 = 0;
        std::vector<double> minv(n + 1, inf);
        std::vector<bool> used(n + 1, false);
        do {
            used[j0] = true;
            const std::size_t i0 = p[j0];
            double delta = inf;
            std::size_t j1 = 0;
            for (std::size_t j = 1; j <= n; ++j) {
                if (used[j])
                    continue;
                const double cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (std::size_t j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            const std::size_t j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0 != 0);
    }
    std::vector<std::size_t> col(n);
    for (std::size_t j = 1; j <= n; ++j)
        if (p[j] != 0)
            col[p[j] - 1] = j - 1;
    return col;
}

namespace {

struct Split {
    std::vector<std::size_t> finite;
    std::vector<std::size_t> infinite;
};

Split split(const PersistenceDiagram& pd)
{
    Split s;
    for (std::size_t i = 0; i < pd.size(); ++i) {
        const auto& q = pd.pairs[i];
        if (std::isnan(q.birth) || std::isnan(q.death) || std::isinf(q.birth))
            throw ValidationError("diagram contains a point with undefined birth or death");
        (q.is_infinite() ? s.infinite : s.finite).push_back(i);
    }
    return s;
}

// Kuhn's augmenting-path matching on the augmented bipartite graph where the
// left side is a's points then b's diagonal slots, and the right side is b's
// points then a's diagonal slots.
bool has_perfect_matching(std::size_t n, const std::function<bool(std::size_t, std::size_t)>& allowed,
                          std::vector<std::size_t>& match_right)
{
    constexpr auto none = std::numeric_limits<std::size_t>::max();
    match_right.assign(n, none);
    std::vector<char> seen;
    std::function<bool(std::size_t)> augment = [&](std::size_t i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (seen[j] || !allowed(i, j))
                continue;
            seen[j] = 1;
            if (match_right[j] == none || augment(match_right[j])) {
                match_right[j] = i;
                return true;
            }
        }
        return false;
    };
    for (std::size_t i = 0; i < n; ++i) {
        seen.assign(n, 0);
        if (!augment(i))
            return false;
    }
    return true;
}

}  // namespace

Matching optimal_matching(const PersistenceDiagram& a, const PersistenceDiagram& b, double p)
{
    if (a.dim != b.dim)
        throw ValidationError("diagrams have different homology dimensions (" + std::to_string(a.dim) + " vs " +
                              std::to_string(b.dim) + ")");
    const bool bottleneck = p == kInfinity;
    if (!bottleneck && !(p >= 1.0))
        throw ValidationError("Wasserstein order p must be >= 1 or infinity");

    const Split sa = split(a), sb = split(b);
    if (sa.infinite.size() != sb.infinite.size())
        throw ValidationError("diagrams in dimension " + std::to_string(a.dim) +
                              " have different numbers of infinite bars (" + std::to_string(sa.infinite.size()) +
                              " vs " + std::to_string(sb.infinite.size()) + ")");

    Matching out;
    double total = 0.0;  // sum of cost^p, or max cost for bottleneck

    auto by_birth = [](const PersistenceDiagram& pd, std::vector<std::size_t> ids) {
        std::stable_sort(ids.begin(), ids.end(),
                         [&](auto x, auto y) { return pd.pairs[x].birth < pd.pairs[y].birth; });
        return ids;
    };
    const auto ia = by_birth(a, sa.infinite), ib = by_birth(b, sb.infinite);
    for (std::size_t k = 0; k < ia.size(); ++k) {
        const double c = std::abs(a.pairs[ia[k]].birth - b.pairs[ib[k]].birth);
        total = bottleneck ? std::max(total, c) : total + std::pow(c, p);
        out.pairs.push_back({ia[k], ib[k]});
    }

    const std::size_t n = sa.finite.size(), m = sb.finite.size();
    const std::size_t size = n + m;
    // cost of left i (a point or b-diagonal slot) to right j (b point or a-diagonal slot)
    auto edge_cost = [&](std::size_t i, std::size_t j) -> double {
        if (i < n && j < m)
            return point_distance(a.pairs[sa.finite[i]], b.pairs[sb.finite[j]]);
        if (i < n)
            return diagonal_distance(a.pairs[sa.finite[i]]);
        if (j < m)
            return diagonal_distance(b.pairs[sb.finite[j]]);
        return 0.0;
    };
    auto record = [&](std::size_t i, std::size_t j) {
        if (i < n && j < m)
            out.pairs.push_back({sa.finite[i], sb.finite[j]});
        else if (i < n)
            out.pairs.push_back({sa.finite[i], std::nullopt});
        else if (j < m)
            out.pairs.push_back({std::nullopt, sb.finite[j]});
    };

    if (size > 0 && !bottleneck) {
        std::vector<std::vector<double>> cost(size, std::vector<double>(size));
        for (std::size_t i = 0; i < size; ++i)
            for (std::size_t j = 0; j < size; ++j)
                cost[i][j] = std::pow(edge_cost(i, j), p);
        const auto col = solve_assignment(cost);
        for (std::size_t i = 0; i < size; ++i) {
            total += cost[i][col[i]];
            record(i, col[i]);
        }
    } else if (size > 0) {
        std::vector<double> candidates;
        for (std::size_t i = 0; i < size; ++i)
            for (std::size_t j = 0; j < size; ++j)
                candidates.push_back(edge_cost(i, j));
        std::sort(candidates.begin(), candidates.end());
        candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
        std::size_t lo = 0, hi = candidates.size() - 1;  // candidates[hi] is always feasible
        std::vector<std::size_t> match_right;
        while (lo < hi) {
            const std::size_t mid = lo + (hi - lo) / 2;
            const double t = candidates[mid];
            if (has_perfect_matching(size, [&](auto i, auto j) { return edge_cost(i, j) <= t; }, match_right))
                hi = mid;
            else
                lo = mid + 1;
        }
        const double t = candidates[lo];
        has_perfect_matching(size, [&](auto i, auto j) { return edge_cost(i, j) <= t; }, match_right);
        for (std::size_t j = 0; j < size; ++j)
            record(match_right[j], j);
        total = std::max(total, t);
    }

    out.cost = bottleneck ? total : std::pow(total, 1.0 / p);
    return out;
}

double wasserstein_distance(const PersistenceDiagram& a, const PersistenceDiagram& b, double p)
{
    return optimal_matching(a, b, p).cost;
}

double bottleneck_distance(const PersistenceDiagram& a, const PersistenceDiagram& b)
{
    return optimal_matching(a, b, kInfinity).cost;
}

double pwgk(const PersistenceDiagram& a, const PersistenceDiagram& b, double sigma, double weight_power)
{
    if (!(sigma > 0.0))
        throw ValidationError("pwgk: sigma must be positive");
    for (const auto* pd : {&a, &b})
        for (const auto& q : pd->pairs)
            if (q.is_infinite())
                throw ValidationError("pwgk: infinite bars have no defined weight");
    const double denom = 2.0 * sigma * sigma;
    double sum = 0.0;
    for (const auto& x : a.pairs) {
        const double wx = std::pow(x.lifespan(), weight_power);
        for (const auto& y : b.pairs) {
            const double db = x.birth - y.birth, dd = x.death - y.death;
            sum += wx * std::pow(y.lifespan(), weight_power) * std::exp(-(db * db + dd * dd) / denom);
        }
    }
    return sum;
}

}  // namespace tdakit
