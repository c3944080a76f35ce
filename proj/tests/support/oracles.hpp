#pragma once

// Reference implementations used only by the tests. They are deliberately
// naive: dense matrices, exhaustive enumeration, flood fill.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <utility>
#include <vector>

namespace oracle {

using Cell = std::vector<int>;  // sorted vertex list

/// Rank over GF(2) of a dense 0/1 matrix given as rows.
inline std::size_t gf2_rank(std::vector<std::vector<std::uint8_t>> m)
{
    std::size_t rank = 0;
    const std::size_t rows = m.size();
    const std::size_t cols = rows ? m[0].size() : 0;
    for (std::size_t c = 0; c < cols && rank < rows; ++c) {
        std::size_t pivot = rank;
        while (pivot < rows && !m[pivot][c])
            ++pivot;
        if (pivot == rows)
            continue;
        std::swap(m[pivot], m[rank]);
        for (std::size_t r = 0; r < rows; ++r)
            if (r != rank && m[r][c])
                for (std::size_t k = c; k < cols; ++k)
                    m[r][k] ^= m[rank][k];
        ++rank;
    }
    return rank;
}

/// Betti numbers 0..max_k of the complex spanned by `cells` (assumed closed).
inline std::vector<long> betti(const std::vector<Cell>& cells, int max_k)
{
    std::map<int, std::vector<Cell>> by_dim;
    for (const auto& c : cells)
        by_dim[static_cast<int>(c.size()) - 1].push_back(c);
    for (auto& [d, list] : by_dim) {
        std::sort(list.begin(), list.end());
        list.erase(std::unique(list.begin(), list.end()), list.end());
    }
    auto count = [&](int d) -> long { return by_dim.count(d) ? static_cast<long>(by_dim[d].size()) : 0; };
    // rank of the boundary from dimension d to d-1
    auto rank = [&](int d) -> long {
        if (d < 1 || !by_dim.count(d) || !by_dim.count(d - 1))
            return 0;
        const auto& lower = by_dim[d - 1];
        const auto& upper = by_dim[d];
        std::vector<std::vector<std::uint8_t>> m(upper.size(), std::vector<std::uint8_t>(lower.size(), 0));
        for (std::size_t j = 0; j < upper.size(); ++j)
            for (std::size_t drop = 0; drop < upper[j].size(); ++drop) {
                Cell face = upper[j];
                face.erase(face.begin() + static_cast<long>(drop));
                auto it = std::lower_bound(lower.begin(), lower.end(), face);
                m[j][static_cast<std::size_t>(it - lower.begin())] = 1;
            }
        return static_cast<long>(gf2_rank(m));
    };
    std::vector<long> out;
    for (int k = 0; k <= max_k; ++k)
        out.push_back(count(k) - rank(k) - rank(k + 1));
    return out;
}

/// Every non-empty subset of `vertices` that is a clique in `adjacent`,
/// up to max_dim + 1 vertices.
inline std::vector<Cell> cliques(const std::vector<int>& vertices, const std::function<bool(int, int)>& adjacent,
                                 int max_dim)
{
    std::vector<Cell> out;
    const std::size_t n = vertices.size();
    for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
        Cell c;
        for (std::size_t i = 0; i < n; ++i)
            if (mask & (1u << i))
                c.push_back(vertices[i]);
        if (static_cast<int>(c.size()) > max_dim + 1)
            continue;
        bool ok = true;
        for (std::size_t a = 0; a < c.size() && ok; ++a)
            for (std::size_t b = a + 1; b < c.size() && ok; ++b)
                ok = adjacent(c[a], c[b]);
        if (ok) {
            std::sort(c.begin(), c.end());
            out.push_back(c);
        }
    }
    return out;
}

struct Point {
    double b;
    double d;
};

inline double linf(const Point& x, const Point& y) { return std::max(std::abs(x.b - y.b), std::abs(x.d - y.d)); }
inline double to_diag(const Point& x) { return (x.d - x.b) / 2.0; }

/// W_p (or bottleneck for p = inf) by enumerating every partial injection
/// from a into b; unmatched points go to the diagonal.
inline double exhaustive_wasserstein(const std::vector<Point>& a, const std::vector<Point>& b, double p)
{
    const bool bottleneck = std::isinf(p);
    double best = std::numeric_limits<double>::infinity();
    std::vector<int> assign(a.size(), -1);
    std::vector<bool> used(b.size(), false);
    std::function<void(std::size_t)> rec = [&](std::size_t i) {
        if (i == a.size()) {
            double total = 0.0;
            auto add = [&](double c) { total = bottleneck ? std::max(total, c) : total + std::pow(c, p); };
            for (std::size_t k = 0; k < a.size(); ++k)
                add(assign[k] < 0 ? to_diag(a[k]) : linf(a[k], b[static_cast<std::size_t>(assign[k])]));
            for (std::size_t k = 0; k < b.size(); ++k)
                if (!used[k])
                    add(to_diag(b[k]));
            best = std::min(best, bottleneck ? total : std::pow(total, 1.0 / p));
            return;
        }
        assign[i] = -1;
        rec(i + 1);
        for (std::size_t k = 0; k < b.size(); ++k) {
            if (used[k])
                continue;
            used[k] = true;
            assign[i] = static_cast<int>(k);
            rec(i + 1);
            used[k] = false;
        }
        assign[i] = -1;
    };
    rec(0);
    return best;
}

/// Number of 8-connected components of the true cells of a mask.
inline long components8(const std::vector<bool>& mask, std::size_t rows, std::size_t cols)
{
    std::vector<bool> seen(mask.size(), false);
    long count = 0;
    for (std::size_t s = 0; s < mask.size(); ++s) {
        if (!mask[s] || seen[s])
            continue;
        ++count;
        std::vector<std::size_t> stack{s};
        seen[s] = true;
        while (!stack.empty()) {
            const std::size_t p = stack.back();
            stack.pop_back();
            const long r = static_cast<long>(p / cols), c = static_cast<long>(p % cols);
            for (long dr = -1; dr <= 1; ++dr)
                for (long dc = -1; dc <= 1; ++dc) {
                    const long nr = r + dr, nc = c + dc;
                    if (nr < 0 || nc < 0 || nr >= static_cast<long>(rows) || nc >= static_cast<long>(cols))
                        continue;
                    const std::size_t q = static_cast<std::size_t>(nr) * cols + static_cast<std::size_t>(nc);
                    if (mask[q] && !seen[q]) {
                        seen[q] = true;
                        stack.push_back(q);
                    }
                }
        }
    }
    return count;
}

struct NerveEdge {
    std::size_t a;
    std::size_t b;
    std::size_t shared;

    friend bool operator==(const NerveEdge&, const NerveEdge&) = default;
    friend auto operator<=>(const NerveEdge&, const NerveEdge&) = default;
};

/// Every pair of member sets with a non-empty intersection, checked pair by
/// pair.
inline std::vector<NerveEdge> nerve(const std::vector<std::vector<std::size_t>>& nodes)
{
    std::vector<NerveEdge> out;
    for (std::size_t i = 0; i < nodes.size(); ++i)
        for (std::size_t j = i + 1; j < nodes.size(); ++j) {
            std::size_t shared = 0;
            for (std::size_t x : nodes[i])
                shared += static_cast<std::size_t>(std::count(nodes[j].begin(), nodes[j].end(), x));
            if (shared > 0)
                out.push_back({i, j, shared});
        }
    return out;
}

/// Composite Simpson integral of f over [a, b] with n (even) panels.
inline double simpson(const std::function<double(double)>& f, double a, double b, int n)
{
    const double h = (b - a) / n;
    double s = f(a) + f(b);
    for (int i = 1; i < n; ++i)
        s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return s * h / 3.0;
}

}  // namespace oracle
