#include "tdakit/mapper.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>

namespace tdakit {

Cover build_cover(double a, double b, int resolution, double overlap)
{
    if (resolution < 1)
        throw ValidationError("cover resolution must be at least 1");
    if (!(overlap >= 0.0 && overlap < 1.0))
        throw ValidationError("cover overlap must lie in [0, 1)");
    if (!(a < b) || !std::isfinite(a) || !std::isfinite(b))
        throw ValidationError("cover range must be finite with a < b");
    Cover cover;
    if (resolution == 1) {
        cover.intervals.push_back({a, b});
        return cover;
    }
    const double n = resolution;
    const double length = (b - a) / (n - (n - 1.0) * overlap);
    const double step = (1.0 - overlap) * length;
    for (int k = 0; k < resolution; ++k) {
        const double lo = a + step * k;
        cover.intervals.push_back({lo, k + 1 == resolution ? b : lo + length});
    }
    return cover;
}

Cover cover_for(std::span<const double> lens_values, int resolution, double overlap)
{
    if (lens_values.empty())
        throw ValidationError("cover_for: no lens values");
    const auto [lo, hi] = std::minmax_element(lens_values.begin(), lens_values.end());
    if (*lo == *hi)
        return build_cover(*lo - 0.5, *hi + 0.5, resolution, overlap);
    return build_cover(*lo, *hi, resolution, overlap);
}

// ---------------------------------------------------------------------------

namespace {

std::size_t parse_size(const std::string& s, const std::string& context)
{
    try {
        std::size_t used = 0;
        const long v = std::stol(s, &used);
        if (used != s.size() || v < 0)
            throw std::invalid_argument(s);
        return static_cast<std::size_t>(v);
    } catch (const std::exception&) {
        throw ValidationError("lens '" + context + "': '" + s + "' is not a non-negative integer");
    }
}

}  // namespace

LensSpec LensSpec::parse(const std::string& text)
{
    LensSpec spec;
    const auto colon = text.find(':');
    const std::string name = text.substr(0, colon);
    const std::string arg = colon == std::string::npos ? "" : text.substr(colon + 1);
    if (name == "x" || name == "y" || name == "z") {
        spec.kind = LensKind::Coordinate;
        spec.axis = static_cast<std::size_t>(name[0] - 'x');
    } else if (name == "coordinate") {
        spec.kind = LensKind::Coordinate;
        spec.axis = arg.empty() ? 0 : parse_size(arg, text);
    } else if (name == "eccentricity") {
        spec.kind = LensKind::Eccentricity;
    } else if (name == "density") {
        spec.kind = LensKind::Density;
        if (!arg.empty()) {
            try {
                spec.radius = std::stod(arg);
            } catch (const std::exception&) {
                throw ValidationError("lens '" + text + "': radius is not a number");
            }
        }
    } else if (name == "pca") {
        spec.kind = LensKind::Pca;
        spec.component = arg.empty() ? 1 : parse_size(arg, text);
        if (spec.component == 0)
            throw ValidationError("lens '" + text + "': principal components are numbered from 1");
    } else {
        throw ValidationError("unknown lens '" + text + "'");
    }
    return spec;
}

std::string LensSpec::to_string() const
{
    std::ostringstream out;
    switch (kind) {
    case LensKind::Coordinate:
        out << "coordinate:" << axis;
        break;
    case LensKind::Eccentricity:
        out << "eccentricity";
        break;
    case LensKind::Density:
        out << "density:" << radius;
        break;
    case LensKind::Pca:
        out << "pca:" << component;
        break;
    }
    return out.str();
}

std::vector<std::string> lens_kinds() { return {"coordinate", "eccentricity", "density", "pca"}; }

namespace {

std::vector<double> pca_lens(const PointCloud& pc, std::size_t component)
{
    const std::size_t n = pc.size(), d = pc.dimension();
    if (component > d)
        throw ValidationError("pca lens: component " + std::to_string(component) + " exceeds dimension " +
                              std::to_string(d));
    std::vector<double> mean(d, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t a = 0; a < d; ++a)
            mean[a] += pc.coord(i, a) / static_cast<double>(n);
    std::vector<double> cov(d * d, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t a = 0; a < d; ++a)
            for (std::size_t b = 0; b < d; ++b)
                cov[a * d + b] += (pc.coord(i, a) - mean[a]) * (pc.coord(i, b) - mean[b]) / static_cast<double>(n);

    std::vector<double> v(d);
    for (std::size_t c = 0; c < component; ++c) {
        // start from the heaviest column, never orthogonal to a nonzero matrix's range
        std::size_t best = 0;
        double best_norm = -1.0;
        for (std::size_t b = 0; b < d; ++b) {
            double s = 0.0;
            for (std::size_t a = 0; a < d; ++a)
                s += cov[a * d + b] * cov[a * d + b];
            if (s > best_norm) {
                best_norm = s;
                best = b;
            }
        }
        for (std::size_t a = 0; a < d; ++a)
            v[a] = best_norm > 0.0 ? cov[a * d + best] : (a == c ? 1.0 : 0.0);
        double lambda = 0.0;
        for (int it = 0; it < 10000; ++it) {
            std::vector<double> w(d, 0.0);
            for (std::size_t a = 0; a < d; ++a)
                for (std::size_t b = 0; b < d; ++b)
                    w[a] += cov[a * d + b] * v[b];
            double norm = std::sqrt(std::inner_product(w.begin(), w.end(), w.begin(), 0.0));
            if (norm == 0.0)
                break;
            double change = 0.0;
            for (std::size_t a = 0; a < d; ++a) {
                w[a] /= norm;
                change = std::max(change, std::abs(w[a] - v[a]));
            }
            v = w;
            lambda = norm;
            if (change < 1e-13)
                break;
        }
        double vn = std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0));
        for (double& x : v)
            x /= vn;
        for (std::size_t a = 0; a < d; ++a)
            for (std::size_t b = 0; b < d; ++b)
                cov[a * d + b] -= lambda * v[a] * v[b];
    }
    std::size_t lead = 0;
    for (std::size_t a = 1; a < d; ++a)
        if (std::abs(v[a]) > std::abs(v[lead]))
            lead = a;
    if (v[lead] < 0.0)
        for (double& x : v)
            x = -x;
    std::vector<double> out(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t a = 0; a < d; ++a)
            out[i] += (pc.coord(i, a) - mean[a]) * v[a];
    return out;
}

}  // namespace

std::vector<double> lens(const PointCloud& pc, const LensSpec& spec)
{
    const std::size_t n = pc.size();
    std::vector<double> out(n, 0.0);
    switch (spec.kind) {
    case LensKind::Coordinate:
        if (spec.axis >= pc.dimension())
            throw ValidationError("coordinate lens: axis " + std::to_string(spec.axis) + " out of range for " +
                                  std::to_string(pc.dimension()) + "-dimensional points");
        for (std::size_t i = 0; i < n; ++i)
            out[i] = pc.coord(i, spec.axis);
        return out;
    case LensKind::Eccentricity:
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                out[i] = std::max(out[i], distance(pc.point(i), pc.point(j), Metric::Euclidean));
        return out;
    case LensKind::Density:
        if (!(spec.radius > 0.0))
            throw ValidationError("density lens: radius must be positive");
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (distance(pc.point(i), pc.point(j), Metric::Euclidean) <= spec.radius)
                    out[i] += 1.0;
        return out;
    case LensKind::Pca:
        return pca_lens(pc, spec.component);
    }
    return out;
}

// ---------------------------------------------------------------------------

std::string ClusterSpec::to_string() const
{
    std::ostringstream out;
    switch (method) {
    case ClusterMethod::SingleLinkage:
        out << "single_linkage(eps=" << eps << ")";
        break;
    case ClusterMethod::KMeans:
        out << "kmeans(k=" << k << ")";
        break;
    case ClusterMethod::DBSCAN:
        out << "dbscan(eps=" << eps << ",min_pts=" << min_pts << ")";
        break;
    }
    return out.str();
}

ClusterMethod parse_cluster_method(const std::string& name)
{
    if (name == "single_linkage" || name == "single-linkage")
        return ClusterMethod::SingleLinkage;
    if (name == "kmeans")
        return ClusterMethod::KMeans;
    if (name == "dbscan")
        return ClusterMethod::DBSCAN;
    throw ValidationError("unknown clustering method '" + name + "' (single_linkage, kmeans, dbscan)");
}

namespace {

struct UnionFind {
    std::vector<std::size_t> parent;
    explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    std::size_t find(std::size_t x)
    {
        while (parent[x] != x)
            x = parent[x] = parent[parent[x]];
        return x;
    }
    void unite(std::size_t a, std::size_t b)
    {
        a = find(a);
        b = find(b);
        if (a != b)
            parent[std::max(a, b)] = std::min(a, b);
    }
};

std::vector<std::vector<std::size_t>> group(std::span<const std::size_t> members,
                                            const std::vector<std::size_t>& label, std::size_t none)
{
    std::map<std::size_t, std::vector<std::size_t>> by_label;
    for (std::size_t i = 0; i < members.size(); ++i)
        if (label[i] != none)
            by_label[label[i]].push_back(members[i]);
    std::vector<std::vector<std::size_t>> out;
    for (auto& [_, c] : by_label) {
        std::sort(c.begin(), c.end());
        out.push_back(std::move(c));
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.front() < b.front(); });
    return out;
}

std::vector<std::vector<std::size_t>> kmeans(const PointCloud& pc, std::vector<std::size_t> ids, std::size_t k)
{
    const std::size_t m = ids.size(), d = pc.dimension();
    auto dist2 = [&](std::span<const double> a, std::span<const double> b) {
        double s = 0.0;
        for (std::size_t x = 0; x < d; ++x)
            s += (a[x] - b[x]) * (a[x] - b[x]);
        return s;
    };
    // farthest-first seeding from the lowest id; ties go to the lower id
    std::vector<std::vector<double>> centres;
    centres.emplace_back(pc.point(ids[0]).begin(), pc.point(ids[0]).end());
    std::vector<double> nearest(m, std::numeric_limits<double>::infinity());
    while (centres.size() < k) {
        std::size_t far = 0;
        double far_d = -1.0;
        for (std::size_t i = 0; i < m; ++i) {
            nearest[i] = std::min(nearest[i], dist2(pc.point(ids[i]), centres.back()));
            if (nearest[i] > far_d) {
                far_d = nearest[i];
                far = i;
            }
        }
        centres.emplace_back(pc.point(ids[far]).begin(), pc.point(ids[far]).end());
    }
    std::vector<std::size_t> label(m, 0);
    for (int iter = 0; iter < 300; ++iter) {
        bool changed = iter == 0;
        for (std::size_t i = 0; i < m; ++i) {
            std::size_t best = 0;
            double best_d = std::numeric_limits<double>::infinity();
            for (std::size_t c = 0; c < centres.size(); ++c) {
                const double dd = dist2(pc.point(ids[i]), centres[c]);
                if (dd < best_d) {
                    best_d = dd;
                    best = c;
                }
            }
            if (label[i] != best) {
                label[i] = best;
                changed = true;
            }
        }
        if (!changed)
            break;
        std::vector<std::vector<double>> sum(centres.size(), std::vector<double>(d, 0.0));
        std::vector<std::size_t> count(centres.size(), 0);
        for (std::size_t i = 0; i < m; ++i) {
            ++count[label[i]];
            for (std::size_t x = 0; x < d; ++x)
                sum[label[i]][x] += pc.coord(ids[i], x);
        }
        for (std::size_t c = 0; c < centres.size(); ++c)
            if (count[c] > 0)
                for (std::size_t x = 0; x < d; ++x)
                    centres[c][x] = sum[c][x] / static_cast<double>(count[c]);
    }
    return group(ids, label, std::numeric_limits<std::size_t>::max());
}

}  // namespace

std::vector<std::vector<std::size_t>> cluster(const PointCloud& pc, std::span<const std::size_t> members,
                                              const ClusterSpec& spec, Warnings* warnings)
{
    if (members.empty())
        throw ValidationError("cluster: member set is empty");
    std::vector<std::size_t> ids(members.begin(), members.end());
    std::sort(ids.begin(), ids.end());
    const std::size_t m = ids.size();
    auto near = [&](std::size_t i, std::size_t j) {
        return distance(pc.point(ids[i]), pc.point(ids[j]), Metric::Euclidean) <= spec.eps;
    };

    switch (spec.method) {
    case ClusterMethod::SingleLinkage: {
        if (!(spec.eps >= 0.0))
            throw ValidationError("single_linkage: eps must be non-negative");
        UnionFind uf(m);
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = i + 1; j < m; ++j)
                if (near(i, j))
                    uf.unite(i, j);
        std::vector<std::size_t> label(m);
        for (std::size_t i = 0; i < m; ++i)
            label[i] = uf.find(i);
        return group(ids, label, std::numeric_limits<std::size_t>::max());
    }
    case ClusterMethod::KMeans: {
        if (spec.k < 1)
            throw ValidationError("kmeans: k must be at least 1");
        std::size_t k = spec.k;
        if (k > m) {
            warn(warnings, "kmeans: k=" + std::to_string(k) + " clamped to " + std::to_string(m) + " members");
            k = m;
        }
        return kmeans(pc, ids, k);
    }
    case ClusterMethod::DBSCAN: {
        if (!(spec.eps >= 0.0))
            throw ValidationError("dbscan: eps must be non-negative");
        if (spec.min_pts < 1)
            throw ValidationError("dbscan: min_pts must be at least 1");
        constexpr auto none = std::numeric_limits<std::size_t>::max();
        std::vector<std::vector<std::size_t>> nbrs(m);
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < m; ++j)
                if (near(i, j))
                    nbrs[i].push_back(j);
        std::vector<bool> core(m);
        for (std::size_t i = 0; i < m; ++i)
            core[i] = nbrs[i].size() >= spec.min_pts;
        std::vector<std::size_t> label(m, none);
        std::size_t next = 0;
        for (std::size_t s = 0; s < m; ++s) {
            if (!core[s] || label[s] != none)
                continue;
            label[s] = next;
            std::vector<std::size_t> queue{s};
            while (!queue.empty()) {
                const std::size_t p = queue.back();
                queue.pop_back();
                if (!core[p])
                    continue;
                for (std::size_t q : nbrs[p])
                    if (label[q] == none) {
                        label[q] = next;
                        queue.push_back(q);
                    }
            }
            ++next;
        }
        return group(ids, label, none);
    }
    }
    return {};
}

// ---------------------------------------------------------------------------

std::size_t MapperGraph::component_count() const
{
    UnionFind uf(nodes.size());
    for (const auto& e : edges)
        uf.unite(e.source, e.target);
    std::size_t count = 0;
    for (std::size_t i = 0; i < nodes.size(); ++i)
        count += uf.find(i) == i;
    return count;
}

long MapperGraph::cycle_rank() const
{
    return static_cast<long>(edges.size()) - static_cast<long>(nodes.size()) +
           static_cast<long>(component_count());
}

MapperGraph assemble_mapper(std::vector<std::pair<std::size_t, std::vector<std::size_t>>> clusters)
{
    std::stable_sort(clusters.begin(), clusters.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first)
            return a.first < b.first;
        return a.second.front() < b.second.front();
    });
    MapperGraph g;
    std::map<std::size_t, std::vector<std::size_t>> nodes_of;  // member -> nodes
    for (auto& [interval, members] : clusters) {
        std::sort(members.begin(), members.end());
        const std::size_t id = g.nodes.size();
        for (std::size_t m : members)
            nodes_of[m].push_back(id);
        g.nodes.push_back({id, interval, std::move(members)});
    }
    std::map<std::pair<std::size_t, std::size_t>, std::size_t> shared;
    for (const auto& [_, ns] : nodes_of)
        for (std::size_t i = 0; i < ns.size(); ++i)
            for (std::size_t j = i + 1; j < ns.size(); ++j)
                ++shared[{ns[i], ns[j]}];
    for (const auto& [key, w] : shared)
        g.edges.push_back({key.first, key.second, w});
    return g;
}

namespace {

void require_total(std::span<const double> lens_values, std::size_t n)
{
    if (lens_values.size() != n)
        throw ValidationError("mapper: expected " + std::to_string(n) + " lens values, got " +
                              std::to_string(lens_values.size()));
    for (double v : lens_values)
        if (!std::isfinite(v))
            throw ValidationError("mapper: lens values must be finite");
}

}  // namespace

MapperGraph mapper_pointcloud(const PointCloud& pc, std::span<const double> lens_values, const Cover& cover,
                              const ClusterSpec& spec, Warnings* warnings)
{
    require_total(lens_values, pc.size());
    std::vector<std::pair<std::size_t, std::vector<std::size_t>>> clusters;
    for (std::size_t k = 0; k < cover.size(); ++k) {
        std::vector<std::size_t> preimage;
        for (std::size_t i = 0; i < pc.size(); ++i)
            if (cover.intervals[k].contains(lens_values[i]))
                preimage.push_back(i);
        if (preimage.empty())
            continue;
        for (auto& c : cluster(pc, preimage, spec, warnings))
            clusters.emplace_back(k, std::move(c));
    }
    return assemble_mapper(std::move(clusters));
}

MapperGraph mapper_pointcloud(const PointCloud& pc, std::span<const double> lens_first,
                              std::span<const double> lens_second, const Cover& first, const Cover& second,
                              const ClusterSpec& spec, Warnings* warnings)
{
    require_total(lens_first, pc.size());
    require_total(lens_second, pc.size());
    std::vector<std::pair<std::size_t, std::vector<std::size_t>>> clusters;
    for (std::size_t a = 0; a < first.size(); ++a)
        for (std::size_t b = 0; b < second.size(); ++b) {
            std::vector<std::size_t> preimage;
            for (std::size_t i = 0; i < pc.size(); ++i)
                if (first.intervals[a].contains(lens_first[i]) && second.intervals[b].contains(lens_second[i]))
                    preimage.push_back(i);
            if (preimage.empty())
                continue;
            for (auto& c : cluster(pc, preimage, spec, warnings))
                clusters.emplace_back(a * second.size() + b, std::move(c));
        }
    return assemble_mapper(std::move(clusters));
}

MapperGraph mapper_graph(const Graph& g, std::span<const double> lens_values, const Cover& cover)
{
    require_total(lens_values, g.num_vertices());
    std::vector<std::pair<std::size_t, std::vector<std::size_t>>> clusters;
    for (std::size_t k = 0; k < cover.size(); ++k) {
        std::vector<Vertex> preimage;
        for (Vertex v = 0; v < g.num_vertices(); ++v)
            if (cover.intervals[k].contains(lens_values[v]))
                preimage.push_back(v);
        if (preimage.empty())
            continue;
        const Graph sub = g.induced(preimage);
        const auto labels = sub.component_labels();
        std::map<std::size_t, std::vector<std::size_t>> comps;
        for (std::size_t i = 0; i < labels.size(); ++i)
            comps[labels[i]].push_back(preimage[i]);
        for (auto& [_, members] : comps)
            clusters.emplace_back(k, std::move(members));
    }
    return assemble_mapper(std::move(clusters));
}

MapperGraph mapper_image(const GrayImage& img, const Cover& cover)
{
    const std::size_t rows = img.rows(), cols = img.cols();
    std::vector<std::pair<std::size_t, std::vector<std::size_t>>> clusters;
    for (std::size_t k = 0; k < cover.size(); ++k) {
        std::vector<bool> in(img.size());
        for (std::size_t p = 0; p < img.size(); ++p)
            in[p] = cover.intervals[k].contains(img.values()[p]);
        UnionFind uf(img.size());
        for (std::size_t r = 0; r < rows; ++r)
            for (std::size_t c = 0; c < cols; ++c) {
                const std::size_t p = r * cols + c;
                if (!in[p])
                    continue;
                // right, down, down-right, down-left neighbours
                const long dr[4] = {0, 1, 1, 1}, dc[4] = {1, 0, 1, -1};
                for (int s = 0; s < 4; ++s) {
                    const long nr = static_cast<long>(r) + dr[s], nc = static_cast<long>(c) + dc[s];
                    if (nr < 0 || nc < 0 || nr >= static_cast<long>(rows) || nc >= static_cast<long>(cols))
                        continue;
                    const std::size_t q = static_cast<std::size_t>(nr) * cols + static_cast<std::size_t>(nc);
                    if (in[q])
                        uf.unite(p, q);
                }
            }
        std::map<std::size_t, std::vector<std::size_t>> comps;
        for (std::size_t p = 0; p < img.size(); ++p)
            if (in[p])
                comps[uf.find(p)].push_back(p);
        for (auto& [_, members] : comps)
            clusters.emplace_back(k, std::move(members));
    }
    return assemble_mapper(std::move(clusters));
}

}  // namespace tdakit
