#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tdakit/cubical.hpp"
#include "tdakit/error.hpp"
#include "tdakit/graph.hpp"
#include "tdakit/pointcloud.hpp"

namespace tdakit {

/// Closed interval [lo, hi].
struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    bool contains(double x) const { return lo <= x && x <= hi; }
    friend bool operator==(const Interval&, const Interval&) = default;
};

struct Cover {
    std::vector<Interval> intervals;

    std::size_t size() const { return intervals.size(); }
};

/// n intervals of length L = (b - a) / (n - (n - 1) g) starting every
/// (1 - g) L, the first at a and the last ending at b.
Cover build_cover(double a, double b, int resolution, double overlap);

/// Cover over [min, max] of the lens values. A constant lens is widened to
/// [v - 0.5, v + 0.5].
Cover cover_for(std::span<const double> lens_values, int resolution, double overlap);

enum class LensKind { Coordinate, Eccentricity, Density, Pca };

struct LensSpec {
    LensKind kind = LensKind::Coordinate;
    std::size_t axis = 0;       // coordinate axis
    double radius = 1.0;        // density radius
    std::size_t component = 1;  // principal component, 1-based

    /// "x", "y", "z", "coordinate:<axis>", "eccentricity", "density:<radius>",
    /// "pca" or "pca:<component>".
    static LensSpec parse(const std::string& text);
    std::string to_string() const;
};

/// Names of the supported lens kinds.
std::vector<std::string> lens_kinds();

std::vector<double> lens(const PointCloud& pc, const LensSpec& spec);

enum class ClusterMethod { SingleLinkage, KMeans, DBSCAN };

struct ClusterSpec {
    ClusterMethod method = ClusterMethod::SingleLinkage;
    double eps = 0.5;
    std::size_t k = 2;
    std::size_t min_pts = 3;

    std::string to_string() const;
};

ClusterMethod parse_cluster_method(const std::string& name);

/// Clusters of `members` (point ids into pc), each sorted, listed by smallest
/// member. DBSCAN noise is left out. kmeans is seeded farthest-first from
/// the lowest id; k above the member count is clamped with a warning.
std::vector<std::vector<std::size_t>> cluster(const PointCloud& pc, std::span<const std::size_t> members,
                                              const ClusterSpec& spec, Warnings* warnings = nullptr);

struct MapperNode {
    std::size_t id = 0;
    std::size_t interval = 0;  // row-major cover cell index in product mode
    std::vector<std::size_t> members;

    std::size_t size() const { return members.size(); }
    friend bool operator==(const MapperNode&, const MapperNode&) = default;
};

struct MapperEdge {
    std::size_t source = 0;
    std::size_t target = 0;
    std::size_t weight = 0;  // shared members

    friend bool operator==(const MapperEdge&, const MapperEdge&) = default;
};

struct MapperGraph {
    std::vector<MapperNode> nodes;
    std::vector<MapperEdge> edges;

    std::size_t component_count() const;
    /// Independent cycles: edges - nodes + components.
    long cycle_rank() const;

    friend bool operator==(const MapperGraph&, const MapperGraph&) = default;
};

/// Nodes are the given clusters, interval by interval; an edge joins every
/// pair of nodes sharing members.
MapperGraph assemble_mapper(std::vector<std::pair<std::size_t, std::vector<std::size_t>>> clusters);

MapperGraph mapper_pointcloud(const PointCloud& pc, std::span<const double> lens_values, const Cover& cover,
                              const ClusterSpec& spec, Warnings* warnings = nullptr);

/// Product-cover Mapper for a two-valued lens; node interval index is
/// i * second.size() + j.
MapperGraph mapper_pointcloud(const PointCloud& pc, std::span<const double> lens_first,
                              std::span<const double> lens_second, const Cover& first, const Cover& second,
                              const ClusterSpec& spec, Warnings* warnings = nullptr);

/// Nodes are the connected components of the subgraphs induced on lens
/// preimages.
MapperGraph mapper_graph(const Graph& g, std::span<const double> lens_values, const Cover& cover);

/// Nodes are the 8-connected components of the pixels whose value lies in
/// each interval; members are row-major pixel ids.
MapperGraph mapper_image(const GrayImage& img, const Cover& cover);

}  // namespace tdakit
