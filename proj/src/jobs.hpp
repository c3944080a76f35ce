#pragma once

#include <optional>
#include <string>
#include <variant>

#include <json.hpp>

#include "tdakit/cubical.hpp"
#include "tdakit/graph.hpp"
#include "tdakit/io.hpp"
#include "tdakit/mapper.hpp"
#include "tdakit/pointcloud.hpp"

namespace tdakit::detail {

NodeFunction parse_node_function(const std::string& name);

/// Mapper input shared by the CLI and the service.
using MapperSource = std::variant<const PointCloud*, const Graph*, const GrayImage*>;

struct MapperRequest {
    std::string lens = "x";
    std::optional<std::string> lens2;
    int resolution = 4;
    int resolution2 = 4;
    double overlap = 0.25;
    double overlap2 = 0.25;
    ClusterSpec clustering;
    std::optional<long> seed;
};

nlohmann::json clustering_json(const ClusterSpec& spec, std::optional<long> seed);

/// Lens values, cover, clustering and nerve for any source kind. Graphs take
/// node-function lenses, images use pixel intensity over [0, max(255, max)].
MapperGraph run_mapper(const MapperSource& source, const MapperRequest& request, MapperParams& params,
                       Warnings* warnings);

}  // namespace tdakit::detail
