#include "jobs.hpp"

#include <algorithm>

namespace tdakit::detail {

NodeFunction parse_node_function(const std::string& name)
{
    if (name == "degree")
        return NodeFunction::Degree;
    if (name == "eccentricity")
        return NodeFunction::Eccentricity;
    if (name == "closeness")
        return NodeFunction::Closeness;
    if (name == "external" || name == "values")
        return NodeFunction::External;
    throw ValidationError("unknown node function '" + name + "' (degree, eccentricity, closeness, external)");
}

nlohmann::json clustering_json(const ClusterSpec& spec, std::optional<long> seed)
{
    nlohmann::json j;
    switch (spec.method) {
    case ClusterMethod::SingleLinkage:
        j = {{"method", "single_linkage"}, {"eps", round9(spec.eps)}};
        break;
    case ClusterMethod::KMeans:
        j = {{"method", "kmeans"}, {"k", spec.k}};
        break;
    case ClusterMethod::DBSCAN:
        j = {{"method", "dbscan"}, {"eps", round9(spec.eps)}, {"min_pts", spec.min_pts}};
        break;
    }
    if (seed)
        j["seed"] = *seed;
    return j;
}

MapperGraph run_mapper(const MapperSource& source, const MapperRequest& request, MapperParams& params,
                       Warnings* warnings)
{
    params.lens = request.lens;
    params.resolution = request.resolution;
    params.overlap = request.overlap;
    params.clustering = clustering_json(request.clustering, request.seed);

    if (auto pc = std::get_if<const PointCloud*>(&source)) {
        const auto values = lens(**pc, LensSpec::parse(request.lens));
        const Cover cover = cover_for(values, request.resolution, request.overlap);
        if (!request.lens2)
            return mapper_pointcloud(**pc, values, cover, request.clustering, warnings);
        params.lens += "," + *request.lens2;
        const auto values2 = lens(**pc, LensSpec::parse(*request.lens2));
        const Cover cover2 = cover_for(values2, request.resolution2, request.overlap2);
        return mapper_pointcloud(**pc, values, values2, cover, cover2, request.clustering, warnings);
    }
    if (request.lens2)
        throw ValidationError("a second lens is only supported for point clouds");
    if (auto g = std::get_if<const Graph*>(&source)) {
        const auto values = node_filtration_values(**g, parse_node_function(request.lens));
        params.clustering = {{"method", "components"}};
        return mapper_graph(**g, values, cover_for(values, request.resolution, request.overlap));
    }
    const GrayImage& img = *std::get<const GrayImage*>(source);
    if (request.lens != "intensity")
        throw ValidationError("images only support the 'intensity' lens");
    params.clustering = {{"method", "components"}, {"connectivity", 8}};
    const double top = std::max(255.0, *std::max_element(img.values().begin(), img.values().end()));
    const double bottom = std::min(0.0, *std::min_element(img.values().begin(), img.values().end()));
    return mapper_image(img, build_cover(bottom, top, request.resolution, request.overlap));
}

}  // namespace tdakit::detail
