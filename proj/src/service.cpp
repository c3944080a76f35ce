#include "tdakit/service.hpp"

#include <algorithm>
#include <cstdlib>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "jobs.hpp"
#include "tdakit/io.hpp"
#include "tdakit/persistence.hpp"

namespace tdakit {

namespace fs = std::filesystem;
using nlohmann::json;

std::string Dataset::kind() const
{
    switch (data.index()) {
    case 0:
        return "pointcloud";
    case 1:
        return "graph";
    default:
        return "image";
    }
}

std::size_t Dataset::size() const
{
    if (auto pc = std::get_if<PointCloud>(&data))
        return pc->size();
    if (auto g = std::get_if<Graph>(&data))
        return g->num_vertices();
    return std::get<GrayImage>(data).size();
}

MapperService::MapperService(std::vector<Dataset> datasets) : datasets_(std::move(datasets))
{
    std::sort(datasets_.begin(), datasets_.end(), [](const Dataset& a, const Dataset& b) { return a.name < b.name; });
}

MapperService::MapperService(const fs::path& dataset_dir)
{
    if (!fs::is_directory(dataset_dir))
        throw ValidationError("dataset directory '" + dataset_dir.string() + "' does not exist");
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dataset_dir))
        if (entry.is_regular_file())
            files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    std::vector<Dataset> loaded;
    for (const auto& path : files) {
        const std::string ext = path.extension().string();
        const std::string name = path.stem().string();
        const std::string file = path.filename().string();
        if (file.size() > 11 && file.substr(file.size() - 11) == ".values.csv")
            continue;  // node value sidecar
        try {
            if (ext == ".csv") {
                loaded.push_back({name, load_pointcloud(path)});
            } else if (ext == ".pgm") {
                loaded.push_back({name, load_pgm(path)});
            } else if (ext == ".edges" || ext == ".edgelist") {
                std::optional<fs::path> sidecar;
                const fs::path candidate = path.parent_path() / (name + ".values.csv");
                if (fs::exists(candidate))
                    sidecar = candidate;
                loaded.push_back({name, load_graph(path, sidecar).graph});
            }
        } catch (const std::exception& e) {
            throw ValidationError("dataset '" + file + "': " + e.what());
        }
    }
    *this = MapperService(std::move(loaded));
}

const Dataset* MapperService::find(const std::string& name) const
{
    for (const auto& d : datasets_)
        if (d.name == name)
            return &d;
    return nullptr;
}

namespace {

HttpResponse reply(int status, const json& body) { return {status, body.dump() + "\n"}; }

struct FieldErrors {
    json list = json::array();
    void add(const std::string& field, const std::string& message)
    {
        list.push_back({{"field", field}, {"message", message}});
    }
    bool empty() const { return list.empty(); }
};

HttpResponse bad_request(const FieldErrors& errors, const json& echo)
{
    return reply(400, {{"errors", errors.list}, {"params", echo}});
}

// Reads the request body; returns nullopt (with an error recorded) when it is
// not a JSON object.
std::optional<json> parse_body(const std::string& body, FieldErrors& errors)
{
    try {
        json j = json::parse(body);
        if (j.is_object())
            return j;
        errors.add("body", "request body must be a JSON object");
    } catch (const json::parse_error& e) {
        errors.add("body", std::string("invalid JSON: ") + e.what());
    }
    return std::nullopt;
}

std::optional<long> get_int(const json& j, const std::string& key, const std::string& field, long fallback,
                            long min_value, FieldErrors& errors)
{
    if (!j.contains(key))
        return fallback;
    const json& v = j[key];
    if (!v.is_number_integer() && !(v.is_number_float() && v.get<double>() == static_cast<long>(v.get<double>()))) {
        errors.add(field, "must be an integer");
        return std::nullopt;
    }
    const long x = v.is_number_integer() ? v.get<long>() : static_cast<long>(v.get<double>());
    if (x < min_value) {
        errors.add(field, "must be at least " + std::to_string(min_value));
        return std::nullopt;
    }
    return x;
}

std::optional<double> get_number(const json& j, const std::string& key, const std::string& field, double fallback,
                                 FieldErrors& errors)
{
    if (!j.contains(key))
        return fallback;
    if (!j[key].is_number()) {
        errors.add(field, "must be a number");
        return std::nullopt;
    }
    return j[key].get<double>();
}

std::optional<std::string> get_string(const json& j, const std::string& key, const std::string& field,
                                      const std::string& fallback, FieldErrors& errors)
{
    if (!j.contains(key))
        return fallback;
    if (!j[key].is_string()) {
        errors.add(field, "must be a string");
        return std::nullopt;
    }
    return j[key].get<std::string>();
}

}  // namespace

HttpResponse MapperService::list_datasets() const
{
    json list = json::array();
    for (const auto& d : datasets_)
        list.push_back({{"name", d.name}, {"kind", d.kind()}, {"size", d.size()}});
    return reply(200, {{"datasets", list}});
}

HttpResponse MapperService::list_lenses() const
{
    return reply(200, {{"pointcloud", {"x", "y", "z", "coordinate:<axis>", "eccentricity", "density:<radius>",
                                       "pca:<component>"}},
                       {"graph", {"degree", "eccentricity", "closeness", "external"}},
                       {"image", {"intensity"}},
                       {"clustering", {"single_linkage", "kmeans", "dbscan"}}});
}

HttpResponse MapperService::mapper(const std::string& body) const
{
    FieldErrors errors;
    const auto req = parse_body(body, errors);
    if (!req)
        return bad_request(errors, json::object());
    const json& j = *req;

    const auto name = get_string(j, "dataset", "dataset", "", errors);
    if (name && name->empty())
        errors.add("dataset", "is required");
    const Dataset* ds = name && !name->empty() ? find(*name) : nullptr;
    if (name && !name->empty() && !ds)
        return reply(404, {{"errors", {{{"field", "dataset"}, {"message", "unknown dataset '" + *name + "'"}}}},
                           {"params", j}});

    const std::string kind = ds ? ds->kind() : "pointcloud";
    detail::MapperRequest r;
    const std::string default_lens = kind == "pointcloud" ? "x" : kind == "graph" ? "degree" : "intensity";
    if (auto lens = get_string(j, "lens", "lens", default_lens, errors)) {
        r.lens = *lens;
        if (ds) try {
            if (kind == "pointcloud") {
                const auto spec = LensSpec::parse(r.lens);
                const auto& pc = std::get<PointCloud>(ds->data);
                if (spec.kind == LensKind::Coordinate && spec.axis >= pc.dimension())
                    errors.add("lens", "axis " + std::to_string(spec.axis) + " out of range for " +
                                           std::to_string(pc.dimension()) + "-dimensional points");
                if (spec.kind == LensKind::Pca && spec.component > pc.dimension())
                    errors.add("lens", "principal component exceeds the point dimension");
                if (spec.kind == LensKind::Density && !(spec.radius > 0.0))
                    errors.add("lens", "density radius must be positive");
            } else if (kind == "graph") {
                const auto fn = detail::parse_node_function(r.lens);
                if (fn == NodeFunction::External && !std::get<Graph>(ds->data).has_node_values())
                    errors.add("lens", "dataset has no node values");
            } else if (r.lens != "intensity") {
                errors.add("lens", "images only support the 'intensity' lens");
            }
        } catch (const ValidationError& e) {
            errors.add("lens", e.what());
        }
    }
    if (auto v = get_int(j, "resolution", "resolution", 4, 1, errors))
        r.resolution = static_cast<int>(*v);
    if (auto v = get_number(j, "overlap", "overlap", 0.25, errors)) {
        if (!(*v >= 0.0 && *v < 1.0))
            errors.add("overlap", "must lie in [0, 1)");
        r.overlap = *v;
    }
    const json clustering = j.value("clustering", json::object());
    if (!clustering.is_object()) {
        errors.add("clustering", "must be an object");
    } else {
        if (auto m = get_string(clustering, "method", "clustering.method", "single_linkage", errors)) {
            try {
                r.clustering.method = parse_cluster_method(*m);
            } catch (const ValidationError& e) {
                errors.add("clustering.method", e.what());
            }
        }
        if (auto v = get_number(clustering, "eps", "clustering.eps", 0.5, errors)) {
            if (!(*v >= 0.0))
                errors.add("clustering.eps", "must be non-negative");
            r.clustering.eps = *v;
        }
        if (auto v = get_int(clustering, "k", "clustering.k", 2, 1, errors))
            r.clustering.k = static_cast<std::size_t>(*v);
        if (auto v = get_int(clustering, "min_pts", "clustering.min_pts", 3, 1, errors))
            r.clustering.min_pts = static_cast<std::size_t>(*v);
        if (clustering.contains("seed")) {
            if (clustering["seed"].is_number_integer())
                r.seed = clustering["seed"].get<long>();
            else
                errors.add("clustering.seed", "must be an integer");
        }
    }
    if (!errors.empty())
        return bad_request(errors, j);

    MapperParams params;
    Warnings warnings;
    MapperGraph g;
    try {
        if (auto pc = std::get_if<PointCloud>(&ds->data))
            g = detail::run_mapper(pc, r, params, &warnings);
        else if (auto gr = std::get_if<Graph>(&ds->data))
            g = detail::run_mapper(gr, r, params, &warnings);
        else
            g = detail::run_mapper(&std::get<GrayImage>(ds->data), r, params, &warnings);
    } catch (const ValidationError& e) {
        errors.add("params", e.what());
        return bad_request(errors, j);
    }
    json out = to_json(g, params);
    out["params"]["dataset"] = ds->name;
    out["warnings"] = warnings.messages;
    return reply(200, out);
}

HttpResponse MapperService::diagram(const std::string& body) const
{
    FieldErrors errors;
    const auto req = parse_body(body, errors);
    if (!req)
        return bad_request(errors, json::object());
    const json& j = *req;
    const auto name = get_string(j, "dataset", "dataset", "", errors);
    if (name && name->empty())
        errors.add("dataset", "is required");
    const Dataset* ds = name && !name->empty() ? find(*name) : nullptr;
    if (name && !name->empty() && !ds)
        return reply(404, {{"errors", {{{"field", "dataset"}, {"message", "unknown dataset '" + *name + "'"}}}},
                           {"params", j}});
    const json filt = j.value("filtration", json::object());
    if (!filt.is_object())
        errors.add("filtration", "must be an object");
    if (!errors.empty())
        return bad_request(errors, j);

    const std::string kind = ds->kind();
    const std::string default_type = kind == "pointcloud" ? "rips" : kind == "graph" ? "degree" : "sublevel";
    const auto type = get_string(filt, "type", "filtration.type", default_type, errors);
    const auto max_dim = get_int(filt, "max_dim", "filtration.max_dim", 1, 0, errors);
    json echo = {{"dataset", ds->name}, {"filtration", {{"type", type.value_or("")}, {"max_dim", max_dim.value_or(1)}}}};

    DiagramFile file;
    file.meta.source = ds->name;
    try {
        if (kind == "pointcloud") {
            if (type && *type != "rips" && *type != "cech")
                errors.add("filtration.type", "point clouds support 'rips' or 'cech'");
            if (type && *type == "cech" && max_dim && *max_dim > 1)
                errors.add("filtration.max_dim", "Cech filtrations support homology up to dimension 1");
            const auto& pc = std::get<PointCloud>(ds->data);
            const DistanceMatrix dm = pairwise_distances(pc);
            const double diam = dm.diameter() > 0.0 ? dm.diameter() : 1.0;
            const auto scale = get_number(filt, "max_scale", "filtration.max_scale", diam, errors);
            if (scale && !(*scale > 0.0))
                errors.add("filtration.max_scale", "must be positive");
            if (!errors.empty())
                return bad_request(errors, j);
            echo["filtration"]["max_scale"] = round9(*scale);
            const int md = static_cast<int>(*max_dim);
            const FilteredComplex fc =
                *type == "cech" ? cech_filtration(pc, *scale, md + 1) : rips_filtration(dm, *scale, md + 1);
            file.dims = compute_persistence(fc, md);
            file.meta.filtration = *type;
        } else if (kind == "graph") {
            if (type && *type != "power") {
                try {
                    detail::parse_node_function(*type);
                } catch (const ValidationError& e) {
                    errors.add("filtration.type", std::string(e.what()) + " or 'power'");
                }
            }
            const auto hops = get_int(filt, "max_hops", "filtration.max_hops", 3, 1, errors);
            if (!errors.empty())
                return bad_request(errors, j);
            const Graph& g = std::get<Graph>(ds->data);
            const int md = static_cast<int>(*max_dim);
            if (*type == "power") {
                echo["filtration"]["max_hops"] = *hops;
                file.dims = compute_persistence(power_filtration(g, static_cast<int>(*hops), md + 1), md);
            } else {
                Graph copy = g;
                const auto values = node_filtration_values(g, detail::parse_node_function(*type));
                copy.set_node_values(values);
                std::vector<double> thresholds(values.begin(), values.end());
                std::sort(thresholds.begin(), thresholds.end());
                thresholds.erase(std::unique(thresholds.begin(), thresholds.end()), thresholds.end());
                file.dims = compute_persistence(sublevel_node_filtration(copy, thresholds, std::max(2, md + 1)), md);
                file.meta.thresholds = thresholds;
            }
            file.meta.filtration = *type;
        } else {
            if (type && *type != "sublevel" && *type != "superlevel")
                errors.add("filtration.type", "images support 'sublevel' or 'superlevel'");
            const auto count = get_int(filt, "thresholds", "filtration.thresholds", 64, 2, errors);
            if (!errors.empty())
                return bad_request(errors, j);
            echo["filtration"]["thresholds"] = *count;
            const auto& img = std::get<GrayImage>(ds->data);
            auto thresholds = default_image_thresholds(static_cast<std::size_t>(*count));
            const double top = *std::max_element(img.values().begin(), img.values().end());
            if (top > 255.0)
                thresholds = SampledFunction::uniform_grid(0.0, top, static_cast<std::size_t>(*count));
            if (*type == "superlevel")
                std::reverse(thresholds.begin(), thresholds.end());
            const auto cf = *type == "sublevel" ? sublevel_filtration(img, thresholds)
                                                : superlevel_filtration(img, thresholds);
            file.dims = compute_persistence(cf.complex, static_cast<int>(*max_dim));
            file.meta.thresholds = thresholds;
            if (cf.values_negated)
                for (double& t : file.meta.thresholds)
                    t = -t;
            file.meta.filtration = *type;
        }
    } catch (const ValidationError& e) {
        errors.add("filtration", e.what());
        return bad_request(errors, j);
    }
    json out = to_json(file);
    out["params"] = echo;
    return reply(200, out);
}

HttpResponse MapperService::handle(const std::string& method, const std::string& path, const std::string& body) const
{
    struct Route {
        const char* method;
        const char* path;
    };
    static const Route routes[] = {{"GET", "/datasets"}, {"GET", "/lenses"}, {"POST", "/mapper"}, {"POST", "/diagram"}};
    bool path_known = false;
    for (const auto& r : routes) {
        if (path != r.path)
            continue;
        path_known = true;
        if (method != r.method)
            continue;
        if (path == "/datasets")
            return list_datasets();
        if (path == "/lenses")
            return list_lenses();
        if (path == "/mapper")
            return mapper(body);
        return diagram(body);
    }
    if (path_known)
        return reply(405, {{"error", "method " + method + " not allowed on " + path}});
    return reply(404, {{"error", "no route " + path}});
}

std::size_t worker_threads()
{
    if (const char* env = std::getenv("TDAKIT_THREADS")) {
        char* end = nullptr;
        const long n = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && n >= 1)
            return static_cast<std::size_t>(n);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

void run_server(const MapperService& service, const std::string& host, int port)
{
    httplib::Server server;
    const std::size_t threads = worker_threads();
    server.new_task_queue = [threads] { return new httplib::ThreadPool(threads); };
    auto forward = [&service](const httplib::Request& req, httplib::Response& res) {
        const HttpResponse r = service.handle(req.method, req.path, req.body);
        res.status = r.status;
        res.set_header("Access-Control-Allow-Origin", "*");
        res.set_content(r.body, "application/json");
    };
    for (const char* path : {"/datasets", "/lenses", "/mapper", "/diagram"}) {
        server.Get(path, forward);
        server.Post(path, forward);
    }
    server.Options(R"(/.*)", [](const httplib::Request&, httplib::Response& res) {
        res.set_header("Access-Control-Allow-Origin", "*");
        res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
        res.set_header("Access-Control-Allow-Headers", "Content-Type");
        res.status = 204;
    });
    if (!server.listen(host, port))
        throw std::runtime_error("cannot listen on " + host + ":" + std::to_string(port));
}

}  // namespace tdakit
