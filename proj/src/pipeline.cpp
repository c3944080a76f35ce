#include "tdakit/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <set>
#include <sstream>

#include "jobs.hpp"
#include "tdakit/distance.hpp"
#include "tdakit/io.hpp"
#include "tdakit/multipers.hpp"
#include "tdakit/service.hpp"

namespace tdakit {

namespace fs = std::filesystem;

const std::vector<CommandSpec>& command_specs()
{
    static const std::vector<CommandSpec> specs = {
        {"rips",
         "Vietoris-Rips persistence of a CSV point cloud",
         {{"input", "point cloud CSV"},
          {"out", "diagram JSON to write"},
          {"max-scale", "largest scale (default: diameter)"},
          {"max-dim", "highest homology dimension (default 1)"},
          {"metric", "euclidean | manhattan | chebyshev"}}},
        {"cech",
         "Cech persistence of a CSV point cloud (homology up to dimension 1)",
         {{"input", "point cloud CSV"},
          {"out", "diagram JSON to write"},
          {"max-scale", "largest scale (default: diameter)"},
          {"max-dim", "highest homology dimension, 0 or 1 (default 1)"}}},
        {"cubical",
         "Sublevel or superlevel persistence of a PGM image",
         {{"input", "PGM image"},
          {"out", "diagram JSON to write"},
          {"mode", "sublevel | superlevel"},
          {"thresholds", "threshold count, or 'raw' for the distinct pixel values"},
          {"transform", "none | erosion | dilation | signed (binary images)"},
          {"metric", "chessboard | taxicab for transforms"},
          {"max-dim", "highest homology dimension (default 1)"}}},
        {"graph-filt",
         "Clique-complex persistence of a graph under a node or edge function",
         {{"input", "edge list"},
          {"out", "diagram JSON to write"},
          {"node-values", "CSV sidecar id,value"},
          {"function", "degree | eccentricity | closeness | external | edge-weight"},
          {"mode", "sublevel | superlevel"},
          {"thresholds", "threshold count, or 'raw' for the distinct values"},
          {"clique-dim", "largest clique simplex dimension (default 2)"},
          {"max-dim", "highest homology dimension (default 1)"},
          {"reduce", "none | coral | prunit"},
          {"coral-k", "lowest dimension kept by the core reduction (default 1)"}}},
        {"power",
         "Persistence of the graph hop (or weighted path) metric",
         {{"input", "edge list"},
          {"out", "diagram JSON to write"},
          {"max-hops", "largest hop distance (default 3)"},
          {"weighted", "use shortest paths with edge length 1/weight", true},
          {"max-distance", "largest weighted distance (weighted mode)"},
          {"max-dim", "highest homology dimension (default 1)"}}},
        {"diagram-dist",
         "Wasserstein or bottleneck distance between two diagram files",
         {{"a", "first diagram JSON"},
          {"b", "second diagram JSON"},
          {"p", "order >= 1, or 'inf' for bottleneck (default 2)"},
          {"dim", "only this homology dimension"},
          {"kernel", "none | pwgk"},
          {"sigma", "pwgk bandwidth (default 1)"},
          {"weight-power", "pwgk lifespan exponent (default 1)"}}},
        {"vectorize",
         "Turn a diagram file into a feature vector",
         {{"pd", "diagram JSON"},
          {"out", "CSV to write (default: stdout)"},
          {"method", "betti | landscape | silhouette | curve | image"},
          {"dims", "comma-separated homology dimensions (default: all)"},
          {"samples", "grid samples per dimension (default 100)"},
          {"t-min", "grid start"},
          {"t-max", "grid end"},
          {"p", "silhouette exponent (default 1)"},
          {"level", "landscape level (default 1)"},
          {"psi", "curve generator: constant | lifespan | entropy"},
          {"stat", "curve statistic: sum | mean | max"},
          {"resolution", "image resolution K or KxL (default 20)"},
          {"sigma", "image Gaussian width (default 0.1)"},
          {"weight-power", "image lifespan exponent (default 1)"},
          {"format", "csv | json"}}},
        {"multipers",
         "Bigraded Betti numbers or sliced vectors of a bifiltration",
         {{"kind", "graph | graph-edge | image | density-rips"},
          {"input", "edge list, PGM image or point cloud CSV"},
          {"input2", "second image channel"},
          {"input3", "third image channel"},
          {"node-values", "CSV sidecar id,value"},
          {"out", "JSON to write (default: stdout)"},
          {"row-function", "row node function (default degree)"},
          {"col-function", "column node function (default eccentricity)"},
          {"rows", "row thresholds: count or comma list"},
          {"cols", "column thresholds: count or comma list"},
          {"layers", "third-channel thresholds: count or comma list"},
          {"third-index", "fixed third-channel threshold index"},
          {"density-radius", "radius for point density (default 1)"},
          {"clique-dim", "largest cell dimension (default 2)"},
          {"dim", "homology dimension (default 0)"},
          {"output", "betti | slices"},
          {"vectorizer", "betti | silhouette | landscape"},
          {"p", "silhouette exponent (default 1)"},
          {"level", "landscape level (default 1)"},
          {"vertical", "slice columns instead of rows", true},
          {"format", "json | csv"}}},
        {"mapper",
         "Mapper graph of a point cloud, graph or image",
         {{"input", "point cloud CSV, edge list or PGM image"},
          {"kind", "pointcloud | graph | image (default: from extension)"},
          {"node-values", "CSV sidecar id,value"},
          {"out", "JSON to write (default: stdout)"},
          {"lens", "lens (x, y, coordinate:<axis>, eccentricity, density:<r>, pca:<c>; node functions for graphs)"},
          {"lens2", "second lens for a product cover"},
          {"resolution", "number of intervals (default 4)"},
          {"resolution2", "intervals of the second cover (default 4)"},
          {"overlap", "overlap fraction in [0, 1) (default 0.25)"},
          {"overlap2", "overlap of the second cover (default 0.25)"},
          {"cluster", "single_linkage | kmeans | dbscan"},
          {"eps", "linkage / dbscan radius (default 0.5)"},
          {"k", "kmeans cluster count (default 2)"},
          {"min-pts", "dbscan core size (default 3)"},
          {"seed", "seed echoed in the output (clustering is deterministic)"}}},
        {"serve",
         "HTTP JSON API for interactive Mapper exploration",
         {{"datasets", "directory of datasets"},
          {"port", "port (default 8080)"},
          {"host", "bind address (default 127.0.0.1)"}}},
    };
    return specs;
}

namespace {

class Options {
public:
    Options(const RunConfig& cfg, const CommandSpec& spec) : values_(cfg.options)
    {
        for (const auto& o : spec.options) {
            known_.insert(o.key);
            if (o.flag)
                flags_.insert(o.key);
        }
        for (const auto& [k, v] : values_)
            if (!known_.count(k))
                throw ValidationError("unknown option --" + k + " for '" + spec.name + "'");
    }

    bool has(const std::string& key) const { return values_.count(key) > 0; }

    bool flag(const std::string& key) const
    {
        auto it = values_.find(key);
        if (it == values_.end())
            return false;
        if (it->second == "" || it->second == "true" || it->second == "1")
            return true;
        if (it->second == "false" || it->second == "0")
            return false;
        throw ValidationError("--" + key + ": expected true or false");
    }

    std::string str(const std::string& key, const std::string& fallback) const
    {
        auto it = values_.find(key);
        return it == values_.end() ? fallback : it->second;
    }

    std::string required(const std::string& key) const
    {
        auto it = values_.find(key);
        if (it == values_.end() || it->second.empty())
            throw ValidationError("missing required option --" + key);
        return it->second;
    }

    std::string choice(const std::string& key, const std::string& fallback,
                       std::initializer_list<const char*> allowed) const
    {
        const std::string v = str(key, fallback);
        for (const char* a : allowed)
            if (v == a)
                return v;
        std::string list;
        for (const char* a : allowed)
            list += (list.empty() ? "" : ", ") + std::string(a);
        throw ValidationError("--" + key + ": '" + v + "' is not one of " + list);
    }

    static double parse_double(const std::string& key, const std::string& text)
    {
        if (text == "inf")
            return kInfinity;
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(text, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != text.size() || std::isnan(v))
            throw ValidationError("--" + key + ": '" + text + "' is not a number");
        return v;
    }

    double num(const std::string& key, double fallback) const
    {
        return has(key) ? parse_double(key, values_.at(key)) : fallback;
    }

    std::optional<double> opt_num(const std::string& key) const
    {
        if (!has(key))
            return std::nullopt;
        return parse_double(key, values_.at(key));
    }

    long integer(const std::string& key, long fallback, long min_value) const
    {
        if (!has(key))
            return fallback;
        const std::string& text = values_.at(key);
        std::size_t used = 0;
        long v = 0;
        try {
            v = std::stol(text, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != text.size())
            throw ValidationError("--" + key + ": '" + text + "' is not an integer");
        if (v < min_value)
            throw ValidationError("--" + key + ": must be at least " + std::to_string(min_value));
        return v;
    }

    std::vector<double> list(const std::string& key) const
    {
        std::vector<double> out;
        std::stringstream ss(required(key));
        for (std::string item; std::getline(ss, item, ',');)
            out.push_back(parse_double(key, item));
        return out;
    }

private:
    std::map<std::string, std::string> values_;
    std::set<std::string> known_;
    std::set<std::string> flags_;
};

// Errors already attributed to a stage pass through unchanged.
struct StagedValidation : ValidationError {
    using ValidationError::ValidationError;
};
struct StagedRuntime : std::runtime_error {
    using std::runtime_error::runtime_error;
};

template <typename F>
auto stage(const std::string& name, F&& f) -> decltype(f())
{
    try {
        return f();
    } catch (const StagedValidation&) {
        throw;
    } catch (const StagedRuntime&) {
        throw;
    } catch (const ValidationError& e) {
        throw StagedValidation(name + ": " + e.what());
    } catch (const std::exception& e) {
        throw StagedRuntime(name + ": " + e.what());
    }
}

void report(const Warnings& w, std::ostream& err)
{
    for (const auto& m : w.messages)
        err << "warning: " << m << '\n';
}

Metric parse_metric(const std::string& s)
{
    if (s == "euclidean")
        return Metric::Euclidean;
    if (s == "manhattan")
        return Metric::Manhattan;
    return Metric::Chebyshev;
}

// Thresholds spec: "raw" (distinct values), a count, or a comma list.
struct ThresholdSpec {
    enum Kind { Raw, Count, List } kind = Raw;
    std::size_t count = 0;
    std::vector<double> list;
};

ThresholdSpec threshold_spec(const Options& o, const std::string& key, const std::string& fallback)
{
    const std::string text = o.str(key, fallback);
    ThresholdSpec spec;
    if (text == "raw")
        return spec;
    if (text.find(',') != std::string::npos) {
        spec.kind = ThresholdSpec::List;
        spec.list = o.list(key);
        return spec;
    }
    spec.kind = ThresholdSpec::Count;
    const double c = Options::parse_double(key, text);
    if (c < 1 || c != std::floor(c))
        throw ValidationError("--" + key + ": expected 'raw', a positive count or a comma-separated list");
    spec.count = static_cast<std::size_t>(c);
    return spec;
}

// Increasing thresholds covering [lo, hi].
std::vector<double> realize(const ThresholdSpec& spec, std::span<const double> values, double lo, double hi)
{
    switch (spec.kind) {
    case ThresholdSpec::Raw: {
        std::vector<double> v(values.begin(), values.end());
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
        return v;
    }
    case ThresholdSpec::Count:
        if (spec.count == 1 || !(hi > lo))
            return {hi};
        return SampledFunction::uniform_grid(lo, hi, spec.count);
    case ThresholdSpec::List:
        return spec.list;
    }
    return {};
}

std::string describe(const std::string& name, const std::vector<std::pair<std::string, std::string>>& params)
{
    std::string out = name + "(";
    for (std::size_t i = 0; i < params.size(); ++i)
        out += (i ? "," : "") + params[i].first + "=" + params[i].second;
    return out + ")";
}

void emit(const std::string& text, const Options& o, std::ostream& out)
{
    if (o.has("out"))
        stage("write", [&] { write_text_file(o.required("out"), text); });
    else
        out << text;
}

// --- subcommands -----------------------------------------------------------

int cmd_rips(const Options& o, std::ostream&, std::ostream& err, bool cech)
{
    const std::string input = o.required("input");
    const std::string out_path = o.required("out");
    const int max_dim = static_cast<int>(o.integer("max-dim", 1, 0));
    if (cech && max_dim > 1)
        throw ValidationError("--max-dim: Cech filtrations support homology up to dimension 1");
    const auto scale_opt = o.opt_num("max-scale");
    if (scale_opt && !(*scale_opt > 0.0))
        throw ValidationError("--max-scale: must be positive");
    const std::string metric_name =
        cech ? "euclidean" : o.choice("metric", "euclidean", {"euclidean", "manhattan", "chebyshev"});

    const PointCloud pc = stage("load", [&] { return load_pointcloud(input); });
    Warnings w;
    const FilteredComplex fc = stage("filtration", [&] {
        const DistanceMatrix dm = pairwise_distances(pc, parse_metric(metric_name));
        double scale = scale_opt ? *scale_opt : dm.diameter();
        if (!(scale > 0.0))
            scale = 1.0;
        return cech ? cech_filtration(pc, scale, max_dim + 1) : rips_filtration(dm, scale, max_dim + 1, &w);
    });
    report(w, err);
    DiagramFile file;
    file.dims = stage("persistence", [&] { return compute_persistence(fc, max_dim); });
    file.meta.source = fs::path(input).filename().string();
    std::vector<std::pair<std::string, std::string>> params{{"max_dim", std::to_string(max_dim)}};
    if (scale_opt)
        params.emplace_back("max_scale", format_number(*scale_opt));
    if (!cech)
        params.emplace_back("metric", metric_name);
    file.meta.filtration = describe(cech ? "cech" : "rips", params);
    stage("write", [&] { save_diagram_file(out_path, file); });
    return kExitOk;
}

int cmd_cubical(const Options& o, std::ostream&, std::ostream&)
{
    const std::string input = o.required("input");
    const std::string out_path = o.required("out");
    const std::string mode = o.choice("mode", "sublevel", {"sublevel", "superlevel"});
    const std::string transform = o.choice("transform", "none", {"none", "erosion", "dilation", "signed"});
    const std::string metric = o.choice("metric", "chessboard", {"chessboard", "taxicab"});
    const ThresholdSpec tspec = threshold_spec(o, "thresholds", transform == "none" ? "64" : "raw");
    const int max_dim = static_cast<int>(o.integer("max-dim", 1, 0));

    GrayImage img = stage("load", [&] { return load_pgm(input); });
    DiagramFile file;
    stage("filtration", [&] {
        if (transform != "none") {
            std::vector<double> binary;
            for (double v : img.values())
                binary.push_back(v != 0.0 ? 1.0 : 0.0);
            const GrayImage b(img.rows(), img.cols(), std::move(binary));
            const GridMetric gm = metric == "taxicab" ? GridMetric::Taxicab : GridMetric::Chessboard;
            img = transform == "erosion"    ? erosion_values(b, gm)
                  : transform == "dilation" ? dilation_values(b, gm)
                                            : signed_distance_values(b, gm);
        }
        const auto [mn, mx] = std::minmax_element(img.values().begin(), img.values().end());
        const double lo = transform == "none" ? std::min(0.0, *mn) : *mn;
        const double hi = transform == "none" ? std::max(255.0, *mx) : *mx;
        auto thresholds = realize(tspec, img.values(), lo, hi);
        if (mode == "superlevel") {
            if (tspec.kind == ThresholdSpec::Count && thresholds.size() == 1)
                thresholds = {lo};
            std::reverse(thresholds.begin(), thresholds.end());
        }
        const CubicalFiltration cf =
            mode == "sublevel" ? sublevel_filtration(img, thresholds) : superlevel_filtration(img, thresholds);
        // superlevel diagrams stay on the negated scale so that birth < death
        file.dims = stage("persistence", [&] { return compute_persistence(cf.complex, max_dim); });
        file.meta.thresholds = thresholds;
        if (mode == "superlevel")
            for (double& t : file.meta.thresholds)
                t = -t;
    });
    file.meta.source = fs::path(input).filename().string();
    file.meta.filtration = describe("cubical", {{"mode", mode}, {"transform", transform}, {"max_dim", std::to_string(max_dim)}});
    stage("write", [&] { save_diagram_file(out_path, file); });
    return kExitOk;
}

int cmd_graph_filt(const Options& o, std::ostream&, std::ostream& err)
{
    const std::string input = o.required("input");
    const std::string out_path = o.required("out");
    const std::string function =
        o.choice("function", "degree", {"degree", "eccentricity", "closeness", "external", "edge-weight"});
    const std::string mode = o.choice("mode", "sublevel", {"sublevel", "superlevel"});
    const ThresholdSpec tspec = threshold_spec(o, "thresholds", "raw");
    const int clique_dim = static_cast<int>(o.integer("clique-dim", 2, 1));
    const int max_dim = static_cast<int>(o.integer("max-dim", 1, 0));
    const std::string reduce = o.choice("reduce", "none", {"none", "coral", "prunit"});
    const int coral_k = static_cast<int>(o.integer("coral-k", 1, 1));
    if (max_dim + 1 > clique_dim)
        throw ValidationError("--max-dim " + std::to_string(max_dim) + " needs --clique-dim of at least " +
                              std::to_string(max_dim + 1));
    if (function == "external" && !o.has("node-values"))
        throw ValidationError("--function external needs --node-values");
    if (function == "edge-weight" && (mode != "sublevel" || reduce != "none"))
        throw ValidationError("--function edge-weight supports only sublevel mode without reduction");
    if (reduce == "coral" && coral_k > max_dim)
        throw ValidationError("--coral-k must not exceed --max-dim");

    Warnings w;
    std::optional<fs::path> sidecar;
    if (o.has("node-values"))
        sidecar = o.required("node-values");
    const LoadedGraph loaded = stage("load", [&] { return load_graph(input, sidecar, &w); });
    report(w, err);

    DiagramFile file;
    stage("filtration", [&] {
        Graph g = loaded.graph;
        if (function == "edge-weight") {
            const auto weights = g.edge_weights();
            if (weights.empty())
                throw ValidationError("graph has no edges");
            const auto [mn, mx] = std::minmax_element(weights.begin(), weights.end());
            const auto thresholds = realize(tspec, weights, *mn, *mx);
            file.dims = compute_persistence(sublevel_edge_filtration(g, thresholds, clique_dim), max_dim);
            file.meta.thresholds = thresholds;
            return;
        }
        const auto values = node_filtration_values(g, detail::parse_node_function(function));
        const auto [mn, mx] = std::minmax_element(values.begin(), values.end());
        auto thresholds = realize(tspec, values, *mn, *mx);
        if (mode == "superlevel") {
            if (tspec.kind == ThresholdSpec::Count && thresholds.size() == 1)
                thresholds = {*mn};
            std::reverse(thresholds.begin(), thresholds.end());
        }
        g.set_node_values(values);
        int lowest = 0;
        if (reduce == "coral") {
            g = coral_reduce(g, coral_k).graph;
            lowest = coral_k;
        } else if (reduce == "prunit") {
            std::vector<double> key = values;
            if (mode == "superlevel")
                for (double& x : key)
                    x = -x;
            g = prune_dominated(g, order_by_value(key)).graph;
        }
        const FilteredComplex fc = mode == "sublevel" ? sublevel_node_filtration(g, thresholds, clique_dim)
                                                      : superlevel_node_filtration(g, thresholds, clique_dim);
        auto pds = compute_persistence(fc, max_dim);
        file.dims.assign(pds.begin() + lowest, pds.end());
        file.meta.thresholds = thresholds;
        if (mode == "superlevel")
            for (double& t : file.meta.thresholds)
                t = -t;
    });
    file.meta.source = fs::path(input).filename().string();
    file.meta.filtration = describe("graph", {{"function", function},
                                              {"mode", mode},
                                              {"clique_dim", std::to_string(clique_dim)},
                                              {"reduce", reduce}});
    stage("write", [&] { save_diagram_file(out_path, file); });
    return kExitOk;
}

int cmd_power(const Options& o, std::ostream&, std::ostream& err)
{
    const std::string input = o.required("input");
    const std::string out_path = o.required("out");
    const bool weighted = o.flag("weighted");
    const int max_hops = static_cast<int>(o.integer("max-hops", 3, 1));
    const auto max_distance = o.opt_num("max-distance");
    const int max_dim = static_cast<int>(o.integer("max-dim", 1, 0));
    if (weighted && !max_distance)
        throw ValidationError("--weighted needs --max-distance");
    if (max_distance && !(*max_distance > 0.0))
        throw ValidationError("--max-distance: must be positive");

    Warnings w;
    const LoadedGraph loaded = stage("load", [&] { return load_graph(input, std::nullopt, &w); });
    report(w, err);
    DiagramFile file;
    const FilteredComplex fc = stage("filtration", [&] {
        return weighted ? weighted_power_filtration(loaded.graph, *max_distance, max_dim + 1)
                        : power_filtration(loaded.graph, max_hops, max_dim + 1);
    });
    file.dims = stage("persistence", [&] { return compute_persistence(fc, max_dim); });
    file.meta.source = fs::path(input).filename().string();
    file.meta.filtration = weighted ? describe("weighted_power", {{"max_distance", format_number(*max_distance)}})
                                    : describe("power", {{"max_hops", std::to_string(max_hops)}});
    stage("write", [&] { save_diagram_file(out_path, file); });
    return kExitOk;
}

int cmd_diagram_dist(const Options& o, std::ostream& out, std::ostream&)
{
    const std::string a_path = o.required("a"), b_path = o.required("b");
    const std::string kernel = o.choice("kernel", "none", {"none", "pwgk"});
    const double p = o.num("p", 2.0);
    if (!(p >= 1.0))
        throw ValidationError("--p: must be >= 1 or inf");
    const double sigma = o.num("sigma", 1.0);
    if (!(sigma > 0.0))
        throw ValidationError("--sigma: must be positive");
    const double weight_power = o.num("weight-power", 1.0);
    std::optional<int> only;
    if (o.has("dim"))
        only = static_cast<int>(o.integer("dim", 0, 0));

    const DiagramFile a = stage("load", [&] { return load_diagram_file(a_path); });
    const DiagramFile b = stage("load", [&] { return load_diagram_file(b_path); });
    std::set<int> dims;
    for (const auto* f : {&a, &b})
        for (const auto& pd : f->dims)
            dims.insert(pd.dim);
    if (only)
        dims = {*only};
    std::vector<std::pair<int, double>> results;
    stage("distance", [&] {
        for (int d : dims) {
            const PersistenceDiagram empty{d, {}};
            const auto* pa = a.find(d);
            const auto* pb = b.find(d);
            const PersistenceDiagram& x = pa ? *pa : empty;
            const PersistenceDiagram& y = pb ? *pb : empty;
            results.emplace_back(d, kernel == "pwgk" ? pwgk(x, y, sigma, weight_power) : wasserstein_distance(x, y, p));
        }
    });
    if (results.size() == 1) {
        out << format_number(results[0].second) << '\n';
    } else {
        for (auto [d, v] : results)
            out << d << '\t' << format_number(v) << '\n';
    }
    return kExitOk;
}

int cmd_vectorize(const Options& o, std::ostream& out, std::ostream& err)
{
    const std::string pd_path = o.required("pd");
    const std::string method = o.choice("method", "betti", {"betti", "landscape", "silhouette", "curve", "image"});
    const std::string format = o.choice("format", "csv", {"csv", "json"});
    const std::size_t samples = static_cast<std::size_t>(o.integer("samples", 100, 2));
    const auto t_min = o.opt_num("t-min"), t_max = o.opt_num("t-max");
    if (t_min.has_value() != t_max.has_value())
        throw ValidationError("--t-min and --t-max must be given together");
    if (t_min && !(*t_max > *t_min))
        throw ValidationError("--t-max must exceed --t-min");
    const double p = o.num("p", 1.0);
    if (method == "silhouette" && !(p > 0.0))
        throw ValidationError("--p: silhouette exponent must be positive");
    const int level = static_cast<int>(o.integer("level", 1, 1));
    const auto psi = parse_curve_generator(o.str("psi", "constant"));
    const auto stat = parse_curve_statistic(o.str("stat", "sum"));
    std::size_t k = 20, l = 20;
    if (o.has("resolution")) {
        const std::string r = o.str("resolution", "20");
        const auto x = r.find('x');
        auto parse = [&](const std::string& s) {
            const double v = Options::parse_double("resolution", s);
            if (v < 1 || v != std::floor(v))
                throw ValidationError("--resolution: expected K or KxL with positive integers");
            return static_cast<std::size_t>(v);
        };
        k = parse(r.substr(0, x));
        l = x == std::string::npos ? k : parse(r.substr(x + 1));
    }
    const double sigma = o.num("sigma", 0.1);
    if (!(sigma > 0.0))
        throw ValidationError("--sigma: must be positive");
    const double weight_power = o.num("weight-power", 1.0);
    std::optional<std::vector<double>> dims_opt;
    if (o.has("dims"))
        dims_opt = o.list("dims");

    const DiagramFile file = stage("load", [&] { return load_diagram_file(pd_path); });
    Warnings w;
    const TopologicalVector vec = stage("vectorize", [&] {
        std::vector<PersistenceDiagram> selected;
        if (dims_opt) {
            for (double d : *dims_opt) {
                const auto* pd = file.find(static_cast<int>(d));
                selected.push_back(pd ? *pd : PersistenceDiagram{static_cast<int>(d), {}});
            }
        } else {
            selected = file.dims;
        }
        if (selected.empty())
            throw ValidationError("diagram file holds no dimensions");
        const auto grid = t_min ? SampledFunction::uniform_grid(*t_min, *t_max, samples) : default_grid(selected, samples);
        std::vector<TopologicalVector> parts;
        for (const auto& pd : selected) {
            if (method == "betti") {
                parts.push_back(to_vector(betti_curve(pd, grid), "betti", "", pd.dim));
            } else if (method == "landscape") {
                parts.push_back(to_vector(landscape(pd, level, grid, &w), "landscape",
                                          "level=" + std::to_string(level), pd.dim));
            } else if (method == "silhouette") {
                parts.push_back(to_vector(silhouette(pd, p, grid, &w), "silhouette", "p=" + format_number(p), pd.dim));
            } else if (method == "curve") {
                parts.push_back(to_vector(persistence_curve(pd, psi, stat, grid), "curve",
                                          "psi=" + o.str("psi", "constant") + ",stat=" + o.str("stat", "sum"), pd.dim));
            } else {
                PersistenceImageParams ip;
                ip.birth_bins = k;
                ip.pers_bins = l;
                ip.sigma = sigma;
                ip.weight_power = weight_power;
                ip.t_max = grid.back();
                ip.bounds = default_image_bounds(selected, sigma, grid.back());
                parts.push_back(to_vector(persistence_image(pd, ip, &w),
                                          "sigma=" + format_number(sigma) + ",resolution=" + std::to_string(k) + "x" +
                                              std::to_string(l),
                                          pd.dim));
            }
        }
        return concat_dimensions(parts);
    });
    report(w, err);
    emit(format == "csv" ? to_csv({vec}) : dump_json(to_json(vec)), o, out);
    return kExitOk;
}

int cmd_multipers(const Options& o, std::ostream& out, std::ostream& err)
{
    const std::string kind = o.choice("kind", "graph", {"graph", "graph-edge", "image", "density-rips"});
    const std::string input = o.required("input");
    const int dim = static_cast<int>(o.integer("dim", 0, 0));
    const std::string output = o.choice("output", "betti", {"betti", "slices"});
    const std::string format = o.choice("format", "json", {"json", "csv"});
    SliceOptions slice;
    const std::string vectorizer = o.choice("vectorizer", "betti", {"betti", "silhouette", "landscape"});
    slice.vectorizer = vectorizer == "betti"        ? SliceVectorizer::Betti
                       : vectorizer == "silhouette" ? SliceVectorizer::Silhouette
                                                    : SliceVectorizer::Landscape;
    slice.silhouette_power = o.num("p", 1.0);
    slice.landscape_level = static_cast<int>(o.integer("level", 1, 1));
    slice.vertical = o.flag("vertical");
    if (format == "csv" && output != "betti")
        throw ValidationError("--format csv is only available for --output betti");
    const int clique_dim = static_cast<int>(o.integer("clique-dim", 2, 1));
    const bool image = kind == "image";
    const ThresholdSpec rows = threshold_spec(o, "rows", image ? "16" : "4");
    const ThresholdSpec cols = threshold_spec(o, "cols", image ? "16" : "4");
    const std::string f_name = o.str("row-function", "degree"), h_name = o.str("col-function", "eccentricity");
    if (!image && kind != "density-rips") {
        detail::parse_node_function(f_name);
        if (kind == "graph")
            detail::parse_node_function(h_name);
    }
    if (kind == "density-rips" && !o.has("rows"))
        throw ValidationError("--rows: density-rips needs density thresholds (decreasing comma list)");
    const double radius = o.num("density-radius", 1.0);
    std::optional<std::size_t> third;
    if (o.has("third-index"))
        third = static_cast<std::size_t>(o.integer("third-index", 0, 0));
    if (!image && (o.has("input2") || o.has("input3")))
        throw ValidationError("--input2/--input3 apply to image bifiltrations only");
    if (image && !o.has("input2"))
        throw ValidationError("--input2: image bifiltrations need a second channel");

    Warnings w;
    const Bifiltration bf = stage("load", [&]() -> Bifiltration {
        if (image) {
            std::vector<GrayImage> ch{load_pgm(input), load_pgm(o.required("input2"))};
            if (o.has("input3"))
                ch.push_back(load_pgm(o.required("input3")));
            return stage("filtration", [&] {
                std::vector<std::vector<double>> thresholds;
                for (std::size_t c = 0; c < ch.size(); ++c) {
                    const auto& spec = c == 0 ? rows : c == 1 ? cols : threshold_spec(o, "layers", "16");
                    const double hi = std::max(255.0, *std::max_element(ch[c].values().begin(), ch[c].values().end()));
                    thresholds.push_back(realize(spec, ch[c].values(), 0.0, hi));
                }
                return image_multichannel_bifiltration(ch, thresholds, third);
            });
        }
        if (kind == "density-rips") {
            const PointCloud pc = load_pointcloud(input);
            return stage("filtration", [&] {
                const auto dm = pairwise_distances(pc);
                const double diam = dm.diameter() > 0.0 ? dm.diameter() : 1.0;
                const auto scales = realize(cols.kind == ThresholdSpec::Raw ? ThresholdSpec{ThresholdSpec::Count, 10, {}} : cols,
                                            {}, 0.0, diam);
                return density_rips_bifiltration(pc, radius, rows.list, scales, clique_dim);
            });
        }
        std::optional<fs::path> sidecar;
        if (o.has("node-values"))
            sidecar = o.required("node-values");
        const LoadedGraph g = load_graph(input, sidecar, &w);
        return stage("filtration", [&] {
            const auto f = node_filtration_values(g.graph, detail::parse_node_function(f_name));
            const auto [fmin, fmax] = std::minmax_element(f.begin(), f.end());
            const auto alphas = realize(rows, f, *fmin, *fmax);
            if (kind == "graph-edge") {
                const auto wts = g.graph.edge_weights();
                if (wts.empty())
                    throw ValidationError("graph has no edges");
                const auto [wmin, wmax] = std::minmax_element(wts.begin(), wts.end());
                return graph_edge_bifiltration(g.graph, f, alphas, realize(cols, wts, *wmin, *wmax), clique_dim);
            }
            const auto h = node_filtration_values(g.graph, detail::parse_node_function(h_name));
            const auto [hmin, hmax] = std::minmax_element(h.begin(), h.end());
            return graph_bifiltration(g.graph, f, h, alphas, realize(cols, h, *hmin, *hmax), clique_dim);
        });
    });
    report(w, err);

    std::string text;
    stage("multipersistence", [&] {
        if (output == "betti") {
            const auto t = bigraded_betti(bf, dim);
            text = format == "csv" ? to_csv(t) : dump_json(to_json(t, bf.row_values(), bf.col_values()));
        } else {
            Warnings sw;
            auto j = to_json(slice_vectorize(bf, dim, slice, &sw));
            j["dim"] = dim;
            j["vectorizer"] = vectorizer;
            j["vertical"] = slice.vertical;
            text = dump_json(j);
            report(sw, err);
        }
    });
    emit(text, o, out);
    return kExitOk;
}

int cmd_mapper(const Options& o, std::ostream& out, std::ostream& err)
{
    const std::string input = o.required("input");
    std::string kind = o.str("kind", "");
    if (kind.empty()) {
        const std::string ext = fs::path(input).extension().string();
        kind = ext == ".csv" ? "pointcloud" : ext == ".pgm" ? "image" : "graph";
    }
    if (kind != "pointcloud" && kind != "graph" && kind != "image")
        throw ValidationError("--kind: '" + kind + "' is not one of pointcloud, graph, image");
    detail::MapperRequest req;
    req.lens = o.str("lens", kind == "pointcloud" ? "x" : kind == "graph" ? "degree" : "intensity");
    if (o.has("lens2"))
        req.lens2 = o.required("lens2");
    req.resolution = static_cast<int>(o.integer("resolution", 4, 1));
    req.resolution2 = static_cast<int>(o.integer("resolution2", 4, 1));
    req.overlap = o.num("overlap", 0.25);
    req.overlap2 = o.num("overlap2", 0.25);
    for (auto [name, g] : {std::pair{"overlap", req.overlap}, std::pair{"overlap2", req.overlap2}})
        if (!(g >= 0.0 && g < 1.0))
            throw ValidationError(std::string("--") + name + ": must lie in [0, 1)");
    req.clustering.method = parse_cluster_method(o.str("cluster", "single_linkage"));
    req.clustering.eps = o.num("eps", 0.5);
    if (!(req.clustering.eps >= 0.0))
        throw ValidationError("--eps: must be non-negative");
    req.clustering.k = static_cast<std::size_t>(o.integer("k", 2, 1));
    req.clustering.min_pts = static_cast<std::size_t>(o.integer("min-pts", 3, 1));
    if (o.has("seed"))
        req.seed = o.integer("seed", 0, std::numeric_limits<long>::min());
    if (kind == "pointcloud")
        LensSpec::parse(req.lens);
    else if (kind == "graph")
        detail::parse_node_function(req.lens);

    Warnings w;
    MapperParams params;
    MapperGraph graph;
    if (kind == "pointcloud") {
        const PointCloud pc = stage("load", [&] { return load_pointcloud(input); });
        graph = stage("mapper", [&] { return detail::run_mapper(&pc, req, params, &w); });
    } else if (kind == "graph") {
        std::optional<fs::path> sidecar;
        if (o.has("node-values"))
            sidecar = o.required("node-values");
        const LoadedGraph g = stage("load", [&] { return load_graph(input, sidecar, &w); });
        graph = stage("mapper", [&] { return detail::run_mapper(&g.graph, req, params, &w); });
    } else {
        const GrayImage img = stage("load", [&] { return load_pgm(input); });
        graph = stage("mapper", [&] { return detail::run_mapper(&img, req, params, &w); });
    }
    report(w, err);
    emit(dump_json(to_json(graph, params)), o, out);
    return kExitOk;
}

int cmd_serve(const Options& o, std::ostream& out, std::ostream&)
{
    const std::string dir = o.required("datasets");
    const int port = static_cast<int>(o.integer("port", 8080, 1));
    if (port > 65535)
        throw ValidationError("--port: must be at most 65535");
    const std::string host = o.str("host", "127.0.0.1");
    const MapperService service = stage("load", [&] { return MapperService(dir); });
    out << "serving " << service.datasets().size() << " datasets on http://" << host << ":" << port << std::endl;
    stage("serve", [&] { run_server(service, host, port); });
    return kExitOk;
}

}  // namespace

int run_pipeline(const RunConfig& cfg, std::ostream& out, std::ostream& err)
{
    const auto& specs = command_specs();
    auto spec = std::find_if(specs.begin(), specs.end(), [&](const CommandSpec& s) { return s.name == cfg.command; });
    if (spec == specs.end()) {
        err << "tdakit: unknown command '" << cfg.command << "'\n";
        return kExitValidation;
    }
    try {
        const Options o = stage("config", [&] { return Options(cfg, *spec); });
        const std::string& c = cfg.command;
        if (c == "rips" || c == "cech")
            return cmd_rips(o, out, err, c == "cech");
        if (c == "cubical")
            return cmd_cubical(o, out, err);
        if (c == "graph-filt")
            return cmd_graph_filt(o, out, err);
        if (c == "power")
            return cmd_power(o, out, err);
        if (c == "diagram-dist")
            return cmd_diagram_dist(o, out, err);
        if (c == "vectorize")
            return cmd_vectorize(o, out, err);
        if (c == "multipers")
            return cmd_multipers(o, out, err);
        if (c == "mapper")
            return cmd_mapper(o, out, err);
        return cmd_serve(o, out, err);
    } catch (const StagedValidation& e) {
        err << "tdakit " << cfg.command << ": " << e.what() << '\n';
        return kExitValidation;
    } catch (const ValidationError& e) {
        err << "tdakit " << cfg.command << ": config: " << e.what() << '\n';
        return kExitValidation;
    } catch (const std::exception& e) {
        err << "tdakit " << cfg.command << ": " << e.what() << '\n';
        return kExitRuntime;
    }
}

}  // namespace tdakit
