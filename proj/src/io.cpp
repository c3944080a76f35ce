#include "tdakit/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

namespace tdakit {

using nlohmann::json;

std::string format_number(double x)
{
    if (std::isinf(x))
        return x > 0 ? "inf" : "-inf";
    if (std::isnan(x))
        return "nan";
    if (x == 0.0)
        return "0";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9g", x);
    return buf;
}

double round9(double x)
{
    if (!std::isfinite(x))
        return x;
    return std::strtod(format_number(x).c_str(), nullptr);
}

std::string read_text_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ValidationError("cannot open '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot write '" + path.string() + "'");
    out << text;
    if (!out)
        throw std::runtime_error("failed writing '" + path.string() + "'");
}

namespace {

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos)
        return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_fields(const std::string& line, char sep)
{
    std::vector<std::string> out;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, sep))
        out.push_back(trim(field));
    if (!line.empty() && line.back() == sep)
        out.emplace_back();
    return out;
}

std::optional<double> to_double(const std::string& s)
{
    if (s.empty())
        return std::nullopt;
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size())
        return std::nullopt;
    return v;
}

std::vector<std::string> lines_of(const std::string& text)
{
    std::vector<std::string> out;
    std::istringstream ss(text);
    std::string line;
    while (std::getline(ss, line))
        out.push_back(line);
    return out;
}

}  // namespace

// ---------------------------------------------------------------------------

PointCloud parse_pointcloud_csv(const std::string& text)
{
    std::vector<std::vector<double>> points;
    std::size_t width = 0;
    bool first_content = true;
    const auto lines = lines_of(text);
    for (std::size_t ln = 0; ln < lines.size(); ++ln) {
        const std::string line = trim(lines[ln]);
        if (line.empty())
            continue;
        const auto fields = split_fields(line, ',');
        std::vector<double> row;
        bool numeric = true;
        for (const auto& f : fields) {
            auto v = to_double(f);
            if (!v) {
                numeric = false;
                break;
            }
            row.push_back(*v);
        }
        if (!numeric) {
            if (first_content) {
                first_content = false;
                width = fields.size();
                continue;  // header
            }
            throw ParseError("point cloud CSV line " + std::to_string(ln + 1) + ": non-numeric field");
        }
        if (width == 0)
            width = row.size();
        if (row.size() != width)
            throw ParseError("point cloud CSV line " + std::to_string(ln + 1) + ": expected " +
                             std::to_string(width) + " fields, found " + std::to_string(row.size()));
        for (double v : row)
            if (!std::isfinite(v))
                throw ParseError("point cloud CSV line " + std::to_string(ln + 1) + ": non-finite value");
        first_content = false;
        points.push_back(std::move(row));
    }
    if (points.empty())
        throw ParseError("point cloud CSV contains no points");
    return PointCloud(points);
}

PointCloud load_pointcloud(const std::filesystem::path& path) { return parse_pointcloud_csv(read_text_file(path)); }

// ---------------------------------------------------------------------------

LoadedGraph parse_edge_list(const std::string& text, Warnings* warnings)
{
    struct Row {
        long u, v;
        std::optional<double> w;
        std::size_t line;
    };
    std::vector<Row> rows;
    const auto lines = lines_of(text);
    for (std::size_t ln = 0; ln < lines.size(); ++ln) {
        std::string line = lines[ln];
        if (auto hash = line.find('#'); hash != std::string::npos)
            line.resize(hash);
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream ss(line);
        std::vector<std::string> tok;
        for (std::string t; ss >> t;)
            tok.push_back(t);
        if (tok.empty())
            continue;
        const std::string where = "edge list line " + std::to_string(ln + 1);
        if (tok.size() != 2 && tok.size() != 3)
            throw ParseError(where + ": expected 'u v [weight]'");
        Row r{};
        r.line = ln + 1;
        auto id = [&](const std::string& s) {
            char* end = nullptr;
            const long v = std::strtol(s.c_str(), &end, 10);
            if (end != s.c_str() + s.size())
                throw ParseError(where + ": vertex id '" + s + "' is not an integer");
            return v;
        };
        r.u = id(tok[0]);
        r.v = id(tok[1]);
        if (r.u == r.v)
            throw ParseError(where + ": self-loop at vertex " + tok[0]);
        if (tok.size() == 3) {
            r.w = to_double(tok[2]);
            if (!r.w || !std::isfinite(*r.w))
                throw ParseError(where + ": weight '" + tok[2] + "' is not a finite number");
        }
        rows.push_back(r);
    }
    const bool weighted = !rows.empty() && rows.front().w.has_value();
    for (const auto& r : rows)
        if (r.w.has_value() != weighted)
            throw ParseError("edge list line " + std::to_string(r.line) +
                             ": either every edge or no edge carries a weight");

    LoadedGraph out;
    for (const auto& r : rows) {
        out.original_ids.push_back(r.u);
        out.original_ids.push_back(r.v);
    }
    std::sort(out.original_ids.begin(), out.original_ids.end());
    out.original_ids.erase(std::unique(out.original_ids.begin(), out.original_ids.end()), out.original_ids.end());
    auto dense = [&](long id) {
        return static_cast<Vertex>(std::lower_bound(out.original_ids.begin(), out.original_ids.end(), id) -
                                   out.original_ids.begin());
    };
    std::map<std::pair<Vertex, Vertex>, double> edges;
    for (const auto& r : rows) {
        const Vertex a = dense(r.u), b = dense(r.v);
        const auto key = std::make_pair(std::min(a, b), std::max(a, b));
        auto [it, fresh] = edges.emplace(key, r.w.value_or(0.0));
        if (!fresh) {
            warn(warnings, "edge list line " + std::to_string(r.line) + ": duplicate edge (" + std::to_string(r.u) +
                               "," + std::to_string(r.v) + "), keeping the last weight");
            it->second = r.w.value_or(0.0);
        }
    }
    std::vector<std::pair<Vertex, Vertex>> list;
    std::vector<double> weights;
    for (const auto& [k, w] : edges) {
        list.push_back(k);
        weights.push_back(w);
    }
    out.graph = weighted ? Graph(out.original_ids.size(), std::move(list), std::move(weights))
                         : Graph(out.original_ids.size(), std::move(list));
    return out;
}

void attach_node_values(LoadedGraph& g, const std::string& sidecar_text)
{
    std::vector<std::optional<double>> values(g.original_ids.size());
    const auto lines = lines_of(sidecar_text);
    bool first = true;
    for (std::size_t ln = 0; ln < lines.size(); ++ln) {
        const std::string line = trim(lines[ln]);
        if (line.empty())
            continue;
        const auto fields = split_fields(line, ',');
        const std::string where = "node value CSV line " + std::to_string(ln + 1);
        if (fields.size() != 2)
            throw ParseError(where + ": expected 'id,value'");
        const auto id = to_double(fields[0]);
        const auto val = to_double(fields[1]);
        if (!id || !val) {
            if (first) {
                first = false;
                continue;  // header
            }
            throw ParseError(where + ": non-numeric field");
        }
        first = false;
        const long key = static_cast<long>(*id);
        auto it = std::lower_bound(g.original_ids.begin(), g.original_ids.end(), key);
        if (it == g.original_ids.end() || *it != key)
            throw ParseError(where + ": vertex " + fields[0] + " does not appear in the edge list");
        values[static_cast<std::size_t>(it - g.original_ids.begin())] = *val;
    }
    std::vector<double> dense;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!values[i])
            throw ParseError("node value CSV: no value for vertex " + std::to_string(g.original_ids[i]));
        dense.push_back(*values[i]);
    }
    g.graph.set_node_values(std::move(dense));
}

LoadedGraph load_graph(const std::filesystem::path& path, const std::optional<std::filesystem::path>& node_values,
                       Warnings* warnings)
{
    LoadedGraph g = parse_edge_list(read_text_file(path), warnings);
    if (node_values)
        attach_node_values(g, read_text_file(*node_values));
    return g;
}

// ---------------------------------------------------------------------------

GrayImage parse_pgm(const std::string& bytes)
{
    std::size_t pos = 0;
    auto next_token = [&]() {
        while (pos < bytes.size()) {
            if (bytes[pos] == '#') {
                while (pos < bytes.size() && bytes[pos] != '\n')
                    ++pos;
            } else if (std::isspace(static_cast<unsigned char>(bytes[pos]))) {
                ++pos;
            } else {
                break;
            }
        }
        const std::size_t start = pos;
        while (pos < bytes.size() && !std::isspace(static_cast<unsigned char>(bytes[pos])) && bytes[pos] != '#')
            ++pos;
        if (start == pos)
            throw ParseError("PGM: unexpected end of data");
        return bytes.substr(start, pos - start);
    };
    auto next_int = [&](const char* what) {
        const std::string t = next_token();
        char* end = nullptr;
        const long v = std::strtol(t.c_str(), &end, 10);
        if (end != t.c_str() + t.size() || v < 0)
            throw ParseError(std::string("PGM: invalid ") + what + " '" + t + "'");
        return static_cast<std::size_t>(v);
    };
    const std::string magic = next_token();
    if (magic != "P2" && magic != "P5")
        throw ParseError("PGM: unsupported magic '" + magic + "' (expected P2 or P5)");
    const std::size_t cols = next_int("width"), rows = next_int("height"), maxval = next_int("maxval");
    if (rows == 0 || cols == 0)
        throw ParseError("PGM: image must have positive dimensions");
    if (maxval == 0 || maxval > 65535)
        throw ParseError("PGM: maxval must lie in [1, 65535]");
    std::vector<double> values(rows * cols);
    if (magic == "P2") {
        for (auto& v : values) {
            const std::size_t x = next_int("pixel value");
            if (x > maxval)
                throw ParseError("PGM: pixel value exceeds maxval");
            v = static_cast<double>(x);
        }
    } else {
        ++pos;  // single whitespace after maxval
        const std::size_t width = maxval > 255 ? 2 : 1;
        if (bytes.size() < pos + values.size() * width)
            throw ParseError("PGM: truncated pixel data");
        for (std::size_t i = 0; i < values.size(); ++i) {
            const auto* p = reinterpret_cast<const unsigned char*>(bytes.data() + pos + i * width);
            values[i] = width == 2 ? static_cast<double>(p[0] * 256 + p[1]) : static_cast<double>(p[0]);
        }
    }
    return GrayImage(rows, cols, std::move(values));
}

GrayImage load_pgm(const std::filesystem::path& path) { return parse_pgm(read_text_file(path)); }

std::string to_pgm(const GrayImage& img, int maxval)
{
    std::ostringstream out;
    out << "P2\n" << img.cols() << ' ' << img.rows() << '\n' << maxval << '\n';
    for (std::size_t r = 0; r < img.rows(); ++r) {
        for (std::size_t c = 0; c < img.cols(); ++c) {
            const long v = std::clamp(std::lround(img(r, c)), 0L, static_cast<long>(maxval));
            out << (c ? " " : "") << v;
        }
        out << '\n';
    }
    return out.str();
}

// ---------------------------------------------------------------------------

namespace {

json number(double x)
{
    if (std::isinf(x))
        return x > 0 ? "inf" : "-inf";
    return round9(x);
}

double parse_number(const json& j, const std::string& where)
{
    if (j.is_number())
        return j.get<double>();
    if (j.is_string() && j.get<std::string>() == "inf")
        return kInfinity;
    throw ParseError(where + ": expected a number or \"inf\"");
}

}  // namespace

const PersistenceDiagram* DiagramFile::find(int dim) const
{
    for (const auto& pd : dims)
        if (pd.dim == dim)
            return &pd;
    return nullptr;
}

json to_json(const DiagramFile& file)
{
    json dims = json::array();
    for (const auto& pd : file.dims) {
        json pairs = json::array();
        for (const auto& p : pd.pairs)
            pairs.push_back(json::array({number(p.birth), number(p.death)}));
        dims.push_back({{"dim", pd.dim}, {"pairs", std::move(pairs)}});
    }
    json thresholds = json::array();
    for (double t : file.meta.thresholds)
        thresholds.push_back(number(t));
    return {{"dims", std::move(dims)},
            {"meta",
             {{"source", file.meta.source}, {"filtration", file.meta.filtration}, {"thresholds", thresholds}}}};
}

DiagramFile diagram_file_from_json(const json& j)
{
    if (!j.is_object() || !j.contains("dims") || !j["dims"].is_array())
        throw ParseError("diagram file: missing 'dims' array");
    DiagramFile f;
    for (std::size_t k = 0; k < j["dims"].size(); ++k) {
        const json& d = j["dims"][k];
        const std::string where = "diagram file dims[" + std::to_string(k) + "]";
        if (!d.is_object() || !d.contains("dim") || !d["dim"].is_number_integer() || !d.contains("pairs") ||
            !d["pairs"].is_array())
            throw ParseError(where + ": expected {dim, pairs}");
        PersistenceDiagram pd{d["dim"].get<int>(), {}};
        for (const auto& p : d["pairs"]) {
            if (!p.is_array() || p.size() != 2)
                throw ParseError(where + ": each pair must be [birth, death]");
            const double b = parse_number(p[0], where);
            const double dd = parse_number(p[1], where);
            if (std::isinf(b) || dd < b)
                throw ParseError(where + ": pair with birth " + format_number(b) + " and death " +
                                 format_number(dd) + " is invalid");
            pd.add(b, dd);
        }
        f.dims.push_back(std::move(pd));
    }
    if (j.contains("meta") && j["meta"].is_object()) {
        const json& m = j["meta"];
        f.meta.source = m.value("source", "");
        f.meta.filtration = m.value("filtration", "");
        if (m.contains("thresholds"))
            for (const auto& t : m["thresholds"])
                f.meta.thresholds.push_back(parse_number(t, "diagram file meta.thresholds"));
    }
    return f;
}

std::string dump_json(const json& j) { return j.dump() + "\n"; }

DiagramFile load_diagram_file(const std::filesystem::path& path)
{
    json j;
    try {
        j = json::parse(read_text_file(path));
    } catch (const json::parse_error& e) {
        throw ParseError("diagram file '" + path.string() + "': " + e.what());
    }
    return diagram_file_from_json(j);
}

void save_diagram_file(const std::filesystem::path& path, const DiagramFile& file)
{
    write_text_file(path, dump_json(to_json(file)));
}

// ---------------------------------------------------------------------------

std::string to_csv(const std::vector<TopologicalVector>& rows)
{
    std::string out;
    for (const auto& v : rows) {
        for (std::size_t i = 0; i < v.values.size(); ++i) {
            if (i)
                out += ',';
            out += format_number(v.values[i]);
        }
        out += '\n';
    }
    return out;
}

std::vector<std::vector<double>> parse_csv_rows(const std::string& text)
{
    std::vector<std::vector<double>> out;
    const auto lines = lines_of(text);
    for (std::size_t ln = 0; ln < lines.size(); ++ln) {
        const std::string line = trim(lines[ln]);
        if (line.empty())
            continue;
        std::vector<double> row;
        for (const auto& f : split_fields(line, ',')) {
            if (f == "inf")
                row.push_back(kInfinity);
            else if (auto v = to_double(f))
                row.push_back(*v);
            else
                throw ParseError("CSV line " + std::to_string(ln + 1) + ": non-numeric field '" + f + "'");
        }
        out.push_back(std::move(row));
    }
    return out;
}

json to_json(const TopologicalVector& v)
{
    json values = json::array();
    for (double x : v.values)
        values.push_back(number(x));
    json segments = json::array();
    for (const auto& s : v.segments)
        segments.push_back({{"method", s.method}, {"parameters", s.parameters}, {"dim", s.dim}, {"length", s.length}});
    return {{"values", std::move(values)}, {"segments", std::move(segments)}};
}

// ---------------------------------------------------------------------------

json to_json(const MapperGraph& g, const MapperParams& params)
{
    json nodes = json::array();
    for (const auto& n : g.nodes)
        nodes.push_back({{"id", n.id}, {"interval", n.interval}, {"size", n.size()}, {"members", n.members}});
    json edges = json::array();
    for (const auto& e : g.edges)
        edges.push_back({{"source", e.source}, {"target", e.target}, {"weight", e.weight}});
    return {{"nodes", std::move(nodes)},
            {"edges", std::move(edges)},
            {"params",
             {{"lens", params.lens},
              {"resolution", params.resolution},
              {"overlap", round9(params.overlap)},
              {"clustering", params.clustering}}}};
}

MapperGraph mapper_graph_from_json(const json& j, MapperParams* params)
{
    try {
        MapperGraph g;
        for (const auto& n : j.at("nodes")) {
            MapperNode node{n.at("id").get<std::size_t>(), n.at("interval").get<std::size_t>(),
                            n.at("members").get<std::vector<std::size_t>>()};
            if (node.size() != n.at("size").get<std::size_t>())
                throw ParseError("mapper graph: node " + std::to_string(node.id) + " size does not match members");
            g.nodes.push_back(std::move(node));
        }
        for (const auto& e : j.at("edges"))
            g.edges.push_back({e.at("source").get<std::size_t>(), e.at("target").get<std::size_t>(),
                               e.at("weight").get<std::size_t>()});
        if (params && j.contains("params")) {
            const json& p = j["params"];
            params->lens = p.value("lens", "");
            params->resolution = p.value("resolution", 1);
            params->overlap = p.value("overlap", 0.0);
            params->clustering = p.value("clustering", json::object());
        }
        return g;
    } catch (const json::exception& e) {
        throw ParseError(std::string("mapper graph JSON: ") + e.what());
    }
}

// ---------------------------------------------------------------------------

json to_json(const BigradedBettiTensor& t, std::span<const double> row_values, std::span<const double> col_values)
{
    json values = json::array();
    for (std::size_t i = 0; i < t.rows; ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < t.cols; ++j)
            row.push_back(t(i, j));
        values.push_back(std::move(row));
    }
    json rv = json::array(), cv = json::array();
    for (double x : row_values)
        rv.push_back(number(x));
    for (double x : col_values)
        cv.push_back(number(x));
    return {{"dim", t.dim}, {"rows", std::move(rv)}, {"cols", std::move(cv)}, {"values", std::move(values)}};
}

json to_json(const SliceMatrix& m)
{
    json values = json::array();
    for (std::size_t i = 0; i < m.rows; ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < m.cols; ++j)
            row.push_back(number(m(i, j)));
        values.push_back(std::move(row));
    }
    json grid = json::array();
    for (double x : m.grid)
        grid.push_back(number(x));
    return {{"grid", std::move(grid)}, {"values", std::move(values)}};
}

std::string to_csv(const BigradedBettiTensor& t)
{
    std::string out;
    for (std::size_t i = 0; i < t.rows; ++i) {
        for (std::size_t j = 0; j < t.cols; ++j) {
            if (j)
                out += ',';
            out += std::to_string(t(i, j));
        }
        out += '\n';
    }
    return out;
}

}  // namespace tdakit
