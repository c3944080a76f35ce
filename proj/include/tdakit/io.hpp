#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "tdakit/cubical.hpp"
#include "tdakit/error.hpp"
#include "tdakit/graph.hpp"
#include "tdakit/mapper.hpp"
#include "tdakit/multipers.hpp"
#include "tdakit/persistence.hpp"
#include "tdakit/pointcloud.hpp"
#include "tdakit/vectorize.hpp"

namespace tdakit {

/// Malformed input file; the message carries the line number when known.
class ParseError : public ValidationError {
public:
    explicit ParseError(const std::string& what) : ValidationError(what) {}
};

/// Shortest decimal form with at most 9 significant digits; "inf"/"-inf"
/// for infinities.
std::string format_number(double x);
/// x rounded to 9 significant digits.
double round9(double x);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

// --- point clouds ----------------------------------------------------------

/// Numeric CSV, one point per row. A non-numeric first row is a header;
/// blank lines are skipped.
PointCloud parse_pointcloud_csv(const std::string& text);
PointCloud load_pointcloud(const std::filesystem::path& path);

// --- graphs ----------------------------------------------------------------

struct LoadedGraph {
    Graph graph;
    std::vector<long> original_ids;  // dense vertex i came from original_ids[i]
};

/// Lines "u v [weight]", '#' comments allowed. Ids are densified in
/// increasing order. A repeated edge keeps the last weight (with a warning).
LoadedGraph parse_edge_list(const std::string& text, Warnings* warnings = nullptr);
/// Sidecar CSV "id,value" keyed by original ids; every vertex needs a value.
void attach_node_values(LoadedGraph& g, const std::string& sidecar_text);
LoadedGraph load_graph(const std::filesystem::path& path,
                       const std::optional<std::filesystem::path>& node_values = std::nullopt,
                       Warnings* warnings = nullptr);

// --- images ----------------------------------------------------------------

/// PGM in plain (P2) or binary (P5, 8 or 16 bit) form.
GrayImage parse_pgm(const std::string& bytes);
GrayImage load_pgm(const std::filesystem::path& path);
/// Plain PGM with values rounded to integers in [0, maxval].
std::string to_pgm(const GrayImage& img, int maxval = 255);

// --- diagrams --------------------------------------------------------------

struct DiagramMeta {
    std::string source;
    std::string filtration;
    std::vector<double> thresholds;

    friend bool operator==(const DiagramMeta&, const DiagramMeta&) = default;
};

struct DiagramFile {
    std::vector<PersistenceDiagram> dims;
    DiagramMeta meta;

    const PersistenceDiagram* find(int dim) const;
    friend bool operator==(const DiagramFile&, const DiagramFile&) = default;
};

nlohmann::json to_json(const DiagramFile& file);
DiagramFile diagram_file_from_json(const nlohmann::json& j);
std::string dump_json(const nlohmann::json& j);
DiagramFile load_diagram_file(const std::filesystem::path& path);
void save_diagram_file(const std::filesystem::path& path, const DiagramFile& file);

// --- vectors ---------------------------------------------------------------

/// One comma-separated row per vector.
std::string to_csv(const std::vector<TopologicalVector>& rows);
std::vector<std::vector<double>> parse_csv_rows(const std::string& text);
nlohmann::json to_json(const TopologicalVector& v);

// --- Mapper ----------------------------------------------------------------

struct MapperParams {
    std::string lens;
    int resolution = 1;
    double overlap = 0.0;
    nlohmann::json clustering = nlohmann::json::object();

    friend bool operator==(const MapperParams&, const MapperParams&) = default;
};

nlohmann::json to_json(const MapperGraph& g, const MapperParams& params);
MapperGraph mapper_graph_from_json(const nlohmann::json& j, MapperParams* params = nullptr);

// --- multipersistence ------------------------------------------------------

nlohmann::json to_json(const BigradedBettiTensor& t, std::span<const double> row_values,
                       std::span<const double> col_values);
nlohmann::json to_json(const SliceMatrix& m);
std::string to_csv(const BigradedBettiTensor& t);

}  // namespace tdakit
