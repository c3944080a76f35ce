#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "tdakit/cubical.hpp"
#include "tdakit/graph.hpp"
#include "tdakit/pointcloud.hpp"

namespace tdakit {

struct Dataset {
    std::string name;
    std::variant<PointCloud, Graph, GrayImage> data;

    std::string kind() const;
    std::size_t size() const;
};

struct HttpResponse {
    int status = 200;
    std::string body;
};

/// JSON API over a fixed set of datasets loaded at construction. Request
/// handling is read-only and safe to call concurrently.
class MapperService {
public:
    /// Loads *.csv point clouds, *.pgm images and *.edges / *.edgelist
    /// graphs (with an optional <name>.values.csv sidecar).
    explicit MapperService(const std::filesystem::path& dataset_dir);
    explicit MapperService(std::vector<Dataset> datasets);

    HttpResponse handle(const std::string& method, const std::string& path, const std::string& body) const;

    HttpResponse list_datasets() const;
    HttpResponse list_lenses() const;
    HttpResponse mapper(const std::string& body) const;
    HttpResponse diagram(const std::string& body) const;

    const std::vector<Dataset>& datasets() const { return datasets_; }

private:
    const Dataset* find(const std::string& name) const;
    std::vector<Dataset> datasets_;
};

/// Worker count from TDAKIT_THREADS, else the hardware concurrency (>= 1).
std::size_t worker_threads();

/// Serves the API over HTTP until the process is stopped.
void run_server(const MapperService& service, const std::string& host, int port);

}  // namespace tdakit
