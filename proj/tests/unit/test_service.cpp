#include <catch_amalgamated.hpp>

#include <filesystem>

#include <json.hpp>

#include "generators.hpp"
#include "tdakit/io.hpp"
#include "tdakit/service.hpp"

using namespace tdakit;
using nlohmann::json;

namespace {

MapperService make_service()
{
    std::vector<Dataset> ds;
    ds.push_back({"blob", gen::blobs({{0, 0}}, 30, 0.2, 1)});
    ds.push_back({"ring", gen::circle(60, 0.01, 2)});
    ds.push_back({"path", Graph(4, {{0, 1}, {1, 2}, {2, 3}})});
    ds.push_back({"img", GrayImage({{0, 0, 200}, {0, 0, 200}})});
    return MapperService(std::move(ds));
}

json body_of(const HttpResponse& r) { return json::parse(r.body); }

bool has_field_error(const json& j, const std::string& field)
{
    for (const auto& e : j["errors"])
        if (e["field"] == field)
            return true;
    return false;
}

}  // namespace

TEST_CASE("dataset and lens listings", "[service]")
{
    auto svc = make_service();
    auto r = svc.handle("GET", "/datasets", "");
    REQUIRE(r.status == 200);
    auto j = body_of(r);
    REQUIRE(j["datasets"].size() == 4);
    // listed by name
    CHECK(j["datasets"][0]["name"] == "blob");
    CHECK(j["datasets"][1]["name"] == "img");
    CHECK(j["datasets"][0]["kind"] == "pointcloud");
    CHECK(j["datasets"][0]["size"] == 30);
    CHECK(j["datasets"][1]["kind"] == "image");
    CHECK(j["datasets"][2]["kind"] == "graph");

    auto l = body_of(svc.handle("GET", "/lenses", ""));
    CHECK(l["pointcloud"].size() > 3);
    CHECK(l["clustering"].size() == 3);
}

TEST_CASE("routing errors", "[service]")
{
    auto svc = make_service();
    CHECK(svc.handle("GET", "/nowhere", "").status == 404);
    CHECK(svc.handle("POST", "/datasets", "").status == 405);
    CHECK(svc.handle("GET", "/mapper", "").status == 405);
}

TEST_CASE("mapper endpoint", "[service]")
{
    auto svc = make_service();
    auto r = svc.handle("POST", "/mapper",
                        R"({"dataset":"blob","lens":"x","resolution":1,"overlap":0.2,"clustering":{"method":"single_linkage","eps":2}})");
    REQUIRE(r.status == 200);
    auto j = body_of(r);
    CHECK(j["nodes"].size() == 1);
    CHECK(j["edges"].empty());
    CHECK(j["params"]["dataset"] == "blob");
    CHECK(j["params"]["resolution"] == 1);

    auto ring = body_of(svc.handle(
        "POST", "/mapper",
        R"({"dataset":"ring","lens":"x","resolution":4,"overlap":0.25,"clustering":{"method":"single_linkage","eps":0.3}})"));
    auto g = mapper_graph_from_json(ring);
    CHECK(g.cycle_rank() == 1);

    auto path = svc.handle("POST", "/mapper", R"({"dataset":"path","lens":"degree","resolution":2,"overlap":0.3})");
    CHECK(path.status == 200);
    auto img = svc.handle("POST", "/mapper", R"({"dataset":"img","resolution":2,"overlap":0})");
    REQUIRE(img.status == 200);
    CHECK(body_of(img)["nodes"].size() == 2);
}

TEST_CASE("mapper validation reports fields", "[service]")
{
    auto svc = make_service();
    auto r = svc.handle("POST", "/mapper", R"({"dataset":"blob","overlap":1.0})");
    CHECK(r.status == 400);
    auto j = body_of(r);
    CHECK(has_field_error(j, "overlap"));
    CHECK(j["params"]["overlap"] == 1.0);

    auto many = body_of(svc.handle(
        "POST", "/mapper",
        R"({"dataset":"blob","lens":"w","resolution":0,"clustering":{"method":"ward","eps":-1,"k":0}})"));
    for (const char* f : {"lens", "resolution", "clustering.method", "clustering.eps", "clustering.k"})
        CHECK(has_field_error(many, f));

    CHECK(svc.handle("POST", "/mapper", R"({"dataset":"missing"})").status == 404);
    CHECK(svc.handle("POST", "/mapper", R"({"lens":"x"})").status == 400);
    CHECK(svc.handle("POST", "/mapper", "not json").status == 400);
}

TEST_CASE("identical requests give identical bodies", "[service]")
{
    auto svc = make_service();
    const std::string req =
        R"({"dataset":"ring","lens":"pca","resolution":5,"overlap":0.3,"clustering":{"method":"kmeans","k":2,"seed":7}})";
    auto a = svc.handle("POST", "/mapper", req);
    auto b = svc.handle("POST", "/mapper", req);
    REQUIRE(a.status == 200);
    CHECK(a.body == b.body);
}

TEST_CASE("diagram endpoint", "[service]")
{
    auto svc = make_service();
    auto r = svc.handle("POST", "/diagram", R"({"dataset":"ring","filtration":{"type":"rips","max_dim":1,"max_scale":2}})");
    REQUIRE(r.status == 200);
    auto file = diagram_file_from_json(body_of(r));
    REQUIRE(file.find(1) != nullptr);
    double longest = 0;
    for (const auto& p : file.find(1)->pairs)
        longest = std::max(longest, p.lifespan());
    CHECK(longest > 1.0);

    auto img = svc.handle("POST", "/diagram", R"({"dataset":"img","filtration":{"type":"superlevel","thresholds":8}})");
    REQUIRE(img.status == 200);
    CHECK_NOTHROW(diagram_file_from_json(body_of(img)));

    CHECK(svc.handle("POST", "/diagram", R"({"dataset":"img","filtration":{"type":"rips"}})").status == 400);
    CHECK(svc.handle("POST", "/diagram", R"({"dataset":"nope"})").status == 404);
}

TEST_CASE("datasets load from a directory", "[service]")
{
    const auto dir = std::filesystem::temp_directory_path() / "tdakit_service_datasets";
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    write_text_file(dir / "pts.csv", "x,y\n0,0\n1,0\n0,1\n");
    write_text_file(dir / "g.edges", "0 1\n1 2\n");
    write_text_file(dir / "g.values.csv", "0,1\n1,2\n2,3\n");
    write_text_file(dir / "im.pgm", "P2\n2 2\n255\n0 1\n2 3\n");
    MapperService svc(dir);
    auto j = body_of(svc.list_datasets());
    REQUIRE(j["datasets"].size() == 3);
    std::vector<std::string> names;
    for (const auto& d : j["datasets"])
        names.push_back(d["name"]);
    CHECK(std::find(names.begin(), names.end(), "pts") != names.end());
    auto r = svc.handle("POST", "/mapper", R"({"dataset":"g","lens":"external","resolution":1})");
    CHECK(r.status == 200);
    std::filesystem::remove_all(dir);
}

TEST_CASE("worker thread count", "[service]")
{
    CHECK(worker_threads() >= 1);
}
