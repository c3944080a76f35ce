#include <catch_amalgamated.hpp>

#include <filesystem>

#include "tdakit/io.hpp"

using namespace tdakit;
using Catch::Matchers::ContainsSubstring;

TEST_CASE("number formatting", "[io]")
{
    CHECK(format_number(0.0) == "0");
    CHECK(format_number(1.5) == "1.5");
    CHECK(format_number(std::sqrt(2.0)) == "1.41421356");
    CHECK(format_number(kInfinity) == "inf");
    CHECK(round9(1.0 / 3.0) == 0.333333333);
}

TEST_CASE("point cloud csv", "[io]")
{
    auto pc = parse_pointcloud_csv("0,0\n3,4");
    CHECK(pc.size() == 2);
    CHECK(pc.dimension() == 2);
    auto with_header = parse_pointcloud_csv("x,y,z\n1,2,3\n\n4,5,6\n");
    CHECK(with_header.size() == 2);
    CHECK(with_header.coord(1, 2) == 6);
    CHECK_THROWS_WITH(parse_pointcloud_csv("0,0\n1\n"), ContainsSubstring("line 2"));
    CHECK_THROWS_WITH(parse_pointcloud_csv("0,0\n1,abc\n"), ContainsSubstring("line 2"));
    CHECK_THROWS_AS(parse_pointcloud_csv(""), ParseError);
}

TEST_CASE("edge lists", "[io]")
{
    auto path = parse_edge_list("0 1\n1 2\n");
    CHECK(path.graph.num_vertices() == 3);
    CHECK(path.graph.num_edges() == 2);
    CHECK_FALSE(path.graph.has_edge_weights());

    auto weighted = parse_edge_list("# comment\n0 1 2.5\n");
    CHECK(weighted.graph.edge_weights()[0] == 2.5);

    CHECK_THROWS_AS(parse_edge_list("3 3\n"), ParseError);

    Warnings w;
    auto dup = parse_edge_list("0 1 1\n1 0 4\n", &w);
    CHECK(dup.graph.num_edges() == 1);
    CHECK(dup.graph.edge_weights()[0] == 4);
    CHECK_FALSE(w.empty());

    auto sparse = parse_edge_list("10 30\n30 20\n");
    CHECK(sparse.original_ids == std::vector<long>{10, 20, 30});
    CHECK(sparse.graph.has_edge(0, 2));
    attach_node_values(sparse, "id,value\n10,1\n20,2\n30,3\n");
    CHECK(sparse.graph.node_values()[2] == 3);

    auto missing = parse_edge_list("0 1\n");
    CHECK_THROWS_AS(attach_node_values(missing, "0,1\n"), ParseError);
    CHECK_THROWS_AS(parse_edge_list("0 1 2\n1 2\n"), ParseError);
}

TEST_CASE("pgm images", "[io]")
{
    auto img = parse_pgm("P2\n# c\n3 2\n255\n0 10 20\n30 40 255\n");
    CHECK(img.rows() == 2);
    CHECK(img.cols() == 3);
    CHECK(img(1, 2) == 255);
    CHECK(parse_pgm(to_pgm(img)).values().size() == 6);
    std::string p5 = "P5\n2 1\n255\n";
    p5.push_back(static_cast<char>(7));
    p5.push_back(static_cast<char>(200));
    auto bin = parse_pgm(p5);
    CHECK(bin(0, 1) == 200);
    CHECK_THROWS_AS(parse_pgm("P2\n2 2\n255\n1 2 3\n"), ParseError);
}

TEST_CASE("diagram file round trip", "[io]")
{
    DiagramFile f;
    f.dims.push_back({0, {{0, 0, 1}, {0, 0, kInfinity}}});
    f.dims.push_back({1, {{1, 1, 1.41421356}}});
    f.meta = {"pts.csv", "rips", {0.5, 2}};
    const auto text = dump_json(to_json(f));
    CHECK(text.back() == '\n');
    CHECK_THAT(text, ContainsSubstring("\"inf\""));
    auto back = diagram_file_from_json(nlohmann::json::parse(text));
    CHECK(back == f);
    CHECK(dump_json(to_json(back)) == text);
    REQUIRE(back.find(1) != nullptr);
    CHECK(back.find(2) == nullptr);

    const auto path = std::filesystem::temp_directory_path() / "tdakit_io_roundtrip.json";
    save_diagram_file(path, f);
    CHECK(load_diagram_file(path) == f);
    std::filesystem::remove(path);

    CHECK_THROWS_AS(diagram_file_from_json(nlohmann::json::parse("{\"dims\":[{\"dim\":0,\"pairs\":[[2,1]]}]}")),
                    ParseError);
    CHECK_THROWS_AS(diagram_file_from_json(nlohmann::json::parse("[]")), ParseError);
}

TEST_CASE("vector csv", "[io]")
{
    TopologicalVector v{{1, 0.5, 2}, {{"betti", "", 0, 3}}};
    const auto text = to_csv({v, v});
    CHECK(text == "1,0.5,2\n1,0.5,2\n");
    auto rows = parse_csv_rows(text);
    REQUIRE(rows.size() == 2);
    CHECK(rows[1] == v.values);
    auto j = to_json(v);
    CHECK(j["values"].size() == 3);
}

TEST_CASE("mapper json round trip", "[io]")
{
    MapperGraph g;
    g.nodes = {{0, 0, {0, 1, 2}}, {1, 1, {2, 3}}};
    g.edges = {{0, 1, 1}};
    MapperParams p{"x", 2, 0.25, {{"method", "single_linkage"}, {"eps", 0.5}}};
    auto j = to_json(g, p);
    CHECK(j["nodes"][0]["size"] == 3);
    MapperParams back_params;
    CHECK(mapper_graph_from_json(j, &back_params) == g);
    CHECK(back_params == p);
}

TEST_CASE("multipersistence outputs", "[io]")
{
    BigradedBettiTensor t{0, 2, 2, {1, 2, 0, 1}};
    std::vector<double> rows{0, 1}, cols{5, 6};
    auto j = to_json(t, rows, cols);
    CHECK(j["dim"] == 0);
    CHECK(to_csv(t) == "1,2\n0,1\n");
    SliceMatrix m{1, 2, {0.5, 1}, {0, 1}};
    CHECK(to_json(m)["values"].size() == 1);
}
