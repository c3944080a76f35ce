#include <catch_amalgamated.hpp>

#include <algorithm>

#include "generators.hpp"
#include "oracles.hpp"
#include "tdakit/error.hpp"
#include "tdakit/mapper.hpp"

using namespace tdakit;
using Catch::Approx;

namespace {

void check_nerve(const MapperGraph& g)
{
    std::vector<std::vector<std::size_t>> members;
    for (const auto& n : g.nodes)
        members.push_back(n.members);
    auto expect = oracle::nerve(members);
    std::vector<oracle::NerveEdge> got;
    for (const auto& e : g.edges)
        got.push_back({std::min(e.source, e.target), std::max(e.source, e.target), e.weight});
    std::sort(got.begin(), got.end());
    std::sort(expect.begin(), expect.end());
    CHECK(got == expect);
}

// Members of each node lie in the preimage of its interval.
void check_preimages(const MapperGraph& g, std::span<const double> lens, const Cover& cover)
{
    for (const auto& n : g.nodes)
        for (std::size_t m : n.members)
            CHECK(cover.intervals[n.interval].contains(lens[m]));
}

}  // namespace

TEST_CASE("cover construction", "[mapper]")
{
    auto halves = build_cover(0, 10, 2, 0);
    CHECK(halves.intervals == std::vector<Interval>{{0, 5}, {5, 10}});
    auto third = build_cover(0, 10, 2, 1.0 / 3.0);
    REQUIRE(third.size() == 2);
    CHECK(third.intervals[0].hi == Approx(6));
    CHECK(third.intervals[1].lo == Approx(4));
    CHECK(third.intervals[1].hi == 10);
    CHECK(build_cover(2, 3, 1, 0.7).intervals == std::vector<Interval>{{2, 3}});
    CHECK_THROWS_AS(build_cover(0, 1, 0, 0.2), ValidationError);
    CHECK_THROWS_AS(build_cover(0, 1, 2, 1.0), ValidationError);
    CHECK_THROWS_AS(build_cover(1, 1, 2, 0.2), ValidationError);
    std::vector<double> flat{4, 4};
    CHECK(cover_for(flat, 3, 0.2).intervals.front().lo == 3.5);
}

TEST_CASE("lenses", "[mapper]")
{
    CHECK(lens(PointCloud({{3, 7}}), LensSpec::parse("x"))[0] == 3);
    CHECK(lens(PointCloud({{3, 7}}), LensSpec::parse("coordinate:1"))[0] == 7);
    auto ecc = lens(PointCloud({{0, 0}, {3, 4}}), LensSpec::parse("eccentricity"));
    CHECK(ecc == std::vector<double>{5, 5});
    PointCloud line({{-2, 0}, {0, 0}, {1, 0}, {4, 0}});
    auto pc1 = lens(line, LensSpec::parse("pca"));
    const double mean = 0.75;
    for (std::size_t i = 0; i < 4; ++i)
        CHECK(std::abs(pc1[i]) == Approx(std::abs(line.coord(i, 0) - mean)));
    CHECK((pc1[3] - pc1[0]) * (4 - -2) > 0);
    auto dens = lens(line, LensSpec::parse("density:1.5"));
    CHECK(dens == std::vector<double>{1, 2, 2, 1});
    CHECK_THROWS_AS(LensSpec::parse("pca:0"), ValidationError);
    CHECK_THROWS_AS(LensSpec::parse("curvature"), ValidationError);
    CHECK_THROWS_AS(lens(line, LensSpec::parse("z")), ValidationError);
    CHECK(LensSpec::parse("density:0.5").to_string() == "density:0.5");
}

TEST_CASE("clustering", "[mapper]")
{
    auto two = gen::blobs({{0, 0}, {10, 0}}, 10, 0.1, 1);
    std::vector<std::size_t> all(20);
    std::iota(all.begin(), all.end(), 0);
    ClusterSpec sl;
    sl.eps = 1;
    auto c = cluster(two, all, sl);
    REQUIRE(c.size() == 2);
    CHECK(c[0].front() == 0);
    CHECK(c[1].front() == 10);

    ClusterSpec km;
    km.method = ClusterMethod::KMeans;
    km.k = 1;
    CHECK(cluster(two, all, km).size() == 1);
    km.k = 2;
    CHECK(cluster(two, all, km) == c);
    km.k = 50;
    Warnings w;
    CHECK(cluster(two, all, km, &w).size() <= 20);
    CHECK_FALSE(w.empty());

    PointCloud dense({{0, 0}, {0, 0}, {0, 0}, {0, 0}, {0, 0}, {9, 9}});
    std::vector<std::size_t> six{0, 1, 2, 3, 4, 5};
    ClusterSpec db;
    db.method = ClusterMethod::DBSCAN;
    db.eps = 0.5;
    db.min_pts = 3;
    auto d = cluster(dense, six, db);
    REQUIRE(d.size() == 1);
    CHECK(d[0] == std::vector<std::size_t>{0, 1, 2, 3, 4});
    CHECK(parse_cluster_method("single-linkage") == ClusterMethod::SingleLinkage);
    CHECK_THROWS_AS(parse_cluster_method("ward"), ValidationError);
}

TEST_CASE("point cloud mapper basics", "[mapper]")
{
    auto one = gen::blobs({{0, 0}}, 30, 0.2, 5);
    auto x = lens(one, LensSpec::parse("x"));
    auto g = mapper_pointcloud(one, x, cover_for(x, 1, 0.2), ClusterSpec{ClusterMethod::SingleLinkage, 2.0});
    CHECK(g.nodes.size() == 1);
    CHECK(g.edges.empty());

    auto two = gen::blobs({{0, 0}, {0, 10}}, 20, 0.2, 6);
    auto x2 = lens(two, LensSpec::parse("x"));
    auto g2 = mapper_pointcloud(two, x2, cover_for(x2, 1, 0.0), ClusterSpec{ClusterMethod::SingleLinkage, 1.0});
    CHECK(g2.nodes.size() == 2);
    CHECK(g2.edges.empty());
    CHECK(g2.component_count() == 2);
}

TEST_CASE("circle mapper is a single loop", "[mapper]")
{
    auto pc = gen::circle(100, 0.02, 42);
    auto x = lens(pc, LensSpec::parse("x"));
    auto cover = cover_for(x, 4, 0.25);
    ClusterSpec spec;
    spec.eps = 0.3;
    auto g = mapper_pointcloud(pc, x, cover, spec);
    CHECK(g.cycle_rank() == 1);
    CHECK(g.nodes.size() >= 4);
    CHECK(g.nodes.size() <= 12);
    CHECK(g.component_count() == 1);
    check_nerve(g);
    check_preimages(g, x, cover);
}

TEST_CASE("product cover mapper", "[mapper]")
{
    auto pc = gen::circle(80, 0.01, 9);
    auto x = lens(pc, LensSpec::parse("x"));
    auto y = lens(pc, LensSpec::parse("y"));
    auto cx = cover_for(x, 3, 0.3), cy = cover_for(y, 3, 0.3);
    ClusterSpec spec;
    spec.eps = 0.3;
    auto g = mapper_pointcloud(pc, x, y, cx, cy, spec);
    check_nerve(g);
    CHECK(g.cycle_rank() >= 1);
    for (const auto& n : g.nodes)
        for (std::size_t m : n.members) {
            CHECK(cx.intervals[n.interval / 3].contains(x[m]));
            CHECK(cy.intervals[n.interval % 3].contains(y[m]));
        }
}

TEST_CASE("graph mapper", "[mapper]")
{
    Graph path(5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}});
    std::vector<double> pos{0, 1, 2, 3, 4};
    auto g = mapper_graph(path, pos, build_cover(0, 4, 2, 0.5));
    CHECK(g.nodes.size() == 2);
    CHECK(g.edges.size() == 1);
    check_nerve(g);

    Graph split(4, {{0, 1}, {2, 3}});
    std::vector<double> vals{0, 1, 2, 3};
    auto s = mapper_graph(split, vals, build_cover(0, 3, 1, 0));
    CHECK(s.nodes.size() == 2);

    // three overlapping cover elements over a path: clusters are the
    // connected pieces, edges their overlaps
    Graph p7(7, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 6}});
    std::vector<double> idx{0, 1, 2, 3, 4, 5, 6};
    auto three = mapper_graph(p7, idx, build_cover(0, 6, 3, 0.4));
    CHECK(three.nodes.size() == 3);
    CHECK(three.edges.size() == 2);
    check_nerve(three);
}

TEST_CASE("image mapper", "[mapper]")
{
    GrayImage flat(3, 3, std::vector<double>(9, 80));
    CHECK(mapper_image(flat, build_cover(0, 255, 1, 0)).nodes.size() == 1);

    GrayImage plateaus({{50, 50, 200, 200}, {50, 50, 200, 200}});
    auto split = mapper_image(plateaus, build_cover(0, 255, 2, 0));
    CHECK(split.nodes.size() == 2);
    CHECK(split.edges.empty());

    auto wide = mapper_image(plateaus, build_cover(0, 255, 2, 0.9));
    check_nerve(wide);
    CHECK_FALSE(wide.edges.empty());
    bool spans = false;
    for (const auto& n : wide.nodes)
        spans = spans || n.members.size() == 8;
    CHECK(spans);
}

TEST_CASE("blob node counts grow with resolution", "[mapper]")
{
    auto pc = gen::blobs({{0, 0}, {4, 0}, {8, 1}, {2, 5}}, 40, 0.5, 2024);
    auto x = lens(pc, LensSpec::parse("x"));
    ClusterSpec spec;
    spec.eps = 0.6;
    std::size_t prev = 0;
    for (int n : {2, 4, 8, 16}) {
        auto g = mapper_pointcloud(pc, x, cover_for(x, n, 0.25), spec);
        check_nerve(g);
        CHECK(g.nodes.size() >= prev);
        prev = g.nodes.size();
    }
}

TEST_CASE("assemble orders nodes and weights edges", "[mapper]")
{
    auto g = assemble_mapper({{1, {2, 3}}, {0, {0, 1, 2}}, {0, {5}}, {1, {5, 6}}});
    REQUIRE(g.nodes.size() == 4);
    CHECK(g.nodes[0].members == std::vector<std::size_t>{0, 1, 2});
    CHECK(g.nodes[1].members == std::vector<std::size_t>{5});
    CHECK(g.nodes[2].interval == 1);
    check_nerve(g);
    CHECK(g.cycle_rank() == 0);
}
