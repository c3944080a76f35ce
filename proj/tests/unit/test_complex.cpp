#include <catch_amalgamated.hpp>

#include <random>

#include "oracles.hpp"
#include "tdakit/complex.hpp"
#include "tdakit/error.hpp"

using namespace tdakit;

namespace {

SimplicialComplex square()
{
    std::vector<Simplex> gens{{0, 1}, {1, 2}, {2, 3}, {0, 3}};
    return SimplicialComplex::closure_of(gens);
}

SimplicialComplex hollow_tetrahedron()
{
    std::vector<Simplex> gens{{0, 1, 2}, {1, 2, 3}, {0, 1, 3}, {0, 2, 3}};
    return SimplicialComplex::closure_of(gens);
}

// Row/column lookup by the labels used in the textbook figures.
bool has_entry(const BoundaryMatrix& m, const SimplicialComplex& c, const Simplex& row, const Simplex& col)
{
    return m.entry(*c.index_in_dim(row), *c.index_in_dim(col));
}

}  // namespace

TEST_CASE("simplex normalizes and rejects repeats", "[complex]")
{
    Simplex s{2, 0, 1};
    CHECK(s.dim() == 2);
    CHECK(s[0] == 0);
    CHECK(s[2] == 2);
    CHECK_THROWS_AS(Simplex({1, 1}), ValidationError);
    CHECK_THROWS_AS(Simplex(std::vector<Vertex>{}), ValidationError);
    auto f = s.facets();
    REQUIRE(f.size() == 3);
    CHECK(f[0] == Simplex{1, 2});
    CHECK(f[2] == Simplex{0, 1});
}

TEST_CASE("complex requires face closure", "[complex]")
{
    CHECK_THROWS_AS(SimplicialComplex({Simplex{0, 1}}), StructureError);
    SimplicialComplex ok({Simplex{0}, Simplex{1}, Simplex{0, 1}, Simplex{0}});
    CHECK(ok.size() == 3);
}

TEST_CASE("euler characteristic", "[complex]")
{
    CHECK(euler_characteristic(square()) == 0);
    CHECK(euler_characteristic(hollow_tetrahedron()) == 2);
    CHECK(euler_characteristic(SimplicialComplex{}) == 0);
}

TEST_CASE("betti numbers of the worked examples", "[complex]")
{
    CHECK(betti_numbers(square(), 1) == std::vector<long>{1, 1});
    CHECK(betti_numbers(hollow_tetrahedron(), 2) == std::vector<long>{1, 0, 1});
    SimplicialComplex point({Simplex{0}});
    CHECK(betti_numbers(point, 3) == std::vector<long>{1, 0, 0, 0});
}

TEST_CASE("square boundary operator matches the figure", "[complex]")
{
    const auto c = square();
    const auto d1 = boundary_operator(c, 1);
    // Columns e1..e4 = [v0v1], [v1v2], [v2v3], [v3v0]; rows v0..v3.
    const std::vector<Simplex> e{{0, 1}, {1, 2}, {2, 3}, {0, 3}};
    const int expected[4][4] = {{1, 0, 0, 1}, {1, 1, 0, 0}, {0, 1, 1, 0}, {0, 0, 1, 1}};
    for (Vertex v = 0; v < 4; ++v)
        for (std::size_t j = 0; j < 4; ++j)
            CHECK(has_entry(d1, c, Simplex{v}, e[j]) == (expected[v][j] == 1));
}

TEST_CASE("tetrahedron boundary operators match the figure", "[complex]")
{
    const auto c = hollow_tetrahedron();
    const std::vector<Simplex> e{{0, 1}, {1, 2}, {2, 3}, {0, 3}, {0, 2}, {1, 3}};
    const std::vector<Simplex> tau{{0, 1, 2}, {1, 2, 3}, {0, 1, 3}, {0, 2, 3}};
    const int d2_expected[6][4] = {{1, 0, 1, 0}, {1, 1, 0, 0}, {0, 1, 0, 1},
                                   {0, 0, 1, 1}, {1, 0, 0, 1}, {0, 1, 1, 0}};
    const int d1_expected[4][6] = {{1, 0, 0, 1, 1, 0}, {1, 1, 0, 0, 0, 1}, {0, 1, 1, 0, 1, 0}, {0, 0, 1, 1, 0, 1}};
    const auto d2 = boundary_operator(c, 2);
    const auto d1 = boundary_operator(c, 1);
    for (std::size_t i = 0; i < 6; ++i)
        for (std::size_t j = 0; j < 4; ++j)
            CHECK(has_entry(d2, c, e[i], tau[j]) == (d2_expected[i][j] == 1));
    for (Vertex v = 0; v < 4; ++v)
        for (std::size_t j = 0; j < 6; ++j)
            CHECK(has_entry(d1, c, Simplex{v}, e[j]) == (d1_expected[v][j] == 1));
}

TEST_CASE("filtered boundary matrix", "[complex]")
{
    auto fc = FilteredComplex::from_cells({{Simplex{0}, 0}, {Simplex{1}, 0}, {Simplex{2}, 0}});
    auto m = boundary_matrix(fc);
    for (const auto& col : m.columns)
        CHECK(col.empty());

    CHECK_THROWS_AS(FilteredComplex::from_cells({{Simplex{0}, 0}, {Simplex{0, 1}, 1}}), StructureError);
    // a face entering after its coface
    CHECK_THROWS_AS(FilteredComplex::from_cells({{Simplex{0}, 0}, {Simplex{1}, 2}, {Simplex{0, 1}, 1}}),
                    StructureError);
}

TEST_CASE("betti numbers agree with the dense oracle", "[complex]")
{
    std::mt19937 rng(7);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<Simplex> gens;
        std::vector<oracle::Cell> raw;
        const int n = 4 + static_cast<int>(rng() % 4);
        for (int k = 0; k < 6; ++k) {
            std::vector<Vertex> vs;
            for (int v = 0; v < n; ++v)
                if (rng() % 2)
                    vs.push_back(static_cast<Vertex>(v));
            if (vs.empty() || vs.size() > 4)
                continue;
            gens.emplace_back(vs);
        }
        const auto c = SimplicialComplex::closure_of(gens);
        for (int d = 0; d <= c.max_dim(); ++d)
            for (const auto& s : c.simplices(d))
                raw.emplace_back(s.vertices().begin(), s.vertices().end());
        CHECK(betti_numbers(c, 3) == oracle::betti(raw, 3));
    }
}
