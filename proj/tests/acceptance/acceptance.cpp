// One PASS/FAIL line per acceptance criterion, each with its runtime limit.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

#include "generators.hpp"
#include "oracles.hpp"
#include "tdakit/complex.hpp"
#include "tdakit/cubical.hpp"
#include "tdakit/distance.hpp"
#include "tdakit/graph.hpp"
#include "tdakit/io.hpp"
#include "tdakit/mapper.hpp"
#include "tdakit/multipers.hpp"
#include "tdakit/persistence.hpp"
#include "tdakit/pointcloud.hpp"
#include "tdakit/vectorize.hpp"

using namespace tdakit;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool ok = true;
    std::string detail;

    void fail(const std::string& why)
    {
        if (ok)
            detail = why;
        ok = false;
    }
};

struct Criterion {
    std::string name;
    double limit_seconds;
    std::function<Outcome()> run;
};

std::string fmt(double x)
{
    std::ostringstream ss;
    ss.precision(10);
    ss << x;
    return ss.str();
}

// --- worked examples --------------------------------------------------------

Outcome worked_examples()
{
    Outcome o;
    const std::vector<Simplex> sq_gens{{0, 1}, {1, 2}, {2, 3}, {0, 3}};
    const auto square = SimplicialComplex::closure_of(sq_gens);
    const std::vector<Simplex> tet_gens{{0, 1, 2}, {1, 2, 3}, {0, 1, 3}, {0, 2, 3}};
    const auto tet = SimplicialComplex::closure_of(tet_gens);

    if (betti_numbers(square, 1) != std::vector<long>{1, 1})
        o.fail("square Betti numbers");
    if (betti_numbers(tet, 2) != std::vector<long>{1, 0, 1})
        o.fail("tetrahedron Betti numbers");
    if (euler_characteristic(square) != 0 || euler_characteristic(tet) != 2)
        o.fail("Euler characteristic");

    auto compare = [&](const SimplicialComplex& c, int k, const std::vector<Simplex>& rows,
                       const std::vector<Simplex>& cols, const std::vector<std::vector<int>>& expect,
                       const std::string& what) {
        const auto m = boundary_operator(c, k);
        for (std::size_t i = 0; i < rows.size(); ++i)
            for (std::size_t j = 0; j < cols.size(); ++j)
                if (m.entry(*c.index_in_dim(rows[i]), *c.index_in_dim(cols[j])) != (expect[i][j] == 1))
                    o.fail(what + " entry (" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")");
    };
    const std::vector<Simplex> v{{0}, {1}, {2}, {3}};
    compare(square, 1, v, {{0, 1}, {1, 2}, {2, 3}, {0, 3}},
            {{1, 0, 0, 1}, {1, 1, 0, 0}, {0, 1, 1, 0}, {0, 0, 1, 1}}, "square d1");
    const std::vector<Simplex> e{{0, 1}, {1, 2}, {2, 3}, {0, 3}, {0, 2}, {1, 3}};
    compare(tet, 1, v, e, {{1, 0, 0, 1, 1, 0}, {1, 1, 0, 0, 0, 1}, {0, 1, 1, 0, 1, 0}, {0, 0, 1, 1, 0, 1}},
            "tetrahedron d1");
    compare(tet, 2, e, tet_gens,
            {{1, 0, 1, 0}, {1, 1, 0, 0}, {0, 1, 0, 1}, {0, 0, 1, 1}, {1, 0, 0, 1}, {0, 1, 1, 0}}, "tetrahedron d2");
    if (o.ok)
        o.detail = "square (1,1) chi 0, tetrahedron (1,0,1) chi 2, boundary matrices entry-for-entry";
    return o;
}

// --- persistence vs static homology ------------------------------------------

Outcome persistence_oracle()
{
    Outcome o;
    std::mt19937 rng(500);
    const int trials = 500;
    std::size_t prefixes = 0;
    for (int t = 0; t < trials && o.ok; ++t) {
        const auto fc = gen::random_filtered_complex(rng, 60);
        const int top = fc.max_dim();
        const auto pds = compute_persistence(fc, top);
        for (double x : fc.values()) {
            ++prefixes;
            const auto lib = betti_numbers(fc.prefix(x), top);
            const auto brute = oracle::betti(gen::prefix_cells(fc, x), top);
            for (int k = 0; k <= top; ++k) {
                const long from_pd = betti_at(pds, k, x);
                if (from_pd != lib[static_cast<std::size_t>(k)] || from_pd != brute[static_cast<std::size_t>(k)])
                    o.fail("complex " + std::to_string(t) + ", t=" + fmt(x) + ", dim " + std::to_string(k));
            }
        }
    }
    if (o.ok)
        o.detail = std::to_string(trials) + " complexes, " + std::to_string(prefixes) + " prefixes";
    return o;
}

// --- Rips ------------------------------------------------------------------

Outcome rips_ground_truth()
{
    Outcome o;
    const PointCloud square({{0, 0}, {1, 0}, {1, 1}, {0, 1}});
    const auto pds = compute_persistence(rips_filtration(pairwise_distances(square), 2.0, 2), 1);
    if (pds[1].size() != 1 || pds[1].pairs[0].birth != 1.0 || pds[1].pairs[0].death != std::sqrt(2.0))
        o.fail("unit square PD1 is not {(1, sqrt 2)}");

    const auto eight = gen::figure_eight(40, 0.03, 8);
    const auto dm = pairwise_distances(eight);
    const auto fig = compute_persistence(rips_filtration(dm, 2.2, 2), 1);
    std::vector<double> lives;
    for (const auto& p : fig[1].pairs)
        lives.push_back(p.is_infinite() ? kInfinity : p.lifespan());
    std::sort(lives.rbegin(), lives.rend());
    while (lives.size() < 3)
        lives.push_back(0.0);
    if (!(lives[1] > 5.0 * lives[2]))
        o.fail("figure-eight lifespans " + fmt(lives[0]) + ", " + fmt(lives[1]) + ", " + fmt(lives[2]));
    if (o.ok)
        o.detail = "square PD1 = {(1, 1.414213562)}; figure-eight top H1 lifespans " + fmt(lives[0]) + ", " +
                   fmt(lives[1]) + ", third " + fmt(lives[2]);
    return o;
}

// --- metrics ----------------------------------------------------------------

Outcome metrics()
{
    Outcome o;
    auto pts = [](const PersistenceDiagram& d) {
        std::vector<oracle::Point> out;
        for (const auto& p : d.pairs)
            out.push_back({p.birth, p.death});
        return out;
    };
    std::mt19937 rng(200);
    const int pairs = 240;
    double worst = 0;
    for (int t = 0; t < pairs; ++t) {
        const auto a = gen::random_diagram(rng, 5);
        const auto b = gen::random_diagram(rng, 5);
        const auto c = gen::random_diagram(rng, 5);
        for (double p : {1.0, 2.0, kInfinity}) {
            const double ab = wasserstein_distance(a, b, p);
            const double err = std::abs(ab - oracle::exhaustive_wasserstein(pts(a), pts(b), p));
            worst = std::max(worst, err);
            if (err > 1e-9)
                o.fail("pair " + std::to_string(t) + " p=" + fmt(p) + " differs by " + fmt(err));
            if (ab < 0 || std::abs(ab - wasserstein_distance(b, a, p)) > 1e-12)
                o.fail("symmetry / non-negativity");
            if (wasserstein_distance(a, a, p) != 0.0)
                o.fail("identity");
            if (wasserstein_distance(a, c, p) > ab + wasserstein_distance(b, c, p) + 1e-9)
                o.fail("triangle inequality");
        }
    }
    PersistenceDiagram empty, one, two;
    one.add(0, 2);
    two.add(0, 4);
    if (bottleneck_distance(one, empty) != 1.0)
        o.fail("bottleneck({(0,2)}, {}) != 1");
    if (wasserstein_distance(one, two, 1) != 2.0)
        o.fail("W1({(0,2)}, {(0,4)}) != 2");
    if (o.ok)
        o.detail = std::to_string(pairs) + " pairs x p in {1,2,inf}, max error " + fmt(worst) + "; worked values 1 and 2";
    return o;
}

// --- vectorization ----------------------------------------------------------

double tent(double b, double d, double t) { return std::max(0.0, std::min(t - b, d - t)); }

Outcome vectorization()
{
    Outcome o;
    std::mt19937 rng(100);
    const auto grid = SampledFunction::uniform_grid(0, 7, 201);
    const int pairs = 120;
    double worst_mass = 0, worst_slack = 0;
    for (int t = 0; t < pairs; ++t) {
        auto a = gen::random_diagram(rng, 6);
        auto b = gen::random_diagram(rng, 6);
        const auto bc = betti_curve(a, grid);
        const auto pc = persistence_curve(a, CurveGenerator::Constant, CurveStatistic::Sum, grid);
        const auto l1 = landscape(a, 1, grid), l2 = landscape(a, 2, grid);
        const auto sil = silhouette(a, 1.7, grid);
        const auto lb = landscape(b, 1, grid);
        const double w = bottleneck_distance(a, b);
        double sup = 0;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            if (bc[i] != pc[i])
                o.fail("betti curve != constant/sum curve");
            if (l1[i] < l2[i])
                o.fail("landscape levels out of order");
            double env = 0;
            for (const auto& p : a.pairs)
                env = std::max(env, tent(p.birth, p.death, grid[i]));
            if (sil[i] > env + 1e-12 || sil[i] < 0)
                o.fail("silhouette outside the tent envelope");
            sup = std::max(sup, std::abs(l1[i] - lb[i]));
        }
        worst_slack = std::max(worst_slack, sup - w);
        if (sup > w + 1e-9)
            o.fail("landscape stability violated by " + fmt(sup - w));

        if (!a.empty()) {
            PersistenceImageParams params;
            params.sigma = 0.05 + 0.1 * static_cast<double>(t % 5);
            const double pad = 8 * params.sigma;
            double bmin = kInfinity, bmax = -kInfinity, pmax = 0, weights = 0;
            for (const auto& p : a.pairs) {
                bmin = std::min(bmin, p.birth);
                bmax = std::max(bmax, p.birth);
                pmax = std::max(pmax, p.lifespan());
                weights += p.lifespan();
            }
            params.bounds = ImageBounds{bmin - pad, bmax + pad, -pad, pmax + pad};
            params.birth_bins = 25;
            params.pers_bins = 25;
            const double err = std::abs(persistence_image(a, params).total() - weights);
            worst_mass = std::max(worst_mass, err);
            if (err > 1e-6)
                o.fail("persistence image mass off by " + fmt(err));
        }
    }
    if (o.ok)
        o.detail = std::to_string(pairs) + " diagram pairs; image mass error " + fmt(worst_mass) +
                   "; max (sup|l1a-l1b| - W_inf) " + fmt(worst_slack);
    return o;
}

// --- graph reductions -------------------------------------------------------

std::vector<PersistenceDiagram> degree_pd(const Graph& g, std::span<const Vertex> keep,
                                          std::span<const double> degree, std::span<const double> thresholds,
                                          int max_dim)
{
    std::vector<PersistenceDiagram> out(static_cast<std::size_t>(max_dim + 1));
    for (int k = 0; k <= max_dim; ++k)
        out[static_cast<std::size_t>(k)].dim = k;
    if (keep.empty())
        return out;
    Graph copy = g;
    std::vector<double> vals;
    for (Vertex v : keep)
        vals.push_back(degree[v]);
    copy.set_node_values(vals);
    out = compute_persistence(sublevel_node_filtration(copy, thresholds, max_dim + 1), max_dim);
    for (auto& pd : out)
        pd.canonicalize();
    return out;
}

Outcome graph_reductions()
{
    Outcome o;
    std::mt19937 rng(2020);
    const int graphs = 220;
    std::size_t removed_coral = 0, removed_prune = 0;
    for (int t = 0; t < graphs; ++t) {
        const std::size_t n = 2 + rng() % 19;
        const double p = 0.1 + 0.5 * static_cast<double>(rng() % 100) / 100.0;
        const Graph g = gen::random_graph(rng, n, p);
        const auto deg = node_filtration_values(g, NodeFunction::Degree);
        std::vector<double> th(deg);
        std::sort(th.begin(), th.end());
        th.erase(std::unique(th.begin(), th.end()), th.end());
        std::vector<Vertex> all(n);
        std::iota(all.begin(), all.end(), 0);
        const auto full = degree_pd(g, all, deg, th, 2);

        for (int k = 1; k <= 2; ++k) {
            const auto core = coral_reduce(g, k);
            removed_coral += n - core.original.size();
            const auto red = degree_pd(core.graph, core.original, deg, th, 2);
            for (int d = k; d <= 2; ++d)
                if (!(red[static_cast<std::size_t>(d)] == full[static_cast<std::size_t>(d)]))
                    o.fail("coral k=" + std::to_string(k) + " changed PD" + std::to_string(d) + " on graph " +
                           std::to_string(t));
        }
        const auto pruned = prune_dominated(g, order_by_value(deg));
        removed_prune += n - pruned.original.size();
        if (degree_pd(pruned.graph, pruned.original, deg, th, 2) != full)
            o.fail("PrunIT changed diagrams on graph " + std::to_string(t));
    }
    if (o.ok)
        o.detail = std::to_string(graphs) + " graphs (n <= 20); vertices removed: coral " +
                   std::to_string(removed_coral) + ", PrunIT " + std::to_string(removed_prune);
    return o;
}

// --- cubical ----------------------------------------------------------------

Outcome cubical_oracle()
{
    Outcome o;
    std::mt19937 rng(16);
    const int images = 120;
    std::size_t checks = 0;
    for (int t = 0; t < images && o.ok; ++t) {
        const unsigned levels = 2 + rng() % 255;  // few levels give large plateaus
        std::vector<double> v(256);
        for (auto& x : v)
            x = std::floor(static_cast<double>(rng() % levels) * 255.0 / (levels - 1 ? levels - 1 : 1));
        const GrayImage img(16, 16, v);
        const auto f = sublevel_filtration(img);
        const auto pds = compute_persistence(f.complex, 1);
        std::vector<double> th(v);
        std::sort(th.begin(), th.end());
        th.erase(std::unique(th.begin(), th.end()), th.end());
        for (double x : th) {
            std::vector<bool> mask(v.size());
            for (std::size_t i = 0; i < v.size(); ++i)
                mask[i] = v[i] <= x;
            ++checks;
            if (betti_at(pds, 0, x) != oracle::components8(mask, 16, 16))
                o.fail("image " + std::to_string(t) + " threshold " + fmt(x));
        }
    }
    if (o.ok)
        o.detail = std::to_string(images) + " 16x16 images, " + std::to_string(checks) + " thresholds";
    return o;
}

// --- multipersistence -------------------------------------------------------

Outcome multipersistence()
{
    Outcome o;
    std::mt19937 rng(44);
    const int trials = 100;
    for (int t = 0; t < trials && o.ok; ++t) {
        const std::size_t n = 3 + rng() % 10;
        const Graph g = gen::random_graph(rng, n, 0.2 + 0.06 * static_cast<double>(rng() % 10));
        std::vector<double> f(n), h(n);
        for (std::size_t v = 0; v < n; ++v) {
            f[v] = static_cast<double>(rng() % 4);
            h[v] = static_cast<double>(rng() % 4);
        }
        const std::vector<double> th{0, 1, 2, 3};
        const auto bf = graph_bifiltration(g, f, h, th, th);
        for (int dim = 0; dim <= 1; ++dim) {
            const auto tensor = bigraded_betti(bf, dim);
            const auto slices = slice_vectorize(bf, dim, {});
            for (std::size_t i = 0; i < 4; ++i)
                for (std::size_t j = 0; j < 4; ++j) {
                    std::vector<int> keep;
                    for (std::size_t v = 0; v < n; ++v)
                        if (f[v] <= th[i] && h[v] <= th[j])
                            keep.push_back(static_cast<int>(v));
                    const auto cells = oracle::cliques(
                        keep, [&](int a, int b) { return g.has_edge(static_cast<Vertex>(a), static_cast<Vertex>(b)); },
                        2);
                    const long brute = oracle::betti(cells, 1)[static_cast<std::size_t>(dim)];
                    if (tensor(i, j) != brute)
                        o.fail("tensor mismatch, trial " + std::to_string(t));
                    if (slices(i, j) != static_cast<double>(tensor(i, j)))
                        o.fail("slice_vectorize(betti) differs from the tensor, trial " + std::to_string(t));
                }
        }
    }
    if (o.ok)
        o.detail = std::to_string(trials) + " random 4x4 graph bifiltrations, dims 0 and 1";
    return o;
}

// --- Mapper -----------------------------------------------------------------

bool nerve_ok(const MapperGraph& g)
{
    std::vector<std::vector<std::size_t>> members;
    for (const auto& n : g.nodes)
        members.push_back(n.members);
    auto expect = oracle::nerve(members);
    std::vector<oracle::NerveEdge> got;
    for (const auto& e : g.edges)
        got.push_back({std::min(e.source, e.target), std::max(e.source, e.target), e.weight});
    std::sort(expect.begin(), expect.end());
    std::sort(got.begin(), got.end());
    return got == expect;
}

Outcome mapper()
{
    Outcome o;
    const auto circle = gen::circle(100, 0.02, 42);
    const auto x = lens(circle, LensSpec::parse("x"));
    ClusterSpec spec;
    spec.eps = 0.3;
    const auto g = mapper_pointcloud(circle, x, cover_for(x, 4, 0.25), spec);
    if (g.cycle_rank() != 1)
        o.fail("circle cycle rank " + std::to_string(g.cycle_rank()));
    if (g.nodes.size() < 4 || g.nodes.size() > 12)
        o.fail("circle node count " + std::to_string(g.nodes.size()));
    if (!nerve_ok(g))
        o.fail("circle nerve");

    const auto blobs = gen::blobs({{0, 0}, {4, 0}, {8, 1}, {2, 5}}, 40, 0.5, 2024);
    const auto bx = lens(blobs, LensSpec::parse("x"));
    ClusterSpec bspec;
    bspec.eps = 0.6;
    std::vector<std::size_t> counts;
    for (int n : {2, 4, 8, 16}) {
        const auto bg = mapper_pointcloud(blobs, bx, cover_for(bx, n, 0.25), bspec);
        if (!nerve_ok(bg))
            o.fail("blob nerve at n=" + std::to_string(n));
        counts.push_back(bg.nodes.size());
    }
    for (std::size_t i = 1; i < counts.size(); ++i)
        if (counts[i] < counts[i - 1])
            o.fail("blob node counts decrease");
    std::string series;
    for (auto c : counts)
        series += (series.empty() ? "" : ",") + std::to_string(c);
    if (o.ok)
        o.detail = "circle: " + std::to_string(g.nodes.size()) + " nodes, cycle rank 1; blob nodes over n=2,4,8,16: " +
                   series;
    return o;
}

// --- CLI round trip ---------------------------------------------------------

int run_cli(const std::string& args, const fs::path& stdout_file)
{
    const std::string cmd = std::string(TDAKIT_CLI_PATH) + " " + args + " > '" + stdout_file.string() + "' 2>/dev/null";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

Outcome cli_round_trip()
{
    Outcome o;
    const fs::path dir = fs::temp_directory_path() / "tdakit_acceptance_cli";
    fs::remove_all(dir);
    fs::create_directories(dir);
    const auto pc = gen::figure_eight(12, 0.02, 3);
    std::string csv = "x,y\n";
    for (std::size_t i = 0; i < pc.size(); ++i)
        csv += format_number(pc.coord(i, 0)) + "," + format_number(pc.coord(i, 1)) + "\n";
    write_text_file(dir / "pts.csv", csv);
    write_text_file(dir / "square.csv", "0,0\n1,0\n1,1\n0,1\n");

    std::vector<std::string> outputs;
    for (int rep = 0; rep < 2; ++rep) {
        const fs::path r = dir / ("run" + std::to_string(rep));
        fs::create_directories(r);
        const std::string p = "'" + (dir / "pts.csv").string() + "'";
        const std::string pd = "'" + (r / "pd.json").string() + "'";
        const std::string sq = "'" + (r / "sq.json").string() + "'";
        int code = run_cli("rips --input " + p + " --max-scale 2 --max-dim 1 --out " + pd, r / "o1");
        code |= run_cli("rips --input '" + (dir / "square.csv").string() + "' --out " + sq, r / "o2");
        code |= run_cli("vectorize --pd " + pd + " --method silhouette --p 2 --samples 100 --out '" +
                            (r / "vec.csv").string() + "'",
                        r / "o3");
        code |= run_cli("diagram-dist --a " + pd + " --b " + sq + " --p inf", r / "dist.txt");
        if (code != 0) {
            o.fail("a pipeline step exited non-zero");
            break;
        }
        outputs.push_back(read_text_file(r / "pd.json") + read_text_file(r / "vec.csv") +
                          read_text_file(r / "dist.txt"));

        const auto file = load_diagram_file(r / "pd.json");
        if (dump_json(to_json(file)) != read_text_file(r / "pd.json"))
            o.fail("diagram file does not round-trip byte for byte");
        const auto rows = parse_csv_rows(read_text_file(r / "vec.csv"));
        if (rows.size() != 1 || rows[0].size() != 200)
            o.fail("vector CSV has the wrong shape");
        else if (to_csv({TopologicalVector{rows[0], {}}}) != read_text_file(r / "vec.csv"))
            o.fail("vector CSV does not round-trip");
    }
    if (outputs.size() == 2 && outputs[0] != outputs[1])
        o.fail("repeated runs differ");
    fs::remove_all(dir);
    if (o.ok)
        o.detail = "rips -> vectorize -> diagram-dist twice, identical bytes; JSON and CSV round-trip";
    return o;
}

}  // namespace

int main()
{
    const std::vector<Criterion> criteria{
        {"worked-example fidelity", 1, worked_examples},
        {"persistence/Betti consistency oracle", 60, persistence_oracle},
        {"Rips ground truth", 10, rips_ground_truth},
        {"metric correctness", 30, metrics},
        {"vectorization identities", 30, vectorization},
        {"graph reductions", 60, graph_reductions},
        {"cubical oracle", 30, cubical_oracle},
        {"multipersistence oracle", 30, multipersistence},
        {"Mapper", 10, mapper},
        {"CLI round-trip", 5, cli_round_trip},
    };
    int failures = 0;
    for (const auto& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome out;
        try {
            out = c.run();
        } catch (const std::exception& e) {
            out.fail(std::string("exception: ") + e.what());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (out.ok && secs >= c.limit_seconds)
            out.fail("took " + fmt(secs) + " s");
        failures += out.ok ? 0 : 1;
        char timing[64];
        std::snprintf(timing, sizeof timing, "%.3f s, limit %.0f s", secs, c.limit_seconds);
        std::cout << (out.ok ? "PASS" : "FAIL") << "  " << c.name << "  [" << timing << "]  " << out.detail
                  << std::endl;
    }
    std::cout << (criteria.size() - static_cast<std::size_t>(failures)) << "/" << criteria.size()
              << " criteria passed" << std::endl;
    return failures == 0 ? 0 : 1;
}
