#include <catch_amalgamated.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <map>
#include <sstream>

#include <sys/wait.h>

#include "tdakit/io.hpp"
#include "tdakit/pipeline.hpp"

using namespace tdakit;
namespace fs = std::filesystem;
using Catch::Matchers::ContainsSubstring;

namespace {

struct Scratch {
    fs::path dir;

    Scratch()
    {
        dir = fs::temp_directory_path() / ("tdakit_cli_" + std::to_string(std::rand()));
        fs::create_directories(dir);
    }
    ~Scratch() { fs::remove_all(dir); }
    std::string operator/(const std::string& name) const { return (dir / name).string(); }
};

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run(const std::string& command, std::map<std::string, std::string> options)
{
    std::ostringstream out, err;
    const int code = run_pipeline({command, std::move(options)}, out, err);
    return {code, out.str(), err.str()};
}

int shell(const std::string& args)
{
    const int status = std::system((std::string(TDAKIT_CLI_PATH) + " " + args + " >/dev/null 2>&1").c_str());
    return WEXITSTATUS(status);
}

}  // namespace

TEST_CASE("rips writes dims 0 and 1", "[cli]")
{
    Scratch s;
    write_text_file(s / "pts.csv", "0,0\n1,0\n1,1\n0,1\n");
    auto r = run("rips", {{"input", s / "pts.csv"}, {"max-scale", "2"}, {"max-dim", "1"}, {"out", s / "pd.json"}});
    REQUIRE(r.code == kExitOk);
    auto pd = load_diagram_file(s / "pd.json");
    REQUIRE(pd.find(1) != nullptr);
    REQUIRE(pd.find(1)->size() == 1);
    CHECK(pd.find(1)->pairs[0].death == round9(std::sqrt(2.0)));
    CHECK(pd.meta.source == "pts.csv");
}

TEST_CASE("vectorize concatenates dimensions", "[cli]")
{
    Scratch s;
    write_text_file(s / "pts.csv", "0,0\n1,0\n1,1\n0,1\n3,3\n");
    REQUIRE(run("rips", {{"input", s / "pts.csv"}, {"out", s / "pd.json"}}).code == kExitOk);
    auto r = run("vectorize", {{"pd", s / "pd.json"}, {"method", "silhouette"}, {"p", "2"}, {"samples", "100"}});
    REQUIRE(r.code == kExitOk);
    auto rows = parse_csv_rows(r.out);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].size() == 200);

    auto img = run("vectorize", {{"pd", s / "pd.json"}, {"method", "image"}, {"resolution", "4x3"}, {"dims", "1"}});
    REQUIRE(img.code == kExitOk);
    CHECK(parse_csv_rows(img.out)[0].size() == 12);

    auto js = run("vectorize", {{"pd", s / "pd.json"}, {"method", "betti"}, {"samples", "5"}, {"format", "json"}});
    REQUIRE(js.code == kExitOk);
    CHECK(nlohmann::json::parse(js.out)["values"].size() == 10);
}

TEST_CASE("diagram-dist prints distances", "[cli]")
{
    Scratch s;
    write_text_file(s / "a.csv", "0,0\n1,0\n1,1\n0,1\n");
    write_text_file(s / "b.csv", "0,0\n2,0\n2,2\n0,2\n");
    REQUIRE(run("rips", {{"input", s / "a.csv"}, {"out", s / "a.json"}}).code == 0);
    REQUIRE(run("rips", {{"input", s / "b.csv"}, {"out", s / "b.json"}}).code == 0);
    auto r = run("diagram-dist", {{"a", s / "a.json"}, {"b", s / "b.json"}, {"p", "inf"}, {"dim", "1"}});
    REQUIRE(r.code == 0);
    // (1, 1.414) vs (2, 2.828): l-inf distance 1.414 against diagonal costs 0.207 + 0.414
    CHECK(std::stod(r.out) == Catch::Approx(std::sqrt(2.0) - 1.0).epsilon(1e-8));
    auto k = run("diagram-dist", {{"a", s / "a.json"}, {"b", s / "a.json"}, {"kernel", "pwgk"}, {"dim", "1"}});
    REQUIRE(k.code == 0);
    CHECK(std::stod(k.out) > 0);
}

TEST_CASE("validation errors exit with status 2", "[cli]")
{
    Scratch s;
    auto missing = run("rips", {{"input", s / "nope.csv"}, {"out", s / "pd.json"}});
    CHECK(missing.code == kExitValidation);
    CHECK_THAT(missing.err, ContainsSubstring("load"));

    auto unknown = run("rips", {{"input", "x"}, {"out", "y"}, {"bogus", "1"}});
    CHECK(unknown.code == kExitValidation);

    auto bad_p = run("diagram-dist", {{"a", "x"}, {"b", "y"}, {"p", "0.5"}});
    CHECK(bad_p.code == kExitValidation);
    CHECK_FALSE(fs::exists(s / "pd.json"));

    write_text_file(s / "ragged.csv", "0,0\n1\n");
    auto ragged = run("rips", {{"input", s / "ragged.csv"}, {"out", s / "pd.json"}});
    CHECK(ragged.code == kExitValidation);
    CHECK_THAT(ragged.err, ContainsSubstring("line 2"));
    CHECK(run("nonsense", {}).code == kExitValidation);
}

TEST_CASE("graph, cubical, power and multipers commands", "[cli]")
{
    Scratch s;
    write_text_file(s / "g.edges", "0 1\n1 2\n2 3\n3 0\n0 4\n");
    write_text_file(s / "img.pgm", "P2\n3 3\n255\n0 200 0\n200 200 200\n0 200 0\n");
    CHECK(run("graph-filt", {{"input", s / "g.edges"}, {"out", s / "g.json"}, {"reduce", "prunit"}}).code == 0);
    CHECK(run("graph-filt", {{"input", s / "g.edges"}, {"out", s / "g2.json"}, {"mode", "superlevel"}}).code == 0);
    CHECK_NOTHROW(load_diagram_file(s / "g2.json"));
    auto sup = run("diagram-dist", {{"a", s / "g2.json"}, {"b", s / "g2.json"}});
    CHECK(sup.code == 0);
    CHECK(run("power", {{"input", s / "g.edges"}, {"out", s / "p.json"}, {"max-hops", "2"}}).code == 0);
    CHECK(run("cubical", {{"input", s / "img.pgm"}, {"out", s / "c.json"}, {"mode", "superlevel"}}).code == 0);
    CHECK_NOTHROW(load_diagram_file(s / "c.json"));
    auto mp = run("multipers", {{"kind", "graph"}, {"input", s / "g.edges"}, {"rows", "3"}, {"cols", "3"}});
    REQUIRE(mp.code == 0);
    CHECK(nlohmann::json::parse(mp.out)["values"].size() == 3);
    auto mapper = run("mapper", {{"input", s / "g.edges"}, {"lens", "degree"}, {"resolution", "2"}});
    REQUIRE(mapper.code == 0);
    CHECK(nlohmann::json::parse(mapper.out)["nodes"].size() >= 2);
}

TEST_CASE("the executable parses its arguments", "[cli]")
{
    Scratch s;
    write_text_file(s / "pts.csv", "0,0\n1,0\n1,1\n0,1\n");
    CHECK(shell("rips --input " + (s / "pts.csv") + " --out " + (s / "pd.json")) == 0);
    CHECK(fs::exists(s / "pd.json"));
    CHECK(shell("rips --input " + (s / "pts.csv") + " --no-such-flag 1") == 2);
    CHECK(shell("") == 2);
    CHECK(shell("--help") == 0);
    CHECK(shell("mapper --input " + (s / "pts.csv") + " --overlap 1.5") == 2);
}
