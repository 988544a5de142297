#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "kslab/cli.hpp"
#include "kslab/ortho.hpp"
#include "kslab/rays.hpp"

using namespace kslab;
using nlohmann::json;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

} // namespace

TEST_CASE("catalog emit produces a readable ray set") {
    const auto r = run({"catalog", "emit", "cube13"});
    REQUIRE(r.code == cli::kOk);
    const RaySet rs = parse_rayset(r.out);
    CHECK(rs.size() == 13);

    const auto t = run({"catalog", "emit", "three-cubes", "--phase", "0.7"});
    REQUIRE(t.code == cli::kOk);
    const RaySet back = parse_rayset(t.out);
    const RaySet direct = three_cubes(CubePhase(0.7));
    REQUIRE(back.size() == 33);
    for (std::size_t i = 0; i < 33; ++i)
        for (std::size_t k = 0; k < 3; ++k)
            CHECK(std::abs(back[i][k] - direct[i][k]) < 1e-15);
}

TEST_CASE("graph output round-trips through the graph reader") {
    const auto r = run({"graph", "--set", "peres24"});
    REQUIRE(r.code == cli::kOk);
    CHECK(parse_graph(r.out) == ortho_graph(peres24()));
    const auto s = run({"graph", "--set", "cube13", "--summary"});
    CHECK(s.out.find("edges: 24") != std::string::npos);
    CHECK(s.out.find("complete bases: 4") != std::string::npos);
}

TEST_CASE("bounds on the pentagon") {
    const auto r = run({"bounds", "--set", "kcbs5", "--json"});
    REQUIRE(r.code == cli::kOk);
    const json j = json::parse(r.out);
    CHECK(j["alpha"] == 2);
    CHECK(j["theta"].get<double>() == doctest::Approx(std::sqrt(5.0)).epsilon(1e-6));
    CHECK(j["alpha_star"].get<double>() == doctest::Approx(2.5));
}

TEST_CASE("colour verdicts") {
    const auto three = run({"color", "--set", "three-cubes", "--phase", "0"});
    CHECK(three.code == cli::kOk);
    CHECK(three.out.rfind("UNCOLORABLE", 0) == 0);
    CHECK(three.out.find("certificate") != std::string::npos);

    const auto cube = run({"color", "--set", "cube13", "--json"});
    const json j = json::parse(cube.out);
    CHECK(j["verdict"] == "COLORABLE");
    CHECK(j["witness"].get<std::string>().size() == 13);

    const auto ceg = run({"color", "--set", "ceg18"});
    CHECK(ceg.out.find("parity") != std::string::npos);
}

TEST_CASE("graph files feed the colour and bounds commands") {
    const auto path = std::filesystem::temp_directory_path() / "kslab_cli_graph.json";
    std::ofstream(path) << graph_to_json(cycle_graph(5, 3));
    const auto r = run({"bounds", "--graph", path.string(), "--json"});
    REQUIRE(r.code == cli::kOk);
    CHECK(json::parse(r.out)["alpha"] == 2);
    CHECK(run({"color", "--graph", path.string()}).out.rfind("COLORABLE", 0) == 0);
}

TEST_CASE("stochastic commands echo their seed and repeat byte for byte") {
    const std::vector<std::vector<std::string>> cmds = {
        {"platter", "--strategy", "quantum", "--trials", "20000", "--seed", "5", "--json"},
        {"measure", "fraction", "--field", "complex", "--dim", "4", "--mc", "20000", "--seed", "5",
         "--json"},
        {"measure", "bases", "--dim", "4", "--mc", "5000", "--seed", "5", "--json"},
        {"measure", "validity", "--field", "real", "--dim", "4", "--mc", "5000", "--seed", "5",
         "--json"},
        {"measure", "separable", "--mc", "5000", "--seed", "5", "--json"}};
    for (const auto &c : cmds) {
        const auto a = run(c);
        const auto b = run(c);
        REQUIRE(a.code == cli::kOk);
        CHECK(a.out == b.out);
        CHECK(a.out.find("\"seed\": 5") != std::string::npos);
    }
}

TEST_CASE("csv scans") {
    const auto r = run({"measure", "fraction", "--field", "complex", "--csv", "--from", "2", "--to", "12"});
    REQUIRE(r.code == cli::kOk);
    std::istringstream in(r.out);
    std::string line;
    std::getline(in, line);
    CHECK(line == "dim,closed_form");
    int rows = 0;
    while (std::getline(in, line))
        ++rows;
    CHECK(rows == 11);
}

TEST_CASE("invalid input exits with code 2") {
    CHECK(run({}).code == cli::kInvalidInput);
    CHECK(run({"bogus"}).code == cli::kInvalidInput);
    CHECK(run({"color", "--set", "nope"}).code == cli::kInvalidInput);
    CHECK(run({"color", "--graph", "/nonexistent/g.json"}).code == cli::kInvalidInput);
    CHECK(run({"measure", "fraction", "--dim", "1"}).code == cli::kInvalidInput);
    CHECK(run({"platter", "--strategy", "classical", "--stones", "11000"}).code == cli::kInvalidInput);
    const auto r = run({"measure", "fraction", "--mc", "10"});
    CHECK(r.code == cli::kInvalidInput);
    CHECK(!r.err.empty());
}
