#include "doctest.h"

#include <numbers>
#include <string>

#include "kslab/errors.hpp"
#include "kslab/kscolor.hpp"
#include "kslab/rng.hpp"

using namespace kslab;

namespace {

Coloring from_mask(std::size_t n, std::uint64_t mask) {
    Coloring c;
    for (std::size_t i = 0; i < n; ++i)
        c.assignment.push_back((mask >> i & 1u) ? Colour::Red : Colour::Green);
    return c;
}

// Direct check of both rules on every one of the 2^n assignments.
std::uint64_t brute_count(const OrthoGraph &g, const BasisList &bases) {
    const std::size_t n = g.size();
    const auto edges = g.edges();
    std::uint64_t count = 0;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
        bool ok = true;
        for (auto [i, j] : edges)
            ok = ok && !((mask >> i & 1u) && (mask >> j & 1u));
        for (const auto &b : bases.bases) {
            int reds = 0;
            for (auto v : b)
                reds += static_cast<int>(mask >> v & 1u);
            ok = ok && reds == 1;
        }
        count += ok;
    }
    return count;
}

OrthoGraph random_graph(std::size_t n, double p, std::uint64_t seed) {
    StreamRng rng(seed, 1);
    std::vector<Edge> edges;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (rng.uniform() < p)
                edges.emplace_back(i, j);
    return OrthoGraph(n, 3, edges);
}

KSVerdict solve(const RaySet &rs) {
    const OrthoGraph g = ortho_graph(rs);
    return ks_solve(g, complete_bases(g));
}

RaySet ceg18() { return load_rayset(std::string(KSLAB_DATA_DIR) + "/ceg18.json"); }

} // namespace

TEST_CASE("verify_coloring on a single basis") {
    const auto tri = complete_graph(3, 3);
    const auto bases = complete_bases(tri);
    CHECK(verify_coloring(tri, bases, from_mask(3, 0b010)).ok);

    const auto none = verify_coloring(tri, bases, from_mask(3, 0));
    CHECK(!none.ok);
    CHECK(none.bad_basis == std::optional<std::size_t>(0));

    const auto two = verify_coloring(tri, bases, from_mask(3, 0b011));
    CHECK(!two.ok);
    REQUIRE(two.red_edge.has_value());
    CHECK(*two.red_edge == Edge{0, 1});

    const auto edge = OrthoGraph(2, 3, {{0, 1}});
    CHECK(!verify_coloring(edge, {}, from_mask(2, 0b11)).ok);
}

TEST_CASE("count_colorings small cases") {
    const auto tri = complete_graph(3, 3);
    CHECK(count_colorings(tri, complete_bases(tri)) == 3);
    CHECK(count_colorings(empty_graph(2, 3), {}) == 4);
    const OrthoGraph g = ortho_graph(ceg18());
    CHECK(count_colorings(g, complete_bases(g)) == 0);
    CHECK_THROWS_AS(count_colorings(empty_graph(37, 3), {}), TooLarge);
}

TEST_CASE("count_colorings matches exhaustive enumeration") {
    const OrthoGraph cube = ortho_graph(cube13());
    CHECK(count_colorings(cube, complete_bases(cube)) == brute_count(cube, complete_bases(cube)));
    const OrthoGraph ceg = ortho_graph(ceg18());
    CHECK(brute_count(ceg, complete_bases(ceg)) == 0);
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        const auto g = random_graph(8 + seed % 7, 0.45, seed);
        const auto bases = complete_bases(g);
        CAPTURE(seed);
        const auto expected = brute_count(g, bases);
        CHECK(count_colorings(g, bases) == expected);
        const auto verdict = ks_solve(g, bases);
        CHECK(is_colorable(verdict) == (expected > 0));
        if (const auto *c = std::get_if<Colorable>(&verdict))
            CHECK(verify_coloring(g, bases, c->witness).ok);
    }
}

TEST_CASE("catalog verdicts") {
    const auto cube = solve(cube13());
    REQUIRE(is_colorable(cube));
    const OrthoGraph g = ortho_graph(cube13());
    CHECK(verify_coloring(g, complete_bases(g), std::get<Colorable>(cube).witness).ok);

    CHECK(!is_colorable(solve(peres24())));
    CHECK(!is_colorable(solve(three_cubes(CubePhase(0.0)))));
    CHECK(!is_colorable(solve(three_cubes(CubePhase(2 * std::numbers::pi / 3)))));

    const auto ceg = solve(ceg18());
    REQUIRE(!is_colorable(ceg));
    const auto &cert = std::get<Uncolorable>(ceg).certificate;
    REQUIRE(std::holds_alternative<ParityCertificate>(cert));
    const auto &parity = std::get<ParityCertificate>(cert);
    CHECK(parity.basis_count == 9);
    CHECK(parity.valid());
    for (auto k : parity.incidence_counts)
        CHECK(k == 2);

    const auto tri = complete_graph(3, 3);
    const auto single = ks_solve(tri, complete_bases(tri));
    REQUIRE(is_colorable(single));
    CHECK(std::get<Colorable>(single).witness.red_count() == 1);

    const auto pent = solve(kcbs5());
    CHECK(is_colorable(pent));
}

TEST_CASE("parity certificates are arithmetically sound") {
    ParityCertificate bad{9, {2, 2, 3}};
    CHECK(!bad.valid());
    ParityCertificate even{8, {2, 2}};
    CHECK(!even.valid());
    // Peres' set has 24 bases, so the parity argument cannot apply.
    const OrthoGraph g = ortho_graph(peres24());
    CHECK(!parity_certificate(g, complete_bases(g)).has_value());
    const auto verdict = ks_solve(g, complete_bases(g));
    const auto &cert = std::get<Uncolorable>(verdict).certificate;
    REQUIRE(std::holds_alternative<ExhaustionProof>(cert));
    CHECK(std::get<ExhaustionProof>(cert).nodes > 0);
}

TEST_CASE("ks_solve is deterministic") {
    for (const RaySet &rs : {cube13(), peres24(), three_cubes(CubePhase(0.0)), kcbs5()}) {
        const auto a = solve(rs);
        const auto b = solve(rs);
        REQUIRE(a.index() == b.index());
        if (is_colorable(a))
            CHECK(std::get<Colorable>(a).witness == std::get<Colorable>(b).witness);
        else
            CHECK(std::get<Uncolorable>(a).certificate.index() ==
                  std::get<Uncolorable>(b).certificate.index());
    }
}
