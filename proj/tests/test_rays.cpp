#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <set>

#include "kslab/errors.hpp"
#include "kslab/ortho.hpp"
#include "kslab/rays.hpp"
#include "kslab/rng.hpp"

using namespace kslab;

namespace {

const double kS2 = std::sqrt(2.0);

bool matches_pattern(const Ray &r) {
    // Proportional to a vector over {0, +-1, +-sqrt2}: try both possible
    // scales implied by the smallest non-zero entry.
    double smallest = 1e9;
    for (const auto &c : r.components()) {
        if (std::abs(c.imag()) > 1e-12)
            return false;
        if (std::abs(c) > 1e-12)
            smallest = std::min(smallest, std::abs(c.real()));
    }
    for (double scale : {smallest, smallest / kS2}) {
        bool ok = true;
        for (const auto &c : r.components()) {
            const double q = std::abs(c.real()) / scale;
            ok = ok && (q < 1e-9 || std::abs(q - 1.0) < 1e-9 || std::abs(q - kS2) < 1e-9);
        }
        if (ok)
            return true;
    }
    return false;
}

std::string write_temp(const std::string &name, const std::string &text) {
    const auto path = std::filesystem::temp_directory_path() / name;
    std::ofstream(path) << text;
    return path.string();
}

} // namespace

TEST_CASE("canonicalize fixes norm and phase") {
    const Ray a = real_ray({0, 2, 0});
    CHECK(a[0] == Complex(0, 0));
    CHECK(a[1].real() == doctest::Approx(1.0));

    const Ray b = canonicalize({Complex(0, 1), 0, 0}, Field::Complex);
    CHECK(std::abs(b[0] - Complex(1, 0)) < 1e-15);

    const Ray c = real_ray({1, 1, 0});
    CHECK(c[0].real() == doctest::Approx(1 / kS2));
    CHECK(c[1].real() == doctest::Approx(1 / kS2));

    const Ray d = real_ray({0, -3, 4});
    CHECK(d[1].real() == doctest::Approx(0.6));
    CHECK(d[2].real() == doctest::Approx(-0.8));
}

TEST_CASE("canonicalize rejects bad input") {
    CHECK_THROWS_AS(real_ray({0, 0, 0}), ZeroVector);
    CHECK_THROWS_AS(real_ray({1e-13, 0, 0}), ZeroVector);
    CHECK_THROWS_AS(canonicalize({Complex(1, 0), Complex(0, 1)}, Field::Real), FieldMismatch);
    CHECK_THROWS_AS(real_ray({1}), InvariantViolation);
}

TEST_CASE("canonicalize is idempotent and phase blind on random vectors") {
    StreamRng rng(7, 0);
    std::normal_distribution<double> normal;
    double worst = 0.0;
    for (int t = 0; t < 10000; ++t) {
        std::vector<Complex> v(3 + t % 4);
        for (auto &x : v)
            x = {normal(rng), normal(rng)};
        const Ray r = canonicalize(v, Field::Complex);
        const Ray again = canonicalize(r.components(), Field::Complex);
        const Complex phase = std::polar(1.0, 2 * std::numbers::pi * rng.uniform());
        for (auto &x : v)
            x *= phase;
        const Ray rotated = canonicalize(v, Field::Complex);
        for (std::size_t i = 0; i < r.dimension(); ++i) {
            worst = std::max(worst, std::abs(r[i] - again[i]));
            CHECK(std::abs(r[i] - rotated[i]) < 1e-12);
        }
    }
    CHECK(worst <= 1e-15);
}

TEST_CASE("cube13 consists of face, edge and diagonal rays") {
    const RaySet rs = cube13();
    CHECK(rs.size() == 13);
    CHECK(rs.dimension() == 3);
    int face = 0, edge = 0, diag = 0;
    for (const auto &r : rs) {
        int nz = 0;
        for (const auto &c : r.components())
            nz += std::abs(c) > 1e-12;
        face += nz == 1;
        edge += nz == 2;
        diag += nz == 3;
    }
    CHECK(face == 3);
    CHECK(edge == 6);
    CHECK(diag == 4);
}

TEST_CASE("peres24 splits into two triples of mutually unbiased bases") {
    const RaySet rs = peres24();
    CHECK(rs.size() == 24);
    CHECK(rs.dimension() == 4);
    const auto parts = unbiased_basis_partition(rs, 3);
    REQUIRE(parts.has_value());
    REQUIRE(parts->size() == 2);
    std::set<std::size_t> seen;
    for (const auto &group : *parts) {
        REQUIRE(group.size() == 3);
        for (std::size_t a = 0; a < 3; ++a) {
            for (auto i : group[a])
                seen.insert(i);
            for (std::size_t b = a + 1; b < 3; ++b)
                for (auto i : group[a])
                    for (auto j : group[b])
                        CHECK(std::norm(inner(rs[i], rs[j])) == doctest::Approx(0.25).epsilon(1e-12));
        }
    }
    CHECK(seen.size() == 24);
}

TEST_CASE("three cubes: counts and intercube orthogonalities") {
    for (double phi : {0.0, 0.3, std::numbers::pi / 2, 2 * std::numbers::pi / 3, 1.7}) {
        CAPTURE(phi);
        const RaySet rs = three_cubes(CubePhase(phi));
        CHECK(rs.size() == 33);
        CHECK(rs.field() == Field::Complex);
        const auto mask = cube_membership(rs);
        int shared = 0, in1 = 0, new2 = 0, new3 = 0;
        for (auto m : mask) {
            shared += m == 7u;
            in1 += (m & 1u) != 0;
            new2 += (m & 2u) && !(m & 1u);
            new3 += (m & 4u) && !(m & 1u);
        }
        CHECK(shared == 3);
        CHECK(in1 == 13);
        CHECK(new2 == 10);
        CHECK(new3 == 10);

        int cross = 0;
        for (std::size_t i = 0; i < rs.size(); ++i)
            for (std::size_t j = i + 1; j < rs.size(); ++j)
                if (std::abs(inner(rs[i], rs[j])) < kOrthoTol && (mask[i] & mask[j]) == 0)
                    ++cross;
        CHECK(cross == 6);
    }
}

TEST_CASE("three cubes: orthogonality graph does not depend on the phase") {
    const OrthoGraph g0 = ortho_graph(three_cubes(CubePhase(0.0)));
    for (double phi : {0.3, std::numbers::pi / 2, 2 * std::numbers::pi / 3, 1.7})
        CHECK(ortho_graph(three_cubes(CubePhase(phi))) == g0);
}

TEST_CASE("three cubes at phase zero uses 0, 1 and sqrt2 patterns") {
    const RaySet rs = three_cubes(CubePhase(0.0));
    for (const auto &r : rs)
        CHECK(matches_pattern(r));
}

TEST_CASE("cube phase wraps into [0, 2pi)") {
    CHECK(CubePhase(-0.5).value() == doctest::Approx(2 * std::numbers::pi - 0.5));
    CHECK(CubePhase(2 * std::numbers::pi).value() == doctest::Approx(0.0));
}

TEST_CASE("kcbs5 rays are unit vectors forming a pentagon") {
    const RaySet rs = kcbs5();
    CHECK(rs.size() == 5);
    for (std::size_t k = 0; k < 5; ++k) {
        CHECK(std::abs(inner(rs[k], rs[k])) == doctest::Approx(1.0).epsilon(1e-15));
        CHECK(std::abs(inner(rs[k], rs[(k + 1) % 5])) < 1e-12);
        CHECK(std::abs(inner(rs[k], rs[(k + 2) % 5])) > 0.1);
    }
}

TEST_CASE("ray-set files") {
    SUBCASE("standard basis") {
        const auto p = write_temp("kslab_basis.json",
                                  R"({"dimension":3,"field":"real","rays":[[[1,0],[0,0],[0,0]],)"
                                  R"([[0,0],[1,0],[0,0]],[[0,0],[0,0],[1,0]]]})");
        CHECK(load_rayset(p).size() == 3);
    }
    SUBCASE("zero vector") {
        const auto p = write_temp("kslab_zero.json",
                                  R"({"dimension":3,"field":"real","rays":[[[1,0],[0,0],[0,0]],)"
                                  R"([[0,0],[0,0],[0,0]]]})");
        try {
            load_rayset(p);
            FAIL("expected InvariantViolation");
        } catch (const InvariantViolation &e) {
            CHECK(e.index == 1);
        }
    }
    SUBCASE("duplicate ray") {
        const auto p = write_temp("kslab_dup.json",
                                  R"({"dimension":2,"field":"real","rays":[[[1,0],[1,0]],[[-2,0],[-2,0]]]})");
        CHECK_THROWS_AS(load_rayset(p), InvariantViolation);
    }
    SUBCASE("dimension mismatch") {
        const auto p = write_temp("kslab_dim.json",
                                  R"({"dimension":3,"field":"real","rays":[[[1,0],[0,0]]]})");
        CHECK_THROWS_AS(load_rayset(p), InvariantViolation);
    }
    SUBCASE("malformed") {
        CHECK_THROWS_AS(parse_rayset("{not json"), ParseError);
        CHECK_THROWS_AS(parse_rayset(R"({"dimension":3})"), ParseError);
        CHECK_THROWS_AS(load_rayset("/nonexistent/kslab.json"), ParseError);
    }
    SUBCASE("round trip") {
        const RaySet rs = three_cubes(CubePhase(0.4));
        const RaySet back = parse_rayset(rayset_to_json(rs));
        REQUIRE(back.size() == rs.size());
        for (std::size_t i = 0; i < rs.size(); ++i)
            for (std::size_t k = 0; k < 3; ++k)
                CHECK(std::abs(back[i][k] - rs[i][k]) < 1e-15);
        CHECK(back.labels()[5] == rs.labels()[5]);
    }
}

TEST_CASE("transcribed CEG-18 set: nine bases, every ray in two") {
    const RaySet rs = load_rayset(std::string(KSLAB_DATA_DIR) + "/ceg18.json");
    CHECK(rs.size() == 18);
    CHECK(rs.dimension() == 4);
    const auto bases = complete_bases(ortho_graph(rs)).bases;
    CHECK(bases.size() == 9);
    std::vector<int> hits(18, 0);
    for (const auto &b : bases)
        for (auto i : b)
            ++hits[i];
    for (int h : hits)
        CHECK(h == 2);
}
