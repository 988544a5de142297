#include "kslab/measure.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <boost/math/special_functions/beta.hpp>

#include "kslab/errors.hpp"

namespace kslab {

std::string_view to_string(Region r) {
    switch (r) {
    case Region::Red:
        return "red";
    case Region::Green:
        return "green";
    default:
        return "uncolored";
    }
}

Region RegionColoring::classify(const Ray &ray) const {
    if (ray.dimension() != dimension)
        throw InvariantViolation(0, "ray dimension does not match the colouring");
    if (field == Field::Real) {
        const double x0 = std::abs(ray[0].real());
        if (x0 > std::sqrt(0.5))
            return Region::Red;
        if (x0 < 1.0 / std::sqrt(static_cast<double>(dimension)))
            return Region::Green;
        return Region::Uncolored;
    }
    const double p0 = ray.weight(0);
    if (p0 > 0.5)
        return Region::Red;
    if (p0 < 1.0 / static_cast<double>(dimension))
        return Region::Green;
    return Region::Uncolored;
}

Region classify(const RegionColoring &rc, const Ray &ray) { return rc.classify(ray); }

double colored_fraction_complex(std::size_t n) {
    if (n < 2)
        throw InvariantViolation(n, "dimension must be at least 2");
    const double nn = static_cast<double>(n);
    return 1.0 - std::pow(1.0 - 1.0 / nn, nn - 1.0) + std::pow(0.5, nn - 1.0);
}

double colored_fraction_real(std::size_t d) {
    if (d < 2)
        throw InvariantViolation(d, "dimension must be at least 2");
    const double b = 0.5 * (static_cast<double>(d) - 1.0);
    const double cap = boost::math::ibetac(0.5, b, 0.5);
    const double belt = boost::math::ibeta(0.5, b, 1.0 / static_cast<double>(d));
    return cap + belt;
}

Complex RaySampler::draw(StreamRng &rng) {
    const double re = normal_(rng);
    const double im = field_ == Field::Complex ? normal_(rng) : 0.0;
    return {re, im};
}

Ray RaySampler::sample(StreamRng &rng) {
    std::vector<Complex> v(d_);
    for (auto &c : v)
        c = draw(rng);
    return canonicalize(v, field_);
}

CMatrix RaySampler::sample_basis(StreamRng &rng) {
    const auto d = static_cast<Eigen::Index>(d_);
    CMatrix q(d, d);
    for (Eigen::Index c = 0; c < d; ++c)
        for (Eigen::Index r = 0; r < d; ++r)
            q(r, c) = draw(rng);
    // Modified Gram-Schmidt; the implicit R has a positive diagonal, which
    // makes q exactly Haar-distributed.
    for (Eigen::Index c = 0; c < d; ++c) {
        for (Eigen::Index p = 0; p < c; ++p)
            q.col(c) -= q.col(p) * q.col(p).dot(q.col(c));
        q.col(c) /= q.col(c).norm();
    }
    return q;
}

Ray sample_ray(Field field, std::size_t d, StreamRng &rng) { return RaySampler(field, d).sample(rng); }

namespace {

struct Proportion {
    std::uint64_t hits = 0;
    std::uint64_t total = 0;

    Proportion &operator+=(const Proportion &o) {
        hits += o.hits;
        total += o.total;
        return *this;
    }

    MCEstimate estimate(std::uint64_t seed) const {
        MCEstimate e;
        e.samples = total;
        e.seed = seed;
        if (total == 0)
            return e;
        const double p = static_cast<double>(hits) / static_cast<double>(total);
        e.value = p;
        e.std_error = std::sqrt(p * (1.0 - p) / static_cast<double>(total));
        return e;
    }
};

constexpr std::uint64_t kMinSamples = 1000;

void require_samples(std::uint64_t samples) {
    if (samples < kMinSamples)
        throw InvariantViolation(samples, "Monte Carlo runs need at least 1000 samples");
}

Ray column_ray(const CMatrix &q, Eigen::Index c, Field field) {
    std::vector<Complex> v(q.col(c).begin(), q.col(c).end());
    if (field == Field::Real)
        for (auto &x : v)
            x = Complex(x.real(), 0.0);
    return canonicalize(v, field);
}

} // namespace

MCEstimate mc_colored_fraction(Field field, std::size_t d, std::uint64_t samples,
                               std::uint64_t seed) {
    require_samples(samples);
    const RegionColoring rc{field, d};
    const auto p = run_chunked<Proportion>(samples, seed, [&](StreamRng &rng, std::uint64_t count) {
        RaySampler sampler(field, d);
        Proportion out;
        for (std::uint64_t k = 0; k < count; ++k)
            out.hits += rc.classify(sampler.sample(rng)) != Region::Uncolored;
        out.total = count;
        return out;
    });
    return p.estimate(seed);
}

ValidityCounts &ValidityCounts::operator+=(const ValidityCounts &o) {
    red_pairs += o.red_pairs;
    green_bases += o.green_bases;
    samples += o.samples;
    return *this;
}

ValidityCounts region_validity_mc(Field field, std::size_t d, std::uint64_t samples,
                                  std::uint64_t seed) {
    require_samples(samples);
    const RegionColoring rc{field, d};
    return run_chunked<ValidityCounts>(samples, seed, [&](StreamRng &rng, std::uint64_t count) {
        RaySampler sampler(field, d);
        ValidityCounts out;
        std::vector<Region> regions(d);
        for (std::uint64_t k = 0; k < count; ++k) {
            const CMatrix q = sampler.sample_basis(rng);
            bool all_green = true;
            for (std::size_t c = 0; c < d; ++c) {
                regions[c] = rc.classify(column_ray(q, static_cast<Eigen::Index>(c), field));
                all_green = all_green && regions[c] == Region::Green;
            }
            for (std::size_t a = 0; a < d; ++a)
                for (std::size_t b = a + 1; b < d; ++b)
                    out.red_pairs += regions[a] == Region::Red && regions[b] == Region::Red;
            out.green_bases += all_green;
        }
        out.samples = count;
        return out;
    });
}

MCEstimate basis_colored_fraction_mc(std::size_t d, std::uint64_t samples, std::uint64_t seed) {
    if (d < 2)
        throw InvariantViolation(d, "dimension must be at least 2");
    require_samples(samples);
    const RegionColoring rc{Field::Real, d};
    const auto p = run_chunked<Proportion>(samples, seed, [&](StreamRng &rng, std::uint64_t count) {
        RaySampler sampler(Field::Real, d);
        Proportion out;
        for (std::uint64_t k = 0; k < count; ++k) {
            const CMatrix q = sampler.sample_basis(rng);
            std::size_t reds = 0;
            bool coloured = true;
            for (std::size_t c = 0; c < d; ++c) {
                const Region r = rc.classify(column_ray(q, static_cast<Eigen::Index>(c), Field::Real));
                reds += r == Region::Red;
                coloured = coloured && r != Region::Uncolored;
            }
            if (coloured) {
                if (reds != 1)
                    throw std::logic_error("fully coloured basis with " + std::to_string(reds) +
                                           " red members");
                ++out.hits;
            }
        }
        out.total = count;
        return out;
    });
    return p.estimate(seed);
}

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap_phase(double phi) {
    double p = std::fmod(phi, kTwoPi);
    if (p < 0.0)
        p += kTwoPi;
    if (p >= kTwoPi)
        p = 0.0;
    return p;
}

bool is_pole(double theta) { return theta == 0.0 || theta == std::numbers::pi; }

std::array<Complex, 2> qubit(double theta, double phi) {
    return {Complex(std::cos(0.5 * theta), 0.0), std::polar(std::sin(0.5 * theta), phi)};
}

} // namespace

SeparableState SeparableState::make(double theta_a, double phi_a, double theta_b, double phi_b) {
    SeparableState s{theta_a, wrap_phase(phi_a), theta_b, wrap_phase(phi_b)};
    if (is_pole(theta_a))
        s.phi_a = 0.0;
    if (is_pole(theta_b))
        s.phi_b = 0.0;
    return s;
}

std::string_view to_string(Quadrant q) {
    switch (q) {
    case Quadrant::I:
        return "I";
    case Quadrant::II:
        return "II";
    case Quadrant::III:
        return "III";
    default:
        return "IV";
    }
}

Quadrant separable_quadrant(const SeparableState &s) {
    const bool upper_a = s.phi_a >= std::numbers::pi;
    const bool upper_b = s.phi_b >= std::numbers::pi;
    if (!upper_a)
        return upper_b ? Quadrant::II : Quadrant::I;
    return upper_b ? Quadrant::IV : Quadrant::III;
}

Ray separable_ray(const SeparableState &s) {
    const auto a = qubit(s.theta_a, s.phi_a);
    const auto b = qubit(s.theta_b, s.phi_b);
    std::vector<Complex> v{a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1]};
    return canonicalize(v, Field::Complex);
}

bool on_chart_pole(const SeparableState &s) { return is_pole(s.theta_a) || is_pole(s.theta_b); }

std::pair<double, double> orthogonal_qubit(double theta, double phi) {
    return {std::numbers::pi - theta, wrap_phase(phi + std::numbers::pi)};
}

std::pair<SeparableState, SeparableState> pole_counterexample(double theta_chi, double phi_chi) {
    return {SeparableState::make(0.0, 0.0, theta_chi, phi_chi),
            SeparableState::make(std::numbers::pi, 0.0, theta_chi, phi_chi)};
}

SeparableValidity &SeparableValidity::operator+=(const SeparableValidity &o) {
    violations += o.violations;
    pairs += o.pairs;
    samples += o.samples;
    return *this;
}

SeparableValidity separable_validity_mc(std::uint64_t samples, std::uint64_t seed) {
    require_samples(samples);
    auto result = run_chunked<SeparableValidity>(samples, seed, [](StreamRng &rng,
                                                                    std::uint64_t count) {
        // Uniform on the Bloch sphere, redrawn if a pole comes up exactly.
        auto bloch = [&rng]() {
            double theta = 0.0;
            do {
                theta = std::acos(1.0 - 2.0 * rng.uniform());
            } while (is_pole(theta));
            return std::pair{theta, kTwoPi * rng.uniform()};
        };
        SeparableValidity out;
        for (std::uint64_t k = 0; k < count; ++k) {
            const auto [ta, pa] = bloch();
            const auto [tb, pb] = bloch();
            const auto [tc, pc] = bloch();
            const auto [td, pd] = bloch();
            const auto s = SeparableState::make(ta, pa, tb, pb);
            const auto [ta_perp, pa_perp] = orthogonal_qubit(ta, pa);
            const auto [tb_perp, pb_perp] = orthogonal_qubit(tb, pb);
            const SeparableState partners[2] = {SeparableState::make(ta_perp, pa_perp, tc, pc),
                                                SeparableState::make(td, pd, tb_perp, pb_perp)};
            const Ray u = separable_ray(s);
            for (const auto &t : partners) {
                if (std::abs(inner(u, separable_ray(t))) > kOrthoTol)
                    throw std::logic_error("separable partner is not orthogonal");
                ++out.pairs;
                out.violations += separable_quadrant(s) == separable_quadrant(t);
            }
        }
        out.samples = count;
        return out;
    });
    result.seed = seed;
    return result;
}

} // namespace kslab
