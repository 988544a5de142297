#pragma once

#include <cstdint>
#include <random>
#include <utility>

#include "kslab/linalg.hpp"
#include "kslab/rays.hpp"
#include "kslab/rng.hpp"

namespace kslab {

enum class Region { Red, Green, Uncolored };

std::string_view to_string(Region r);

/// Cap-and-belt partial colouring of the rays of a d-dimensional space:
/// Red on the open polar cap p_0 > 1/2, Green on the open belt p_0 < 1/d,
/// where p_0 is the squared modulus of the first component.
struct RegionColoring {
    Field field = Field::Real;
    std::size_t dimension = 3;

    Region classify(const Ray &ray) const;
};

Region classify(const RegionColoring &rc, const Ray &ray);

/// Fubini-Study volume of the coloured region in C^N:
/// 1 - (1 - 1/N)^(N-1) + (1/2)^(N-1).
double colored_fraction_complex(std::size_t n);

/// Fraction of the real sphere S^(d-1) that the cap and belt cover, from
/// the regularized incomplete beta function (x_0^2 ~ Beta(1/2, (d-1)/2)).
double colored_fraction_real(std::size_t d);

/// Proportion estimate with its binomial standard error.
struct MCEstimate {
    double value = 0.0;
    double std_error = 0.0;
    std::uint64_t samples = 0;
    std::uint64_t seed = 0;
};

/// Draws Gaussian components; holds the normal distribution state.
class RaySampler {
  public:
    RaySampler(Field field, std::size_t dimension) : field_(field), d_(dimension) {}

    /// Uniform on S^(d-1) (real) or Fubini-Study uniform (complex).
    Ray sample(StreamRng &rng);

    /// d x d matrix whose columns form a Haar-random orthonormal basis
    /// (Gram-Schmidt on a Gaussian matrix).
    CMatrix sample_basis(StreamRng &rng);

  private:
    Complex draw(StreamRng &rng);

    Field field_;
    std::size_t d_;
    std::normal_distribution<double> normal_;
};

Ray sample_ray(Field field, std::size_t d, StreamRng &rng);

/// Fraction of sampled rays that are Red or Green. Throws InvariantViolation
/// for samples < 1000.
MCEstimate mc_colored_fraction(Field field, std::size_t d, std::uint64_t samples,
                               std::uint64_t seed);

struct ValidityCounts {
    std::uint64_t red_pairs = 0;   ///< orthogonal pairs with both members Red
    std::uint64_t green_bases = 0; ///< bases with every member Green
    std::uint64_t samples = 0;

    ValidityCounts &operator+=(const ValidityCounts &o);
};

/// Checks the colouring rules on Haar-random orthonormal bases.
ValidityCounts region_validity_mc(Field field, std::size_t d, std::uint64_t samples,
                                  std::uint64_t seed);

/// Fraction of Haar-random real orthonormal bases whose members are all
/// coloured. Such a basis must contain exactly one Red member; anything
/// else raises std::logic_error.
MCEstimate basis_colored_fraction_mc(std::size_t d, std::uint64_t samples, std::uint64_t seed);

/// Product state |psi_A> (x) |psi_B> with
/// |psi> = cos(theta/2)|0> + sin(theta/2) e^{i phi}|1>.
struct SeparableState {
    double theta_a = 0.0, phi_a = 0.0, theta_b = 0.0, phi_b = 0.0;

    /// Wraps phi into [0, 2pi) and sets phi := 0 at the poles.
    static SeparableState make(double theta_a, double phi_a, double theta_b, double phi_b);
};

enum class Quadrant { I, II, III, IV };

std::string_view to_string(Quadrant q);

Quadrant separable_quadrant(const SeparableState &s);

/// The 4-component state vector as a complex ray.
Ray separable_ray(const SeparableState &s);

/// True when either factor sits at a pole of its Bloch sphere.
bool on_chart_pole(const SeparableState &s);

/// Bloch angles of the state orthogonal to (theta, phi).
std::pair<double, double> orthogonal_qubit(double theta, double phi);

/// |0> (x) |chi> and |1> (x) |chi>: orthogonal, yet the pole convention puts
/// both in the same quadrant.
std::pair<SeparableState, SeparableState> pole_counterexample(double theta_chi, double phi_chi);

struct SeparableValidity {
    std::uint64_t violations = 0; ///< orthogonal pairs sharing a quadrant
    std::uint64_t pairs = 0;
    std::uint64_t samples = 0;
    std::uint64_t seed = 0;

    SeparableValidity &operator+=(const SeparableValidity &o);
};

/// Samples product states off the poles and pairs each with an orthogonal
/// product state on the A side (|psi_A^perp> (x) |chi>) and on the B side.
SeparableValidity separable_validity_mc(std::uint64_t samples, std::uint64_t seed);

} // namespace kslab
