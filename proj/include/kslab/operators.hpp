#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "kslab/linalg.hpp"
#include "kslab/rays.hpp"

namespace kslab {

/// Dense d x d Hermitian matrix.
class HermitianMatrix {
  public:
    /// Throws InvariantViolation if `m` is not square or not Hermitian within 1e-12.
    explicit HermitianMatrix(CMatrix m);

    std::size_t dimension() const { return static_cast<std::size_t>(m_.rows()); }
    const CMatrix &matrix() const { return m_; }
    double trace() const { return m_.trace().real(); }
    /// <psi|H|psi>
    double expectation(const Ray &psi) const;

  private:
    CMatrix m_;
};

/// sum_i |r_i><r_i|
HermitianMatrix projector_sum(const RaySet &rs);

/// All eigenvalues, ascending, from the Jacobi decomposition.
std::vector<double> eigenvalues(const HermitianMatrix &h);

/// Largest eigenvalue. The residual |Hv - lambda v| of the returned pair is
/// checked against `tol`; a failing check raises NumericalFailure.
double eigen_max(const HermitianMatrix &h, double tol = 1e-10);

struct PovmCheck {
    bool proportional = false;
    double constant = 0.0;  ///< |rs| / d, meaningful when proportional
    double deviation = 0.0; ///< max-entry distance from constant * I
};

/// Is the projector sum a multiple of the identity (within 1e-9 entrywise)?
PovmCheck equal_weight_povm_check(const RaySet &rs);

/// Which cups of the pentagon platter hold a stone.
using PentagonAssignment = std::array<bool, 5>;

struct ClassicalStrategy {
    PentagonAssignment stones;
};
struct ConspiratorialStrategy {};
struct QuantumStrategy {
    Ray state;
};

using PlatterStrategy = std::variant<ClassicalStrategy, ConspiratorialStrategy, QuantumStrategy>;

struct PlatterOutcome {
    PlatterStrategy strategy;
    double estimate = 0.0; ///< sum over cups of hits / times observed
    double std_error = 0.0;  ///< quadrature sum of per-cup binomial errors
    std::uint64_t trials = 0;
    std::uint64_t seed = 0;
    std::array<double, 5> frequencies{};
    std::array<std::uint64_t, 5> observations{};
};

/// Simulates the pentagon platter. Each trial draws one of the five links
/// (cup k, cup k+1 mod 5) uniformly and looks under both cups.
///   classical: fixed stones, no two adjacent (else InvalidAssignment);
///   conspiratorial: one stone, always under the first cup of the drawn link;
///   quantum: the joint two-outcome measurement of P_k, P_{k+1} from kcbs5()
///            on the given state (each marginal is Bernoulli(<psi|P_k|psi>)).
PlatterOutcome platter_simulate(const PlatterStrategy &strategy, std::uint64_t trials,
                                std::uint64_t seed);

/// Best classical assignment: stones under cups 0 and 2.
PentagonAssignment best_classical_assignment();

} // namespace kslab
