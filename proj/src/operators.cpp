#include "kslab/operators.hpp"

#include <algorithm>
#include <cmath>

#include "kslab/errors.hpp"
#include "kslab/rng.hpp"

namespace kslab {

HermitianMatrix::HermitianMatrix(CMatrix m) : m_(std::move(m)) {
    if (m_.rows() != m_.cols())
        throw InvariantViolation(0, "matrix is not square");
    for (Eigen::Index i = 0; i < m_.rows(); ++i)
        for (Eigen::Index j = i; j < m_.cols(); ++j)
            if (std::abs(m_(i, j) - std::conj(m_(j, i))) > 1e-12)
                throw InvariantViolation(static_cast<std::size_t>(i), "matrix is not Hermitian");
}

double HermitianMatrix::expectation(const Ray &psi) const {
    const auto c = psi.components();
    const Eigen::Map<const CVector> v(c.data(), static_cast<Eigen::Index>(c.size()));
    return v.dot(m_ * v).real();
}

HermitianMatrix projector_sum(const RaySet &rs) {
    const auto d = static_cast<Eigen::Index>(rs.dimension());
    CMatrix sum = CMatrix::Zero(d, d);
    for (const auto &r : rs) {
        const auto c = r.components();
        const Eigen::Map<const CVector> v(c.data(), d);
        sum += v * v.adjoint();
    }
    return HermitianMatrix(std::move(sum));
}

std::vector<double> eigenvalues(const HermitianMatrix &h) { return jacobi_eigen(h.matrix()).values; }

double eigen_max(const HermitianMatrix &h, double tol) {
    const auto eig = jacobi_eigen(h.matrix());
    const double lambda = eig.values.back();
    const CVector v = eig.vectors.col(eig.vectors.cols() - 1);
    const double residual = (h.matrix() * v - lambda * v).norm();
    if (residual > tol)
        throw NumericalFailure("eigenpair residual above tolerance", residual);
    return lambda;
}

PovmCheck equal_weight_povm_check(const RaySet &rs) {
    const auto sigma = projector_sum(rs);
    PovmCheck out;
    out.constant = static_cast<double>(rs.size()) / static_cast<double>(rs.dimension());
    const auto d = static_cast<Eigen::Index>(rs.dimension());
    const CMatrix diff = sigma.matrix() - out.constant * CMatrix::Identity(d, d);
    out.deviation = diff.cwiseAbs().maxCoeff();
    out.proportional = out.deviation < 1e-9;
    return out;
}

PentagonAssignment best_classical_assignment() { return {true, false, true, false, false}; }

namespace {

struct PlatterTally {
    std::array<std::uint64_t, 5> hits{};
    std::array<std::uint64_t, 5> seen{};

    PlatterTally &operator+=(const PlatterTally &o) {
        for (int k = 0; k < 5; ++k) {
            hits[k] += o.hits[k];
            seen[k] += o.seen[k];
        }
        return *this;
    }
};

} // namespace

PlatterOutcome platter_simulate(const PlatterStrategy &strategy, std::uint64_t trials,
                                std::uint64_t seed) {
    if (trials < 1)
        throw InvariantViolation(0, "platter simulation needs at least one trial");

    std::array<double, 5> quantum_p{};
    if (const auto *c = std::get_if<ClassicalStrategy>(&strategy)) {
        for (int k = 0; k < 5; ++k)
            if (c->stones[k] && c->stones[(k + 1) % 5])
                throw InvalidAssignment("stones under adjacent cups " + std::to_string(k) +
                                        " and " + std::to_string((k + 1) % 5));
    } else if (const auto *q = std::get_if<QuantumStrategy>(&strategy)) {
        const auto pentagon = kcbs5();
        if (q->state.dimension() != pentagon.dimension())
            throw InvariantViolation(0, "quantum platter state must live in dimension 3");
        for (int k = 0; k < 5; ++k)
            quantum_p[k] = std::norm(inner(pentagon[k], q->state));
    }

    const auto tally = run_chunked<PlatterTally>(trials, seed, [&](StreamRng &rng,
                                                                    std::uint64_t count) {
        PlatterTally t;
        for (std::uint64_t n = 0; n < count; ++n) {
            const auto first = static_cast<int>(rng() % 5);
            const int second = (first + 1) % 5;
            ++t.seen[first];
            ++t.seen[second];
            if (const auto *c = std::get_if<ClassicalStrategy>(&strategy)) {
                t.hits[first] += c->stones[first];
                t.hits[second] += c->stones[second];
            } else if (std::holds_alternative<ConspiratorialStrategy>(strategy)) {
                ++t.hits[first];
            } else {
                // P_first and P_second are orthogonal: at most one clicks.
                const double u = rng.uniform();
                if (u < quantum_p[first])
                    ++t.hits[first];
                else if (u < quantum_p[first] + quantum_p[second])
                    ++t.hits[second];
            }
        }
        return t;
    });

    PlatterOutcome out{strategy};
    out.trials = trials;
    out.seed = seed;
    double var = 0.0;
    for (int k = 0; k < 5; ++k) {
        out.observations[k] = tally.seen[k];
        if (tally.seen[k] == 0)
            continue;
        const double f = static_cast<double>(tally.hits[k]) / static_cast<double>(tally.seen[k]);
        out.frequencies[k] = f;
        out.estimate += f;
        var += f * (1.0 - f) / static_cast<double>(tally.seen[k]);
    }
    out.std_error = std::sqrt(var);
    return out;
}

} // namespace kslab
