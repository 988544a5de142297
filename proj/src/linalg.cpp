#include "kslab/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>

namespace kslab {

namespace {

double off_diagonal_norm2(const CMatrix &a) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            if (i != j)
                s += std::norm(a(i, j));
    return s;
}

} // namespace

EigenDecomposition jacobi_eigen(const CMatrix &h, double tol, int max_sweeps) {
    const Eigen::Index n = h.rows();
    CMatrix a = 0.5 * (h + h.adjoint());
    CMatrix v = CMatrix::Identity(n, n);
    const double scale = std::max(a.norm(), 1e-300);

    int sweep = 0;
    for (; sweep < max_sweeps; ++sweep) {
        if (std::sqrt(off_diagonal_norm2(a)) <= tol * scale)
            break;
        for (Eigen::Index p = 0; p < n - 1; ++p) {
            for (Eigen::Index q = p + 1; q < n; ++q) {
                const std::complex<double> apq = a(p, q);
                const double mag = std::abs(apq);
                if (mag == 0.0)
                    continue;
                const std::complex<double> phase = apq / mag;
                const double app = a(p, p).real();
                const double aqq = a(q, q).real();
                const double theta = 0.5 * std::atan2(2.0 * mag, aqq - app);
                const double c = std::cos(theta);
                const double s = std::sin(theta);

                // G = diag(1, conj(phase)) * [[c, s], [-s, c]]
                const std::complex<double> g00 = c;
                const std::complex<double> g01 = s;
                const std::complex<double> g10 = -s * std::conj(phase);
                const std::complex<double> g11 = c * std::conj(phase);

                for (Eigen::Index k = 0; k < n; ++k) {
                    const auto akp = a(k, p);
                    const auto akq = a(k, q);
                    a(k, p) = akp * g00 + akq * g10;
                    a(k, q) = akp * g01 + akq * g11;
                }
                for (Eigen::Index k = 0; k < n; ++k) {
                    const auto apk = a(p, k);
                    const auto aqk = a(q, k);
                    a(p, k) = std::conj(g00) * apk + std::conj(g10) * aqk;
                    a(q, k) = std::conj(g01) * apk + std::conj(g11) * aqk;
                }
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                a(p, p) = a(p, p).real();
                a(q, q) = a(q, q).real();

                for (Eigen::Index k = 0; k < n; ++k) {
                    const auto vkp = v(k, p);
                    const auto vkq = v(k, q);
                    v(k, p) = vkp * g00 + vkq * g10;
                    v(k, q) = vkp * g01 + vkq * g11;
                }
            }
        }
    }

    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index x, Eigen::Index y) {
        return a(x, x).real() < a(y, y).real();
    });

    EigenDecomposition out;
    out.sweeps = sweep;
    out.vectors.resize(n, n);
    for (Eigen::Index k = 0; k < n; ++k) {
        out.values.push_back(a(order[k], order[k]).real());
        out.vectors.col(k) = v.col(order[k]);
    }
    return out;
}

} // namespace kslab
