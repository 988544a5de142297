#include "kslab/bounds.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>

#include "kslab/errors.hpp"

namespace kslab {

namespace {

using Bits = std::uint64_t;

inline Bits bit(std::size_t i) { return Bits{1} << i; }

/// Max clique in the complement graph, i.e. max independent set in g.
class IndependentSetSearch {
  public:
    explicit IndependentSetSearch(const OrthoGraph &g) : n_(g.size()) {
        const Bits all = n_ == 64 ? ~Bits{0} : bit(n_) - 1;
        for (std::size_t i = 0; i < n_; ++i)
            free_of_.push_back(all & ~g.neighbour_bits(i) & ~bit(i));
        all_ = all;
    }

    VertexSet run() {
        expand(0, all_);
        VertexSet out;
        for (std::size_t i = 0; i < n_; ++i)
            if (best_ & bit(i))
                out.push_back(i);
        return out;
    }

  private:
    void expand(Bits current, Bits candidates) {
        // Greedy cover of the candidates by cliques of g: each class is
        // pairwise adjacent in g, so it holds at most one independent vertex.
        std::vector<std::pair<std::size_t, int>> ordered;
        Bits uncovered = candidates;
        int classes = 0;
        while (uncovered) {
            ++classes;
            Bits open = uncovered;
            while (open) {
                const auto v = static_cast<std::size_t>(std::countr_zero(open));
                open &= ~bit(v) & ~free_of_[v];
                uncovered &= ~bit(v);
                ordered.emplace_back(v, classes);
            }
        }
        const int have = std::popcount(current);
        for (auto it = ordered.rbegin(); it != ordered.rend(); ++it) {
            const auto [v, bound] = *it;
            if (have + bound <= best_size_)
                return;
            const Bits next = current | bit(v);
            const Bits rest = candidates & free_of_[v];
            if (rest == 0) {
                if (have + 1 > best_size_) {
                    best_size_ = have + 1;
                    best_ = next;
                }
            } else {
                expand(next, rest);
            }
            candidates &= ~bit(v);
        }
    }

    std::size_t n_;
    Bits all_ = 0;
    std::vector<Bits> free_of_;
    Bits best_ = 0;
    int best_size_ = 0;
};

// Eigen evaluates a = a + a.transpose() in place, so go through a temporary.
Eigen::MatrixXd symmetrized(const Eigen::MatrixXd &a) {
    Eigen::MatrixXd s = a.transpose();
    s += a;
    return 0.5 * s;
}

} // namespace

IndependenceResult independence_number(const OrthoGraph &g) {
    if (g.size() > kBoundsLimit)
        throw TooLarge(g.size(), kBoundsLimit);
    IndependenceResult out;
    if (g.size() == 0)
        return out;
    out.witness = IndependentSetSearch(g).run();
    out.alpha = out.witness.size();
    if (!is_independent(g, out.witness))
        throw NumericalFailure("independent-set witness failed verification", 0.0);
    return out;
}

ThetaResult lovasz_theta(const OrthoGraph &g, double eps) {
    using Eigen::MatrixXd;
    using Eigen::VectorXd;
    const auto n = static_cast<Eigen::Index>(g.size());
    if (g.size() > kBoundsLimit)
        throw TooLarge(g.size(), kBoundsLimit);
    ThetaResult out;
    if (n == 0)
        return out;

    const auto edges = g.edges();
    const auto m_edges = static_cast<Eigen::Index>(edges.size());
    const Eigen::Index m = m_edges + 1; // edge constraints, then the trace
    VectorXd b = VectorXd::Zero(m);
    b(m - 1) = 1.0;

    MatrixXd X = MatrixXd::Identity(n, n) / static_cast<double>(n);
    VectorXd y = VectorXd::Zero(m);
    y(m - 1) = static_cast<double>(n) + 1.0;
    const MatrixXd J = MatrixXd::Ones(n, n);

    auto adjoint = [&](const VectorXd &v) {
        MatrixXd a = v(m - 1) * MatrixXd::Identity(n, n);
        for (Eigen::Index k = 0; k < m_edges; ++k) {
            const auto i = static_cast<Eigen::Index>(edges[k].first);
            const auto j = static_cast<Eigen::Index>(edges[k].second);
            a(i, j) += v(k);
            a(j, i) += v(k);
        }
        return a;
    };
    auto apply = [&](const MatrixXd &a) {
        VectorXd v(m);
        for (Eigen::Index k = 0; k < m_edges; ++k) {
            const auto i = static_cast<Eigen::Index>(edges[k].first);
            const auto j = static_cast<Eigen::Index>(edges[k].second);
            v(k) = a(i, j) + a(j, i);
        }
        v(m - 1) = a.trace();
        return v;
    };
    // Largest step in [0, 1] keeping a + t*d positive definite, shortened by
    // a fraction-to-boundary factor.
    auto max_step = [](const MatrixXd &a, const MatrixXd &d) {
        const Eigen::LLT<MatrixXd> llt(a);
        if (llt.info() != Eigen::Success)
            throw NumericalFailure("theta iterate lost positive definiteness", 0.0);
        MatrixXd w = llt.matrixL().solve(d);
        w = llt.matrixL().solve(MatrixXd(w.transpose())).transpose().eval();
        const Eigen::SelfAdjointEigenSolver<MatrixXd> es(0.5 * (w + w.transpose()),
                                                         Eigen::EigenvaluesOnly);
        const double lo = es.eigenvalues()(0);
        return lo >= 0.0 ? 1.0 : std::min(1.0, -0.98 / lo);
    };

    MatrixXd Z = adjoint(y) - J;
    double primal = X.sum();
    double dual = y(m - 1);
    constexpr int kMaxIter = 200;
    int iter = 0;

    while (dual - primal > eps || (b - apply(X)).norm() > eps) {
        if (++iter > kMaxIter)
            throw NumericalFailure("theta duality gap above target", dual - primal);

        MatrixXd Zi = Z.llt().solve(MatrixXd::Identity(n, n));
        Zi = symmetrized(Zi);
        const VectorXd rp = b - apply(X);
        const double mu = (Z.array() * X.array()).sum() / static_cast<double>(n);

        // Schur complement M_kl = <A_k, Zi A_l X>.
        MatrixXd M(m, m);
        for (Eigen::Index l = 0; l < m; ++l) {
            MatrixXd W;
            if (l < m_edges) {
                const auto a = static_cast<Eigen::Index>(edges[l].first);
                const auto c = static_cast<Eigen::Index>(edges[l].second);
                W = Zi.col(a) * X.row(c) + Zi.col(c) * X.row(a);
            } else {
                W = Zi * X;
            }
            M.col(l) = apply(W);
        }
        M = symmetrized(M);
        const Eigen::PartialPivLU<MatrixXd> lu(M);

        // HKM direction for Z dX + dZ X = R with A(dX) = rp.
        auto direction = [&](const MatrixXd &R, VectorXd &dy, MatrixXd &dZ, MatrixXd &dX) {
            const MatrixXd ZiR = Zi * R;
            dy = lu.solve(apply(ZiR) - rp);
            dZ = adjoint(dy);
            dX = ZiR - Zi * dZ * X;
            dX = symmetrized(dX);
        };

        VectorXd dy;
        MatrixXd dZ, dX;
        const MatrixXd ZX = Z * X;
        direction(-ZX, dy, dZ, dX);
        double alpha_p = max_step(X, dX);
        double alpha_d = max_step(Z, dZ);
        const double affine =
            ((Z + alpha_d * dZ).array() * (X + alpha_p * dX).array()).sum() /
            static_cast<double>(n);
        const double sigma = std::clamp(std::pow(affine / mu, 3.0), 0.0, 1.0);

        direction(sigma * mu * MatrixXd::Identity(n, n) - ZX - dZ * dX, dy, dZ, dX);
        alpha_p = max_step(X, dX);
        alpha_d = max_step(Z, dZ);

        X += alpha_p * dX;
        X = symmetrized(X);
        y += alpha_d * dy;
        Z = adjoint(y) - J;

        primal = X.sum();
        dual = y(m - 1);
    }

    out.primal = primal;
    out.dual = dual;
    out.gap = dual - primal;
    out.value = 0.5 * (primal + dual);
    out.iterations = iter;
    const Eigen::SelfAdjointEigenSolver<MatrixXd> es(X, Eigen::EigenvaluesOnly);
    for (Eigen::Index k = 0; k < n; ++k)
        out.rank += es.eigenvalues()(k) > 1e-6 * X.trace();
    out.X = std::move(X);
    return out;
}

namespace {

constexpr double kPivotTol = 1e-12;

} // namespace

PackingResult fractional_packing(const OrthoGraph &g) {
    if (g.size() > kBoundsLimit)
        throw TooLarge(g.size(), kBoundsLimit);
    PackingResult out;
    out.cliques = maximal_cliques(g);
    const std::size_t nv = g.size();
    const std::size_t rows = out.cliques.size();
    const std::size_t cols = nv + rows; // structural, then slack
    out.weights.assign(nv, 0.0);
    out.clique_cover.assign(rows, 0.0);
    if (nv == 0)
        return out;

    // Tableau rows 0..rows-1 are constraints, row `rows` is the objective
    // (reduced costs stored as -c). Column `cols` is the right-hand side.
    std::vector<std::vector<double>> t(rows + 1, std::vector<double>(cols + 1, 0.0));
    std::vector<std::size_t> basis(rows);
    for (std::size_t r = 0; r < rows; ++r) {
        for (auto v : out.cliques[r])
            t[r][v] = 1.0;
        t[r][nv + r] = 1.0;
        t[r][cols] = 1.0;
        basis[r] = nv + r;
    }
    for (std::size_t v = 0; v < nv; ++v)
        t[rows][v] = -1.0;

    while (true) {
        // Bland: lowest-index improving column, then lowest-index basic
        // variable among the ratio-test ties.
        std::size_t enter = cols;
        for (std::size_t c = 0; c < cols; ++c)
            if (t[rows][c] < -kPivotTol) {
                enter = c;
                break;
            }
        if (enter == cols)
            break;
        std::size_t leave = rows;
        double best_ratio = 0.0;
        for (std::size_t r = 0; r < rows; ++r) {
            if (t[r][enter] <= kPivotTol)
                continue;
            const double ratio = t[r][cols] / t[r][enter];
            if (leave == rows || ratio < best_ratio - kPivotTol ||
                (std::abs(ratio - best_ratio) <= kPivotTol && basis[r] < basis[leave])) {
                leave = r;
                best_ratio = ratio;
            }
        }
        if (leave == rows)
            throw NumericalFailure("fractional packing LP reported unbounded", 0.0);

        const double piv = t[leave][enter];
        for (auto &x : t[leave])
            x /= piv;
        for (std::size_t r = 0; r <= rows; ++r) {
            if (r == leave)
                continue;
            const double f = t[r][enter];
            if (f == 0.0)
                continue;
            for (std::size_t c = 0; c <= cols; ++c)
                t[r][c] -= f * t[leave][c];
        }
        basis[leave] = enter;
        ++out.pivots;
    }

    for (std::size_t r = 0; r < rows; ++r)
        if (basis[r] < nv)
            out.weights[basis[r]] = t[r][cols];
    for (std::size_t r = 0; r < rows; ++r)
        out.clique_cover[r] = t[rows][nv + r];
    out.alpha_star = t[rows][cols];
    return out;
}

BoundsReport bounds_report(const OrthoGraph &g, double eps) {
    BoundsReport rep;
    rep.eps = eps;
    const auto ind = independence_number(g);
    rep.alpha = ind.alpha;
    rep.independent_set = ind.witness;
    rep.theta = lovasz_theta(g, eps);
    const auto pack = fractional_packing(g);
    rep.alpha_star = pack.alpha_star;
    rep.packing_weights = pack.weights;

    const double slack = std::max(eps, rep.theta.gap);
    if (static_cast<double>(rep.alpha) > rep.theta.value + slack)
        throw NumericalFailure("sandwich violated: alpha > theta",
                               static_cast<double>(rep.alpha) - rep.theta.value);
    if (rep.theta.value > rep.alpha_star + slack)
        throw NumericalFailure("sandwich violated: theta > alpha_star",
                               rep.theta.value - rep.alpha_star);
    return rep;
}

} // namespace kslab
