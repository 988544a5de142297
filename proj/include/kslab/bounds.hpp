#pragma once

#include <cstddef>
#include <vector>

#include "kslab/linalg.hpp"
#include "kslab/ortho.hpp"

namespace kslab {

/// Exact solvers below work on dense bitsets; larger graphs are refused.
inline constexpr std::size_t kBoundsLimit = 64;

struct IndependenceResult {
    std::size_t alpha = 0;
    VertexSet witness; ///< a maximum independent set, sorted
};

/// Maximum independent set by branch and bound, pruning with greedy clique
/// covers of the candidate set. Throws TooLarge for n > 64.
IndependenceResult independence_number(const OrthoGraph &g);

struct ThetaResult {
    double value = 0.0;  ///< midpoint of the primal and dual objectives
    double primal = 0.0; ///< <J, X>
    double dual = 0.0;   ///< b^T y
    double gap = 0.0;    ///< dual - primal
    int iterations = 0;
    Eigen::MatrixXd X;   ///< primal optimum
    std::size_t rank = 0; ///< numerical rank of X (eigenvalues above 1e-6 * trace)
};

/// Lovasz theta: max <J, X> s.t. tr X = 1, X_ij = 0 on edges, X psd.
/// Primal-dual interior-point method (HKM search direction). Throws
/// NumericalFailure if the duality gap does not reach `eps`.
ThetaResult lovasz_theta(const OrthoGraph &g, double eps = 1e-6);

struct PackingResult {
    double alpha_star = 0.0;
    std::vector<double> weights;       ///< primal x, one per vertex
    std::vector<VertexSet> cliques;    ///< the LP rows: maximal cliques of g
    std::vector<double> clique_cover;  ///< dual y, one per clique
    int pivots = 0;
};

/// max sum x_i  s.t.  x >= 0,  sum_{i in C} x_i <= 1 for every maximal clique C.
/// Dense tableau simplex with Bland's rule.
PackingResult fractional_packing(const OrthoGraph &g);

struct BoundsReport {
    std::size_t alpha = 0;
    VertexSet independent_set;
    ThetaResult theta;
    double alpha_star = 0.0;
    std::vector<double> packing_weights;
    double eps = 1e-6;
};

/// Runs all three solvers and checks alpha <= theta <= alpha_star (up to eps)
/// before returning; a violated sandwich raises NumericalFailure.
BoundsReport bounds_report(const OrthoGraph &g, double eps = 1e-6);

} // namespace kslab
