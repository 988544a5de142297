#pragma once

#include <vector>

#include <Eigen/Dense>

namespace kslab {

using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

struct EigenDecomposition {
    std::vector<double> values; ///< ascending
    CMatrix vectors;            ///< column k belongs to values[k]
    int sweeps = 0;
};

/// Cyclic complex Jacobi rotations on a Hermitian matrix. Each rotation
/// first removes the phase of the pivot, then applies a real plane rotation.
/// Only the Hermitian part of `h` is used.
EigenDecomposition jacobi_eigen(const CMatrix &h, double tol = 1e-15, int max_sweeps = 100);

} // namespace kslab
