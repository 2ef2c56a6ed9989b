#pragma once

#include "levelcs/dense.hpp"
#include "levelcs/levels.hpp"

namespace levelcs {

/// A x, or A^T x when adjoint is set.
DenseVector apply(const DenseMatrix& A, const DenseVector& x, bool adjoint = false);

/// argmin over z supported on the given set of ||y - A z||_2, via
/// column-pivoted Householder QR of the extracted column submatrix.
/// Returns the minimum-norm minimizer when the submatrix is rank deficient
/// (rank from the diagonal threshold 1e-12 * max |R_ii|).
DenseVector least_squares_on_support(const DenseMatrix& A, const DenseVector& y, const SupportSet& support);

struct SpectralNormEstimate {
    double value = 0.0;
    int iterations = 0;
    bool converged = true;
};

/// Power iteration on A^T A from the normalized all-ones vector, with a
/// seeded random restart if that start lies in the null space. Relative
/// convergence tolerance; non-convergence returns the best estimate with
/// converged = false.
SpectralNormEstimate spectral_norm(const DenseMatrix& A, double tol = 1e-12, int max_iter = 5000);

struct ColumnNormalization {
    DenseMatrix matrix;  // columns scaled to unit 2-norm
    DenseVector scales;  // original column norms; x = x_normalized / scales entrywise
};

ColumnNormalization normalize_columns(const DenseMatrix& A);

/// Largest-magnitude eigenvalue of a symmetric matrix by cyclic Jacobi
/// iteration (off-diagonal Frobenius tolerance 1e-12 relative).
double symmetric_max_abs_eig(DenseMatrix S);

}  // namespace levelcs
