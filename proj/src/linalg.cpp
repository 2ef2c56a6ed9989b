#include "levelcs/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "levelcs/gen.hpp"

namespace levelcs {

DenseVector apply(const DenseMatrix& A, const DenseVector& x, bool adjoint) {
    if (!adjoint) {
        if (x.dim() != A.cols()) throw std::invalid_argument("apply: dimension mismatch");
        DenseVector out(A.rows(), 0.0);
        for (int i = 0; i < A.rows(); ++i) {
            double acc = 0.0;
            for (int j = 0; j < A.cols(); ++j) acc += A(i, j) * x[j];
            out[i] = acc;
        }
        return out;
    }
    if (x.dim() != A.rows()) throw std::invalid_argument("apply: dimension mismatch (adjoint)");
    DenseVector out(A.cols(), 0.0);
    for (int i = 0; i < A.rows(); ++i) {
        const double xi = x[i];
        for (int j = 0; j < A.cols(); ++j) out[j] += A(i, j) * xi;
    }
    return out;
}

namespace {

// Column-pivoted Householder QR on B (m x p), transforming c = Q^T y along
// the way. B is overwritten with R in pivoted column order.
struct PivotedQr {
    std::vector<int> perm;  // position -> original column
    int kmax = 0;
};

PivotedQr factorize(DenseMatrix& B, DenseVector& c) {
    const int m = B.rows();
    const int p = B.cols();
    PivotedQr qr;
    qr.perm.resize(static_cast<std::size_t>(p));
    for (int j = 0; j < p; ++j) qr.perm[static_cast<std::size_t>(j)] = j;
    qr.kmax = std::min(m, p);

    std::vector<double> v(static_cast<std::size_t>(m));
    for (int k = 0; k < qr.kmax; ++k) {
        // pivot: remaining column with the largest trailing norm, lowest index on ties
        int pivot = k;
        double best = -1.0;
        for (int j = k; j < p; ++j) {
            double norm2 = 0.0;
            for (int i = k; i < m; ++i) norm2 += B(i, j) * B(i, j);
            if (norm2 > best) {
                best = norm2;
                pivot = j;
            }
        }
        if (pivot != k) {
            for (int i = 0; i < m; ++i) std::swap(B(i, k), B(i, pivot));
            std::swap(qr.perm[static_cast<std::size_t>(k)], qr.perm[static_cast<std::size_t>(pivot)]);
        }

        double col_norm = 0.0;
        for (int i = k; i < m; ++i) col_norm += B(i, k) * B(i, k);
        col_norm = std::sqrt(col_norm);
        if (col_norm == 0.0) continue;  // trailing block is zero in this column

        const double alpha = B(k, k) >= 0.0 ? -col_norm : col_norm;
        double beta = 0.0;
        for (int i = k; i < m; ++i) v[static_cast<std::size_t>(i)] = B(i, k);
        v[static_cast<std::size_t>(k)] -= alpha;
        for (int i = k; i < m; ++i) beta += v[static_cast<std::size_t>(i)] * v[static_cast<std::size_t>(i)];
        if (beta == 0.0) continue;

        for (int j = k; j < p; ++j) {
            double proj = 0.0;
            for (int i = k; i < m; ++i) proj += v[static_cast<std::size_t>(i)] * B(i, j);
            proj = 2.0 * proj / beta;
            for (int i = k; i < m; ++i) B(i, j) -= proj * v[static_cast<std::size_t>(i)];
        }
        double proj = 0.0;
        for (int i = k; i < m; ++i) proj += v[static_cast<std::size_t>(i)] * c[i];
        proj = 2.0 * proj / beta;
        for (int i = k; i < m; ++i) c[i] -= proj * v[static_cast<std::size_t>(i)];

        B(k, k) = alpha;
        for (int i = k + 1; i < m; ++i) B(i, k) = 0.0;
    }
    return qr;
}

}  // namespace

DenseVector least_squares_on_support(const DenseMatrix& A, const DenseVector& y, const SupportSet& support) {
    if (y.dim() != A.rows()) throw std::invalid_argument("least_squares: measurement dimension mismatch");
    if (support.dim() != A.cols()) throw std::invalid_argument("least_squares: support dimension mismatch");

    const int p = support.size();
    DenseVector out(A.cols(), 0.0);
    if (p == 0) return out;

    DenseMatrix B(A.rows(), p);
    for (int i = 0; i < A.rows(); ++i)
        for (int j = 0; j < p; ++j) B(i, j) = A(i, support.indices()[static_cast<std::size_t>(j)] - 1);

    DenseVector c = y;
    const PivotedQr qr = factorize(B, c);

    double max_diag = 0.0;
    for (int i = 0; i < qr.kmax; ++i) max_diag = std::max(max_diag, std::abs(B(i, i)));
    const double threshold = 1e-12 * max_diag;
    int rank = 0;
    while (rank < qr.kmax && std::abs(B(rank, rank)) > threshold) ++rank;

    std::vector<double> z(static_cast<std::size_t>(p), 0.0);
    if (rank == p) {
        for (int i = p - 1; i >= 0; --i) {
            double acc = c[i];
            for (int j = i + 1; j < p; ++j) acc -= B(i, j) * z[static_cast<std::size_t>(j)];
            z[static_cast<std::size_t>(i)] = acc / B(i, i);
        }
    } else if (rank > 0) {
        // minimum-norm solution of the rank x p system [R11 R12] w = c:
        // w = M^T u with (M M^T) u = c, solved by Cholesky.
        DenseMatrix gram(rank, rank, 0.0);
        for (int i = 0; i < rank; ++i)
            for (int j = i; j < rank; ++j) {
                double acc = 0.0;
                for (int l = std::max(i, j); l < p; ++l) acc += B(i, l) * B(j, l);
                gram(i, j) = acc;
                gram(j, i) = acc;
            }
        // in-place Cholesky
        for (int i = 0; i < rank; ++i) {
            for (int j = 0; j < i; ++j) {
                double acc = gram(i, j);
                for (int l = 0; l < j; ++l) acc -= gram(i, l) * gram(j, l);
                gram(i, j) = acc / gram(j, j);
            }
            double acc = gram(i, i);
            for (int l = 0; l < i; ++l) acc -= gram(i, l) * gram(i, l);
            gram(i, i) = std::sqrt(std::max(acc, 0.0));
            if (gram(i, i) == 0.0) gram(i, i) = 1.0;  // fully degenerate direction
        }
        std::vector<double> u(static_cast<std::size_t>(rank));
        for (int i = 0; i < rank; ++i) {
            double acc = c[i];
            for (int l = 0; l < i; ++l) acc -= gram(i, l) * u[static_cast<std::size_t>(l)];
            u[static_cast<std::size_t>(i)] = acc / gram(i, i);
        }
        for (int i = rank - 1; i >= 0; --i) {
            double acc = u[static_cast<std::size_t>(i)];
            for (int l = i + 1; l < rank; ++l) acc -= gram(l, i) * u[static_cast<std::size_t>(l)];
            u[static_cast<std::size_t>(i)] = acc / gram(i, i);
        }
        for (int j = 0; j < p; ++j) {
            double acc = 0.0;
            for (int i = 0; i < std::min(rank, j + 1); ++i) acc += B(i, j) * u[static_cast<std::size_t>(i)];
            z[static_cast<std::size_t>(j)] = acc;
        }
    }

    for (int j = 0; j < p; ++j)
        out[support.indices()[static_cast<std::size_t>(qr.perm[static_cast<std::size_t>(j)])] - 1] =
            z[static_cast<std::size_t>(j)];
    return out;
}

SpectralNormEstimate spectral_norm(const DenseMatrix& A, double tol, int max_iter) {
    if (!(tol > 0.0)) throw std::invalid_argument("spectral_norm: tol must be positive");
    const int n = A.cols();
    DenseVector v(n, 1.0 / std::sqrt(static_cast<double>(n)));

    SpectralNormEstimate estimate;
    double previous = -1.0;
    bool restarted = false;
    for (int it = 1; it <= max_iter; ++it) {
        DenseVector w = apply(A, apply(A, v), true);
        const double lambda = v.dot(w);
        const double sigma = std::sqrt(std::max(lambda, 0.0));
        estimate.value = sigma;
        estimate.iterations = it;

        const double wnorm = w.norm();
        if (wnorm == 0.0) {
            if (restarted) return estimate;  // matrix is (numerically) zero on both starts
            // all-ones start lies in the null space: seeded random restart
            GaussianSampler g(Seed{0x9e3779b97f4a7c15ULL});
            for (int i = 0; i < n; ++i) v[i] = g.next();
            const double vn = v.norm();
            if (vn > 0.0) v *= 1.0 / vn;
            restarted = true;
            previous = -1.0;
            continue;
        }
        v = (1.0 / wnorm) * w;

        if (previous >= 0.0 && std::abs(sigma - previous) <= tol * std::max(sigma, 1e-300)) {
            return estimate;
        }
        previous = sigma;
    }
    estimate.converged = false;
    return estimate;
}

ColumnNormalization normalize_columns(const DenseMatrix& A) {
    ColumnNormalization result{A, DenseVector(A.cols(), 0.0)};
    for (int j = 0; j < A.cols(); ++j) {
        double norm2 = 0.0;
        for (int i = 0; i < A.rows(); ++i) norm2 += A(i, j) * A(i, j);
        const double norm = std::sqrt(norm2);
        if (norm == 0.0) throw std::invalid_argument("normalize_columns: zero column " + std::to_string(j + 1));
        result.scales[j] = norm;
        for (int i = 0; i < A.rows(); ++i) result.matrix(i, j) = A(i, j) / norm;
    }
    return result;
}

double symmetric_max_abs_eig(DenseMatrix S) {
    const int n = S.rows();
    if (n != S.cols()) throw std::invalid_argument("symmetric_max_abs_eig: matrix not square");
    if (n == 0) return 0.0;

    double frob = 0.0;
    for (double v : S.entries()) frob += v * v;
    frob = std::sqrt(frob);
    const double stop = 1e-12 * std::max(frob, 1e-300);

    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) off += 2.0 * S(p, q) * S(p, q);
        if (std::sqrt(off) <= stop) break;

        for (int p = 0; p < n; ++p) {
            for (int q = p + 1; q < n; ++q) {
                if (S(p, q) == 0.0) continue;
                const double tau = (S(q, q) - S(p, p)) / (2.0 * S(p, q));
                const double t = tau >= 0.0 ? 1.0 / (tau + std::sqrt(1.0 + tau * tau))
                                            : -1.0 / (-tau + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                for (int i = 0; i < n; ++i) {
                    const double sip = S(i, p);
                    const double siq = S(i, q);
                    S(i, p) = c * sip - s * siq;
                    S(i, q) = s * sip + c * siq;
                }
                for (int j = 0; j < n; ++j) {
                    const double spj = S(p, j);
                    const double sqj = S(q, j);
                    S(p, j) = c * spj - s * sqj;
                    S(q, j) = s * spj + c * sqj;
                }
            }
        }
    }

    double max_abs = 0.0;
    for (int i = 0; i < n; ++i) max_abs = std::max(max_abs, std::abs(S(i, i)));
    return max_abs;
}

}  // namespace levelcs
