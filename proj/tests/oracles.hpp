// Test-only reference implementations, kept independent of the library code
// paths they check. The textbook CoSaMP oracle is the one exception: it
// shares the least-squares kernel so that bit-exact trajectory comparison is
// well defined.
#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "levelcs/dense.hpp"
#include "levelcs/gen.hpp"
#include "levelcs/levels.hpp"
#include "levelcs/linalg.hpp"
#include "levelcs/solvers.hpp"

namespace oracle {

using levelcs::DenseMatrix;
using levelcs::DenseVector;
using levelcs::LevelStructure;

// --- support enumeration (recursive, exactly s_k indices per level) --------

inline void enumerate_level(const LevelStructure& ls, int k, std::vector<int>& buffer,
                            std::vector<std::vector<int>>& out) {
    if (k > ls.num_levels()) {
        out.push_back(buffer);
        return;
    }
    const int begin = ls.level_begin(k) + 1;
    const int width = ls.level_width(k);
    const int pick = ls.local_sparsity(k);
    std::vector<int> mask(static_cast<std::size_t>(width), 0);
    std::fill(mask.begin(), mask.begin() + pick, 1);
    // iterate all subsets of size `pick` via prev_permutation over the mask
    std::sort(mask.begin(), mask.end(), std::greater<int>());
    do {
        const std::size_t base = buffer.size();
        for (int i = 0; i < width; ++i)
            if (mask[static_cast<std::size_t>(i)]) buffer.push_back(begin + i);
        enumerate_level(ls, k + 1, buffer, out);
        buffer.resize(base);
    } while (std::prev_permutation(mask.begin(), mask.end()));
}

inline std::vector<std::vector<int>> all_supports(const LevelStructure& ls) {
    std::vector<std::vector<int>> out;
    std::vector<int> buffer;
    enumerate_level(ls, 1, buffer, out);
    return out;
}

// --- brute-force best approximations ---------------------------------------

struct BestApprox {
    std::vector<int> support;
    double error = std::numeric_limits<double>::infinity();
};

inline BestApprox best_l2_approx(const DenseVector& x, const LevelStructure& ls) {
    BestApprox best;
    for (const std::vector<int>& support : all_supports(ls)) {
        double off = 0.0;
        std::vector<bool> keep(static_cast<std::size_t>(x.dim()), false);
        for (int idx : support) keep[static_cast<std::size_t>(idx) - 1] = true;
        for (int i = 0; i < x.dim(); ++i)
            if (!keep[static_cast<std::size_t>(i)]) off += x[i] * x[i];
        off = std::sqrt(off);
        if (off < best.error) {
            best.error = off;
            best.support = support;
        }
    }
    return best;
}

inline double best_weighted_l1_error(const DenseVector& x, const LevelStructure& ls,
                                     const std::vector<double>& weights) {
    double best = std::numeric_limits<double>::infinity();
    for (const std::vector<int>& support : all_supports(ls)) {
        std::vector<bool> keep(static_cast<std::size_t>(x.dim()), false);
        for (int idx : support) keep[static_cast<std::size_t>(idx) - 1] = true;
        double err = 0.0;
        for (int k = 1; k <= ls.num_levels(); ++k)
            for (int i = ls.level_begin(k); i < ls.level_end(k); ++i)
                if (!keep[static_cast<std::size_t>(i)])
                    err += weights[static_cast<std::size_t>(k) - 1] * std::abs(x[i]);
        best = std::min(best, err);
    }
    return best;
}

// --- independent dense kernels ----------------------------------------------

inline DenseVector naive_matvec(const DenseMatrix& A, const DenseVector& x) {
    DenseVector out(A.rows(), 0.0);
    for (int i = 0; i < A.rows(); ++i) {
        double acc = 0.0;
        for (int j = 0; j < A.cols(); ++j) acc += A(i, j) * x[j];
        out[i] = acc;
    }
    return out;
}

inline DenseVector naive_adjoint_matvec(const DenseMatrix& A, const DenseVector& r) {
    DenseVector out(A.cols(), 0.0);
    for (int j = 0; j < A.cols(); ++j) {
        double acc = 0.0;
        for (int i = 0; i < A.rows(); ++i) acc += A(i, j) * r[i];
        out[j] = acc;
    }
    return out;
}

// Eigenvalues of a symmetric matrix by a self-contained Jacobi loop.
inline std::vector<double> sym_eigenvalues(DenseMatrix S) {
    const int n = S.rows();
    for (int sweep = 0; sweep < 200; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) off = std::max(off, std::abs(S(p, q)));
        if (off < 1e-14) break;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) {
                if (S(p, q) == 0.0) continue;
                const double tau = (S(q, q) - S(p, p)) / (2.0 * S(p, q));
                const double t = tau >= 0.0 ? 1.0 / (tau + std::sqrt(1.0 + tau * tau))
                                            : -1.0 / (-tau + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                for (int i = 0; i < n; ++i) {
                    const double sip = S(i, p), siq = S(i, q);
                    S(i, p) = c * sip - s * siq;
                    S(i, q) = s * sip + c * siq;
                }
                for (int j = 0; j < n; ++j) {
                    const double spj = S(p, j), sqj = S(q, j);
                    S(p, j) = c * spj - s * sqj;
                    S(q, j) = s * spj + c * sqj;
                }
            }
    }
    std::vector<double> eigs(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) eigs[static_cast<std::size_t>(i)] = S(i, i);
    return eigs;
}

// Largest singular value via Jacobi on the Gram matrix.
inline double largest_singular_value(const DenseMatrix& A) {
    const int small = std::min(A.rows(), A.cols());
    DenseMatrix gram(small, small, 0.0);
    const bool use_rows = A.rows() <= A.cols();
    for (int a = 0; a < small; ++a)
        for (int b = 0; b < small; ++b) {
            double acc = 0.0;
            if (use_rows)
                for (int k = 0; k < A.cols(); ++k) acc += A(a, k) * A(b, k);
            else
                for (int k = 0; k < A.rows(); ++k) acc += A(k, a) * A(k, b);
            gram(a, b) = acc;
        }
    double largest = 0.0;
    for (double eig : sym_eigenvalues(std::move(gram))) largest = std::max(largest, eig);
    return std::sqrt(std::max(largest, 0.0));
}

// Full RICL by independent enumeration + independent Jacobi.
inline double ricl_reference(const DenseMatrix& A, const LevelStructure& ls) {
    double delta = 0.0;
    for (const std::vector<int>& support : all_supports(ls)) {
        const int p = static_cast<int>(support.size());
        DenseMatrix dev(p, p, 0.0);
        for (int a = 0; a < p; ++a)
            for (int b = 0; b < p; ++b) {
                double acc = 0.0;
                for (int row = 0; row < A.rows(); ++row)
                    acc += A(row, support[static_cast<std::size_t>(a)] - 1) *
                           A(row, support[static_cast<std::size_t>(b)] - 1);
                dev(a, b) = a == b ? acc - 1.0 : acc;
            }
        for (double eig : sym_eigenvalues(std::move(dev))) delta = std::max(delta, std::abs(eig));
    }
    return delta;
}

// --- textbook one-level IHT / CoSaMP ----------------------------------------

struct TextbookRun {
    std::vector<DenseVector> trajectory;  // x^(0) .. x^(nbar)
    int iterations = 0;
    bool converged = false;
};

inline std::vector<int> top_indices(const DenseVector& v, int count) {
    std::vector<int> order(static_cast<std::size_t>(v.dim()));
    for (int i = 0; i < v.dim(); ++i) order[static_cast<std::size_t>(i)] = i;
    std::sort(order.begin(), order.end(), [&v](int a, int b) {
        const double ma = std::abs(v[a]), mb = std::abs(v[b]);
        if (ma != mb) return ma > mb;
        return a < b;
    });
    std::vector<int> keep(order.begin(), order.begin() + count);
    std::sort(keep.begin(), keep.end());
    for (int& idx : keep) ++idx;  // 1-based
    return keep;
}

inline DenseVector keep_on(const DenseVector& v, const std::vector<int>& support) {
    DenseVector out(v.dim(), 0.0);
    for (int idx : support) out[idx - 1] = v[idx - 1];
    return out;
}

inline bool stop_rule(const DenseVector& next, const DenseVector& current, double tol) {
    double change = 0.0;
    for (int i = 0; i < next.dim(); ++i) change += (next[i] - current[i]) * (next[i] - current[i]);
    change = std::sqrt(change);
    const double scale = next.norm();
    return (scale > 0.0 ? change / scale : change) < tol;
}

inline TextbookRun textbook_iht(const DenseMatrix& A, const DenseVector& y, int sparsity, int max_iter,
                                double tol) {
    TextbookRun run;
    DenseVector x(A.cols(), 0.0);
    run.trajectory.push_back(x);
    for (int n = 0; n < max_iter; ++n) {
        const DenseVector residual = [&] {
            DenseVector r = y;
            const DenseVector Ax = naive_matvec(A, x);
            for (int i = 0; i < r.dim(); ++i) r[i] -= Ax[i];
            return r;
        }();
        const DenseVector gradient = naive_adjoint_matvec(A, residual);
        DenseVector proposal(A.cols(), 0.0);
        for (int i = 0; i < proposal.dim(); ++i) proposal[i] = x[i] + gradient[i];
        DenseVector next = keep_on(proposal, top_indices(proposal, sparsity));
        run.trajectory.push_back(next);
        const bool done = stop_rule(next, x, tol);
        x = next;
        run.iterations = n + 1;
        if (done) {
            run.converged = true;
            return run;
        }
    }
    return run;
}

inline TextbookRun textbook_cosamp(const DenseMatrix& A, const DenseVector& y, int sparsity, int max_iter,
                                   double tol) {
    TextbookRun run;
    const int N = A.cols();
    DenseVector x(N, 0.0);
    run.trajectory.push_back(x);
    for (int n = 0; n < max_iter; ++n) {
        DenseVector residual = y;
        const DenseVector Ax = naive_matvec(A, x);
        for (int i = 0; i < residual.dim(); ++i) residual[i] -= Ax[i];
        const DenseVector gradient = naive_adjoint_matvec(A, residual);

        std::vector<int> merged = top_indices(gradient, std::min(2 * sparsity, N));
        for (int i = 0; i < N; ++i)
            if (x[i] != 0.0) merged.push_back(i + 1);
        std::sort(merged.begin(), merged.end());
        merged.erase(std::unique(merged.begin(), merged.end()), merged.end());

        const DenseVector ls_fit =
            levelcs::least_squares_on_support(A, y, levelcs::SupportSet(merged, N));  // shared kernel
        DenseVector next = keep_on(ls_fit, top_indices(ls_fit, sparsity));
        run.trajectory.push_back(next);
        const bool done = stop_rule(next, x, tol);
        x = next;
        run.iterations = n + 1;
        if (done) {
            run.converged = true;
            return run;
        }
    }
    return run;
}

// --- input builders ----------------------------------------------------------

inline DenseMatrix orthogonal_from_givens(int n, std::uint64_t seed, int rotations) {
    levelcs::Xoshiro256ss rng(levelcs::Seed{seed});
    DenseMatrix Q = DenseMatrix::identity(n);
    for (int r = 0; r < rotations; ++r) {
        const int i = static_cast<int>(rng.next() % static_cast<std::uint64_t>(n));
        int j = static_cast<int>(rng.next() % static_cast<std::uint64_t>(n - 1));
        if (j >= i) ++j;
        const double angle = rng.uniform01() * 6.283185307179586;
        const double c = std::cos(angle);
        const double s = std::sin(angle);
        for (int k = 0; k < n; ++k) {
            const double qi = Q(i, k), qj = Q(j, k);
            Q(i, k) = c * qi - s * qj;
            Q(j, k) = s * qi + c * qj;
        }
    }
    return Q;
}

inline LevelStructure random_structure(levelcs::Xoshiro256ss& rng, int max_dim, int max_levels) {
    const int r = 1 + static_cast<int>(rng.next() % static_cast<std::uint64_t>(max_levels));
    const int N = std::max(r, 2 + static_cast<int>(rng.next() % static_cast<std::uint64_t>(max_dim - 1)));
    // r distinct boundaries in [1, N] with the last equal to N
    std::vector<int> boundaries;
    std::vector<int> pool(static_cast<std::size_t>(N - 1));
    for (int i = 0; i < N - 1; ++i) pool[static_cast<std::size_t>(i)] = i + 1;
    for (int pick = 0; pick < r - 1; ++pick) {
        const std::size_t at = static_cast<std::size_t>(rng.next() % pool.size());
        boundaries.push_back(pool[at]);
        pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(at));
    }
    boundaries.push_back(N);
    std::sort(boundaries.begin(), boundaries.end());
    std::vector<int> sparsities;
    int previous = 0;
    for (int boundary : boundaries) {
        const int width = boundary - previous;
        sparsities.push_back(static_cast<int>(rng.next() % static_cast<std::uint64_t>(width + 1)));
        previous = boundary;
    }
    return LevelStructure(boundaries, sparsities);
}

inline DenseVector random_vector(levelcs::Xoshiro256ss& rng, int dim) {
    DenseVector x(dim, 0.0);
    for (int i = 0; i < dim; ++i) x[i] = 2.0 * rng.uniform01() - 1.0;
    return x;
}

}  // namespace oracle
