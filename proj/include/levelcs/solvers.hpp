#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "levelcs/dense.hpp"
#include "levelcs/levels.hpp"

namespace levelcs {

enum class StopReason { Converged, MaxIter, FixedIterations };

std::string to_string(StopReason reason);

struct SolveOptions {
    int max_iter = 1000;
    double rel_change_tol = 1e-4;
    std::optional<DenseVector> x0;   // default zero
    bool record_trajectory = false;  // keep x^(0)..x^(n) in SolveResult
};

struct SolveResult {
    DenseVector xhat;
    int iterations = 0;
    std::vector<double> residual_history;  // ||y - A x^(n)||_2 for n = 0..iterations
    StopReason stop_reason = StopReason::Converged;
    std::vector<DenseVector> trajectory;  // filled when record_trajectory
};

/// Thrown when an iterate leaves the finite range (norm > 1e12 or NaN/Inf);
/// carries the last finite iterate.
class SolverDivergence : public std::runtime_error {
public:
    SolverDivergence(const std::string& what, DenseVector last_iterate, int iterations)
        : std::runtime_error(what), last_iterate_(std::move(last_iterate)), iterations_(iterations) {}
    const DenseVector& last_iterate() const { return last_iterate_; }
    int iterations() const { return iterations_; }

private:
    DenseVector last_iterate_;
    int iterations_;
};

/// Iterative hard thresholding in levels:
///   x^(n+1) = H_{s,M}(x^(n) + A^T(y - A x^(n))).
/// Stops when ||x^(n+1)-x^(n)|| / ||x^(n+1)|| < rel_change_tol (absolute
/// change when the new iterate is zero) or at max_iter. A one-level
/// structure gives classical IHT.
SolveResult ihtl(const DenseMatrix& A, const DenseVector& y, const LevelStructure& ls,
                 const SolveOptions& opts = {});

/// Normalized IHTL: adaptive stepsize mu = ||g_S||^2 / ||A g_S||^2 on the
/// current selected support, accepted when the thresholded support is
/// unchanged or mu passes the (1-c) backtracking test; otherwise mu is
/// shrunk by kappa(1-c) and retried. c = 0.1, kappa = 1.1/(1-c).
SolveResult nihtl(const DenseMatrix& A, const DenseVector& y, const LevelStructure& ls,
                  const SolveOptions& opts = {});

/// CoSaMP in levels: merge supp(x^(n)) with the 2s-in-levels selection of the
/// correlation, least squares on the merged support, prune with H_{s,M}.
SolveResult cosampl(const DenseMatrix& A, const DenseVector& y, const LevelStructure& ls,
                    const SolveOptions& opts = {});

/// OMP in levels: exactly s = sum s_k greedy picks, each the largest
/// correlation magnitude over indices outside saturated levels and not yet
/// selected (zero-valued max falls back to the lowest admissible index);
/// level l is saturated once s_l of its indices are selected. Least squares
/// on the selected set each step. Stopping fields of opts are ignored;
/// stop_reason is always FixedIterations.
SolveResult ompl(const DenseMatrix& A, const DenseVector& y, const LevelStructure& ls,
                 const SolveOptions& opts = {});

enum class Algorithm { Iht, Niht, Cosamp, Omp };

/// CLI names: "iht", "niht", "cosamp", "omp". A one-level structure makes
/// each entry point the classical algorithm.
Algorithm algorithm_from_name(const std::string& name);
std::string algorithm_name(Algorithm alg);

SolveResult solve(Algorithm alg, const DenseMatrix& A, const DenseVector& y,
                  const LevelStructure& ls, const SolveOptions& opts = {});

}  // namespace levelcs
