#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "levelcs/dense.hpp"
#include "levelcs/levels.hpp"

namespace levelcs {

/// sum_k w^(k) * (l1 norm of x on level k); weights constant per level.
double weighted_l1_norm(const DenseVector& x, const LevelStructure& ls, const LevelWeights& w);

/// w^(k) = sqrt(s_total / s_k). Errors when any s_k = 0.
LevelWeights default_weights(const LevelStructure& ls);

struct ZetaXi {
    double zeta;  // sum_i (w^(i))^2 s_i
    double xi;    // min over levels with s_i > 0 of (w^(i))^2 s_i
};

ZetaXi zeta_xi(const LevelStructure& ls, const LevelWeights& w);

/// Best approximation error in the weighted l1 norm over the model set,
/// equal to ||x - hard_threshold(x, ls)||_{l1_w} since weights are constant
/// per level.
double best_approx_error(const DenseVector& x, const LevelStructure& ls, const LevelWeights& w);

/// Number of supports with exactly s_k indices per level (the maximal
/// elements of the model support family); saturates at 2^64-1.
std::uint64_t support_count(const LevelStructure& ls);

/// Visits every exactly-s_k-per-level support in lexicographic order.
void for_each_support(const LevelStructure& ls, const std::function<void(const std::vector<int>&)>& visit);

/// Materialized for_each_support (small structures / tests).
std::vector<SupportSet> enumerate_supports(const LevelStructure& ls);

class EnumerationLimitError : public std::runtime_error {
public:
    EnumerationLimitError(const std::string& what, std::uint64_t count)
        : std::runtime_error(what), count_(count) {}
    std::uint64_t count() const { return count_; }

private:
    std::uint64_t count_;
};

struct RiclResult {
    double delta = 0.0;
    SupportSet worst_support{{}, 0};
};

/// Restricted isometry constant over the levels model by exhaustive support
/// enumeration: max over supports of ||A_D^T A_D - I||_2, each Gram
/// submatrix handled by the symmetric Jacobi eigensolver. Errors with the
/// support count when it exceeds enumeration_cap.
RiclResult ricl_bruteforce(const DenseMatrix& A, const LevelStructure& ls,
                           std::uint64_t enumeration_cap = 1'000'000);

struct GuaranteeReport {
    double condition_threshold = 0.0;
    bool condition_met = false;
    double rho = 0.0;        // contraction factor per iteration
    double tau_bound = 0.0;  // noise amplification bound; +inf when the condition fails
    std::string notes;
};

/// IHTL recovery condition: delta_{6s,M} < 1/sqrt(3), rho = sqrt(3) delta,
/// tau = sqrt(3) sqrt(1 + delta) / (1 - rho).
GuaranteeReport iht_guarantee(double delta_6s);

/// CoSaMPL recovery condition: delta_{8s,M} < sqrt(sqrt(11/3) - 1)/2
/// (about 0.478), rho = sqrt(2 d^2 (1 + 3 d^2) / (1 - d^2)), tau the
/// per-iteration noise constant divided by (1 - rho).
GuaranteeReport cosamp_guarantee(double delta_8s);

/// Weighted quadratically-constrained basis pursuit admissibility threshold
/// 1 / (sqrt(2 zeta / xi) + 1) on delta_{2s,M}.
double qcbp_threshold(const LevelStructure& ls, const LevelWeights& w);

/// Gaussian measurement bound
/// m = C * delta^-2 * (sum_k s_k log(e (M_k - M_{k-1}) / s_k) + log(1/eps));
/// levels with s_k = 0 contribute nothing.
double gaussian_sample_bound(const LevelStructure& ls, double delta, double eps, double C);

}  // namespace levelcs
