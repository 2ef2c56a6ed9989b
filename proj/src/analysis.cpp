#include "levelcs/analysis.hpp"

#include <cmath>
#include <limits>

#include "levelcs/linalg.hpp"

namespace levelcs {

double weighted_l1_norm(const DenseVector& x, const LevelStructure& ls, const LevelWeights& w) {
    if (x.dim() != ls.dim()) throw std::invalid_argument("weighted_l1_norm: dimension mismatch");
    if (w.num_levels() != ls.num_levels()) throw std::invalid_argument("weighted_l1_norm: weight count mismatch");
    double total = 0.0;
    for (int k = 1; k <= ls.num_levels(); ++k) {
        double level_l1 = 0.0;
        for (int i = ls.level_begin(k); i < ls.level_end(k); ++i) level_l1 += std::abs(x[i]);
        total += w.weight(k) * level_l1;
    }
    return total;
}

LevelWeights default_weights(const LevelStructure& ls) {
    const double total = ls.total_sparsity();
    std::vector<double> weights(static_cast<std::size_t>(ls.num_levels()));
    for (int k = 1; k <= ls.num_levels(); ++k) {
        if (ls.local_sparsity(k) == 0)
            throw std::invalid_argument("optimal weights undefined for empty level " + std::to_string(k));
        weights[static_cast<std::size_t>(k) - 1] = std::sqrt(total / ls.local_sparsity(k));
    }
    return LevelWeights(std::move(weights));
}

ZetaXi zeta_xi(const LevelStructure& ls, const LevelWeights& w) {
    if (w.num_levels() != ls.num_levels()) throw std::invalid_argument("zeta_xi: weight count mismatch");
    double zeta = 0.0;
    double xi = std::numeric_limits<double>::infinity();
    bool any = false;
    for (int k = 1; k <= ls.num_levels(); ++k) {
        const double term = w.weight(k) * w.weight(k) * ls.local_sparsity(k);
        zeta += term;
        if (ls.local_sparsity(k) > 0) {
            xi = std::min(xi, term);
            any = true;
        }
    }
    if (!any) throw std::invalid_argument("zeta_xi: every level has zero sparsity");
    return {zeta, xi};
}

double best_approx_error(const DenseVector& x, const LevelStructure& ls, const LevelWeights& w) {
    return weighted_l1_norm(x - hard_threshold(x, ls), ls, w);
}

std::uint64_t support_count(const LevelStructure& ls) {
    constexpr std::uint64_t kMax = std::numeric_limits<std::uint64_t>::max();
    std::uint64_t count = 1;
    for (int k = 1; k <= ls.num_levels(); ++k) {
        const int n = ls.level_width(k);
        const int r = ls.local_sparsity(k);
        // C(n, r) with overflow saturation
        std::uint64_t binom = 1;
        for (int i = 1; i <= r; ++i) {
            const std::uint64_t numer = static_cast<std::uint64_t>(n - r + i);
            if (binom > kMax / numer) return kMax;
            binom = binom * numer / static_cast<std::uint64_t>(i);
        }
        if (binom != 0 && count > kMax / binom) return kMax;
        count *= binom;
    }
    return count;
}

namespace {

void visit_level(const LevelStructure& ls, int k, std::vector<int>& buffer,
                 const std::function<void(const std::vector<int>&)>& visit) {
    if (k > ls.num_levels()) {
        visit(buffer);
        return;
    }
    const int begin = ls.level_begin(k) + 1;  // 1-based
    const int end = ls.level_end(k) + 1;
    const int pick = ls.local_sparsity(k);
    if (pick == 0) {
        visit_level(ls, k + 1, buffer, visit);
        return;
    }
    // lexicographic combinations of `pick` indices from [begin, end)
    std::vector<int> combo(static_cast<std::size_t>(pick));
    for (int i = 0; i < pick; ++i) combo[static_cast<std::size_t>(i)] = begin + i;
    while (true) {
        const std::size_t base = buffer.size();
        buffer.insert(buffer.end(), combo.begin(), combo.end());
        visit_level(ls, k + 1, buffer, visit);
        buffer.resize(base);

        int pos = pick - 1;
        while (pos >= 0 && combo[static_cast<std::size_t>(pos)] == end - pick + pos) --pos;
        if (pos < 0) break;
        ++combo[static_cast<std::size_t>(pos)];
        for (int i = pos + 1; i < pick; ++i)
            combo[static_cast<std::size_t>(i)] = combo[static_cast<std::size_t>(i) - 1] + 1;
    }
}

}  // namespace

void for_each_support(const LevelStructure& ls, const std::function<void(const std::vector<int>&)>& visit) {
    std::vector<int> buffer;
    buffer.reserve(static_cast<std::size_t>(ls.total_sparsity()));
    visit_level(ls, 1, buffer, visit);
}

std::vector<SupportSet> enumerate_supports(const LevelStructure& ls) {
    std::vector<SupportSet> supports;
    for_each_support(ls, [&](const std::vector<int>& indices) { supports.emplace_back(indices, ls.dim()); });
    return supports;
}

RiclResult ricl_bruteforce(const DenseMatrix& A, const LevelStructure& ls, std::uint64_t enumeration_cap) {
    if (ls.dim() != A.cols()) throw std::invalid_argument("ricl: structure dimension mismatch");
    const std::uint64_t count = support_count(ls);
    if (count > enumeration_cap)
        throw EnumerationLimitError("ricl: " + std::to_string(count) + " supports exceed enumeration cap " +
                                        std::to_string(enumeration_cap),
                                    count);

    // Full Gram once; each support reads a principal submatrix.
    const int n = A.cols();
    DenseMatrix gram(n, n, 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            double acc = 0.0;
            for (int row = 0; row < A.rows(); ++row) acc += A(row, i) * A(row, j);
            gram(i, j) = acc;
            gram(j, i) = acc;
        }

    RiclResult result;
    result.worst_support = SupportSet::empty(ls.dim());
    bool first = true;
    for_each_support(ls, [&](const std::vector<int>& support) {
        const int p = static_cast<int>(support.size());
        DenseMatrix deviation(p, p, 0.0);
        for (int a = 0; a < p; ++a)
            for (int b = 0; b < p; ++b) {
                const double value = gram(support[static_cast<std::size_t>(a)] - 1,
                                          support[static_cast<std::size_t>(b)] - 1);
                deviation(a, b) = a == b ? value - 1.0 : value;
            }
        const double delta = symmetric_max_abs_eig(std::move(deviation));
        if (first || delta > result.delta) {
            result.delta = delta;
            result.worst_support = SupportSet(support, ls.dim());
            first = false;
        }
    });
    return result;
}

GuaranteeReport iht_guarantee(double delta_6s) {
    if (!(delta_6s >= 0.0 && delta_6s < 1.0)) throw std::invalid_argument("iht_guarantee: delta must be in [0,1)");
    GuaranteeReport report;
    report.condition_threshold = 1.0 / std::sqrt(3.0);
    report.condition_met = delta_6s < report.condition_threshold;
    report.rho = std::sqrt(3.0) * delta_6s;
    report.tau_bound = report.condition_met
                           ? std::sqrt(3.0) * std::sqrt(1.0 + delta_6s) / (1.0 - report.rho)
                           : std::numeric_limits<double>::infinity();
    report.notes = "requires delta < 1/sqrt(3); rho = sqrt(3) * delta";
    return report;
}

GuaranteeReport cosamp_guarantee(double delta_8s) {
    if (!(delta_8s >= 0.0 && delta_8s < 1.0)) throw std::invalid_argument("cosamp_guarantee: delta must be in [0,1)");
    GuaranteeReport report;
    report.condition_threshold = std::sqrt((std::sqrt(11.0 / 3.0) - 1.0) / 4.0);
    report.condition_met = delta_8s < report.condition_threshold;
    const double d2 = delta_8s * delta_8s;
    report.rho = std::sqrt(2.0 * d2 * (1.0 + 3.0 * d2) / (1.0 - d2));
    if (report.condition_met) {
        const double per_iter = std::sqrt(2.0 * (1.0 + delta_8s) * (1.0 + 3.0 * d2) / (1.0 - d2)) +
                                2.0 * std::sqrt(1.0 + delta_8s) / (1.0 - delta_8s);
        report.tau_bound = per_iter / (1.0 - report.rho);
    } else {
        report.tau_bound = std::numeric_limits<double>::infinity();
    }
    report.notes = "requires delta < sqrt(sqrt(11/3)-1)/2; rho = sqrt(2 d^2 (1+3 d^2) / (1-d^2))";
    return report;
}

double qcbp_threshold(const LevelStructure& ls, const LevelWeights& w) {
    const ZetaXi quantities = zeta_xi(ls, w);
    return 1.0 / (std::sqrt(2.0 * quantities.zeta / quantities.xi) + 1.0);
}

double gaussian_sample_bound(const LevelStructure& ls, double delta, double eps, double C) {
    if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("gaussian_sample_bound: delta must be in (0,1)");
    if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("gaussian_sample_bound: eps must be in (0,1)");
    if (!(C > 0.0)) throw std::invalid_argument("gaussian_sample_bound: C must be positive");
    double sum = 0.0;
    for (int k = 1; k <= ls.num_levels(); ++k) {
        const int s_k = ls.local_sparsity(k);
        if (s_k == 0) continue;
        sum += s_k * std::log(std::exp(1.0) * ls.level_width(k) / static_cast<double>(s_k));
    }
    return C / (delta * delta) * (sum + std::log(1.0 / eps));
}

}  // namespace levelcs
