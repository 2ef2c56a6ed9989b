#include "levelcs/solvers.hpp"

#include <cmath>

#include "levelcs/linalg.hpp"

namespace levelcs {

namespace {

constexpr double kDivergenceNorm = 1e12;

void check_dims(const DenseMatrix& A, const DenseVector& y, const LevelStructure& ls) {
    if (y.dim() != A.rows()) throw std::invalid_argument("solver: measurement dimension mismatch");
    if (ls.dim() != A.cols()) throw std::invalid_argument("solver: structure dimension mismatch");
}

DenseVector initial_iterate(const DenseMatrix& A, const SolveOptions& opts) {
    if (!opts.x0) return DenseVector(A.cols(), 0.0);
    if (opts.x0->dim() != A.cols()) throw std::invalid_argument("solver: x0 dimension mismatch");
    return *opts.x0;
}

void validate_opts(const SolveOptions& opts) {
    if (opts.max_iter < 1) throw std::invalid_argument("solver: max_iter must be >= 1");
    if (!(opts.rel_change_tol > 0.0)) throw std::invalid_argument("solver: rel_change_tol must be positive");
}

void guard_iterate(const DenseVector& candidate, const DenseVector& last_good, int iterations) {
    if (!candidate.all_finite() || candidate.norm() > kDivergenceNorm)
        throw SolverDivergence("solver diverged at iteration " + std::to_string(iterations + 1), last_good,
                               iterations);
}

// Relative iterate change, absolute when the new iterate vanishes.
bool stop_by_change(const DenseVector& next, const DenseVector& current, double tol) {
    const double change = (next - current).norm();
    const double scale = next.norm();
    return (scale > 0.0 ? change / scale : change) < tol;
}

struct IterationLog {
    SolveResult result;
    const DenseMatrix* A;
    const DenseVector* y;

    IterationLog(const DenseMatrix& A_, const DenseVector& y_, const DenseVector& x0, bool record) : A(&A_), y(&y_) {
        result.residual_history.push_back((*y - apply(*A, x0)).norm());
        if (record) result.trajectory.push_back(x0);
    }
    void push(const DenseVector& x, bool record) {
        result.residual_history.push_back((*y - apply(*A, x)).norm());
        if (record) result.trajectory.push_back(x);
    }
};

}  // namespace

std::string to_string(StopReason reason) {
    switch (reason) {
        case StopReason::Converged: return "converged";
        case StopReason::MaxIter: return "max_iter";
        case StopReason::FixedIterations: return "fixed_iterations";
    }
    return "unknown";
}

SolveResult ihtl(const DenseMatrix& A, const DenseVector& y, const LevelStructure& ls,
                 const SolveOptions& opts) {
    check_dims(A, y, ls);
    validate_opts(opts);

    DenseVector x = initial_iterate(A, opts);
    IterationLog log(A, y, x, opts.record_trajectory);

    for (int n = 0; n < opts.max_iter; ++n) {
        const DenseVector gradient = apply(A, y - apply(A, x), true);
        DenseVector next = hard_threshold(x + gradient, ls);
        guard_iterate(next, x, n);
        log.push(next, opts.record_trajectory);
        const bool done = stop_by_change(next, x, opts.rel_change_tol);
        x = std::move(next);
        if (done) {
            log.result.xhat = std::move(x);
            log.result.iterations = n + 1;
            log.result.stop_reason = StopReason::Converged;
            return std::move(log.result);
        }
    }
    log.result.xhat = std::move(x);
    log.result.iterations = opts.max_iter;
    log.result.stop_reason = StopReason::MaxIter;
    return std::move(log.result);
}

SolveResult nihtl(const DenseMatrix& A, const DenseVector& y, const LevelStructure& ls,
                  const SolveOptions& opts) {
    check_dims(A, y, ls);
    validate_opts(opts);

    constexpr double c = 0.1;
    constexpr double kappa = 1.1 / (1.0 - c);
    constexpr double shrink = kappa * (1.0 - c);  // = 1.1
    constexpr int max_backtracks = 200;

    DenseVector x = initial_iterate(A, opts);
    IterationLog log(A, y, x, opts.record_trajectory);

    bool have_support = x.norm() > 0.0;
    SupportSet selected = have_support ? top_support(x, ls) : SupportSet::empty(ls.dim());

    for (int n = 0; n < opts.max_iter; ++n) {
        const DenseVector gradient = apply(A, y - apply(A, x), true);
        const SupportSet candidate_support = have_support ? selected : top_support(gradient, ls);

        const DenseVector restricted = restrict_to(gradient, candidate_support);
        const double denom = apply(A, restricted).norm();
        double mu = denom > 0.0 ? (restricted.norm() * restricted.norm()) / (denom * denom) : 1.0;

        DenseVector next;
        SupportSet next_support = SupportSet::empty(ls.dim());
        for (int attempt = 0; attempt < max_backtracks; ++attempt) {
            next = x + mu * gradient;
            next_support = top_support(next, ls);
            next = restrict_to(next, next_support);
            if (next_support == candidate_support) break;
            const DenseVector step = next - x;
            const double step_image = apply(A, step).norm();
            if (step_image == 0.0) break;
            const double omega = (1.0 - c) * (step.norm() * step.norm()) / (step_image * step_image);
            if (mu <= omega) break;
            mu /= shrink;
        }

        guard_iterate(next, x, n);
        log.push(next, opts.record_trajectory);
        const bool done = stop_by_change(next, x, opts.rel_change_tol);
        x = std::move(next);
        selected = std::move(next_support);
        have_support = true;
        if (done) {
            log.result.xhat = std::move(x);
            log.result.iterations = n + 1;
            log.result.stop_reason = StopReason::Converged;
            return std::move(log.result);
        }
    }
    log.result.xhat = std::move(x);
    log.result.iterations = opts.max_iter;
    log.result.stop_reason = StopReason::MaxIter;
    return std::move(log.result);
}

SolveResult cosampl(const DenseMatrix& A, const DenseVector& y, const LevelStructure& ls,
                    const SolveOptions& opts) {
    check_dims(A, y, ls);
    validate_opts(opts);

    const LevelStructure doubled = scale_sparsities(ls, 2);

    DenseVector x = initial_iterate(A, opts);
    IterationLog log(A, y, x, opts.record_trajectory);

    for (int n = 0; n < opts.max_iter; ++n) {
        const DenseVector gradient = apply(A, y - apply(A, x), true);
        const SupportSet merged = support_union(nonzero_support(x), top_support(gradient, doubled));
        const DenseVector candidate = least_squares_on_support(A, y, merged);
        DenseVector next = hard_threshold(candidate, ls);
        guard_iterate(next, x, n);
        log.push(next, opts.record_trajectory);
        const bool done = stop_by_change(next, x, opts.rel_change_tol);
        x = std::move(next);
        if (done) {
            log.result.xhat = std::move(x);
            log.result.iterations = n + 1;
            log.result.stop_reason = StopReason::Converged;
            return std::move(log.result);
        }
    }
    log.result.xhat = std::move(x);
    log.result.iterations = opts.max_iter;
    log.result.stop_reason = StopReason::MaxIter;
    return std::move(log.result);
}

SolveResult ompl(const DenseMatrix& A, const DenseVector& y, const LevelStructure& ls,
                 const SolveOptions& opts) {
    check_dims(A, y, ls);

    const int total = ls.total_sparsity();
    DenseVector x = initial_iterate(A, opts);
    IterationLog log(A, y, x, opts.record_trajectory);

    std::vector<int> selected;
    std::vector<int> picked_per_level(static_cast<std::size_t>(ls.num_levels()), 0);
    std::vector<bool> saturated(static_cast<std::size_t>(ls.num_levels()), false);
    std::vector<bool> chosen(static_cast<std::size_t>(ls.dim()), false);

    for (int step = 0; step < total; ++step) {
        const DenseVector gradient = apply(A, y - apply(A, x), true);

        // Largest correlation magnitude outside saturated levels and not yet
        // selected; the strict comparison keeps the lowest index on ties and
        // yields the lowest admissible index when the residual is zero.
        int best_index = 0;  // 1-based; 0 = none found
        double best_value = -1.0;
        for (int k = 1; k <= ls.num_levels(); ++k) {
            if (saturated[static_cast<std::size_t>(k) - 1]) continue;
            for (int i = ls.level_begin(k); i < ls.level_end(k); ++i) {
                if (chosen[static_cast<std::size_t>(i)]) continue;
                const double value = std::abs(gradient[i]);
                if (value > best_value) {
                    best_value = value;
                    best_index = i + 1;
                }
            }
        }
        if (best_index == 0)
            throw std::logic_error("ompl: all levels saturated before total sparsity reached");

        const int level = ls.level_of(best_index);
        chosen[static_cast<std::size_t>(best_index) - 1] = true;
        selected.push_back(best_index);
        if (++picked_per_level[static_cast<std::size_t>(level) - 1] == ls.local_sparsity(level))
            saturated[static_cast<std::size_t>(level) - 1] = true;

        DenseVector next = least_squares_on_support(A, y, SupportSet(selected, ls.dim()));
        guard_iterate(next, x, step);
        log.push(next, opts.record_trajectory);
        x = std::move(next);
    }

    log.result.xhat = std::move(x);
    log.result.iterations = total;
    log.result.stop_reason = StopReason::FixedIterations;
    return std::move(log.result);
}

Algorithm algorithm_from_name(const std::string& name) {
    if (name == "iht") return Algorithm::Iht;
    if (name == "niht") return Algorithm::Niht;
    if (name == "cosamp") return Algorithm::Cosamp;
    if (name == "omp") return Algorithm::Omp;
    throw std::invalid_argument("unknown algorithm '" + name + "' (expected iht, niht, cosamp or omp)");
}

std::string algorithm_name(Algorithm alg) {
    switch (alg) {
        case Algorithm::Iht: return "iht";
        case Algorithm::Niht: return "niht";
        case Algorithm::Cosamp: return "cosamp";
        case Algorithm::Omp: return "omp";
    }
    return "unknown";
}

SolveResult solve(Algorithm alg, const DenseMatrix& A, const DenseVector& y, const LevelStructure& ls,
                  const SolveOptions& opts) {
    switch (alg) {
        case Algorithm::Iht: return ihtl(A, y, ls, opts);
        case Algorithm::Niht: return nihtl(A, y, ls, opts);
        case Algorithm::Cosamp: return cosampl(A, y, ls, opts);
        case Algorithm::Omp: return ompl(A, y, ls, opts);
    }
    throw std::invalid_argument("unknown algorithm");
}

}  // namespace levelcs
