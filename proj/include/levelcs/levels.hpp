#pragma once

#include <string>
#include <vector>

#include "levelcs/dense.hpp"

namespace levelcs {

/// A partition of {1,...,N} into r contiguous levels delimited by increasing
/// boundaries M_1 < ... < M_r = N, together with per-level sparsity budgets
/// s_1,...,s_r (0 <= s_k <= level width). Level indices k and coordinate
/// indices held in SupportSet are 1-based; raw vector components stay 0-based.
class LevelStructure {
public:
    LevelStructure(std::vector<int> levels, std::vector<int> sparsities);

    int num_levels() const { return static_cast<int>(levels_.size()); }
    int dim() const { return levels_.back(); }
    int total_sparsity() const;

    /// 0-based half-open component range [begin, end) of level k, 1 <= k <= r.
    int level_begin(int k) const { return k == 1 ? 0 : levels_[static_cast<std::size_t>(k) - 2]; }
    int level_end(int k) const { return levels_[static_cast<std::size_t>(k) - 1]; }
    int level_width(int k) const { return level_end(k) - level_begin(k); }
    int local_sparsity(int k) const { return sparsities_[static_cast<std::size_t>(k) - 1]; }

    /// Level containing the 1-based coordinate index (1 <= index <= N).
    int level_of(int index) const;

    const std::vector<int>& levels() const { return levels_; }
    const std::vector<int>& sparsities() const { return sparsities_; }

    /// Round-trips through parse(): "M1,...,Mr/s1,...,sr".
    std::string to_string() const;
    static LevelStructure parse(const std::string& text);

    bool operator==(const LevelStructure&) const = default;

private:
    std::vector<int> levels_;
    std::vector<int> sparsities_;
};

/// Each local sparsity multiplied by factor and clamped at its level width.
LevelStructure scale_sparsities(const LevelStructure& ls, int factor);

/// Sorted set of distinct 1-based coordinate indices into {1,...,N}.
class SupportSet {
public:
    SupportSet(std::vector<int> indices, int dim);
    static SupportSet empty(int dim) { return SupportSet({}, dim); }

    int dim() const { return dim_; }
    int size() const { return static_cast<int>(indices_.size()); }
    const std::vector<int>& indices() const { return indices_; }
    bool contains(int index) const;

    bool operator==(const SupportSet&) const = default;

private:
    std::vector<int> indices_;
    int dim_ = 0;
};

SupportSet support_union(const SupportSet& a, const SupportSet& b);

/// Indices of the nonzero entries of x.
SupportSet nonzero_support(const DenseVector& x);

/// P_Delta x: keeps x on the support, zero elsewhere.
DenseVector restrict_to(const DenseVector& x, const SupportSet& support);

/// Projection of x onto level k (1 <= k <= r), zero outside the level.
DenseVector level_slice(const DenseVector& x, const LevelStructure& ls, int k);

/// Per level k, the indices of the s_k largest-magnitude entries of x in that
/// level; magnitude ties break toward the lowest index. Exactly s_k indices
/// are returned per level even when some selected entries are zero.
SupportSet top_support(const DenseVector& x, const LevelStructure& ls);

/// Hard thresholding in levels: x restricted to top_support(x, ls).
DenseVector hard_threshold(const DenseVector& x, const LevelStructure& ls);

/// True when x has at most s_k nonzeros in every level.
bool is_sparse_in_levels(const DenseVector& x, const LevelStructure& ls);

/// Positive per-level weights paired with a LevelStructure of the same r.
class LevelWeights {
public:
    explicit LevelWeights(std::vector<double> per_level);
    static LevelWeights unit(int num_levels);

    int num_levels() const { return static_cast<int>(per_level_.size()); }
    double weight(int k) const { return per_level_[static_cast<std::size_t>(k) - 1]; }
    const std::vector<double>& per_level() const { return per_level_; }

    bool operator==(const LevelWeights&) const = default;

private:
    std::vector<double> per_level_;
};

}  // namespace levelcs
