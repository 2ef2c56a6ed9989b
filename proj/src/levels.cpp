#include "levelcs/levels.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>
#include <stdexcept>

namespace levelcs {

namespace {

std::vector<int> parse_int_list(const std::string& text) {
    std::vector<int> values;
    std::stringstream stream(text);
    std::string token;
    while (std::getline(stream, token, ',')) {
        std::size_t used = 0;
        int value = 0;
        try {
            value = std::stoi(token, &used);
        } catch (const std::exception&) {
            throw std::invalid_argument("bad integer '" + token + "' in level structure");
        }
        while (used < token.size() && std::isspace(static_cast<unsigned char>(token[used]))) ++used;
        if (used != token.size())
            throw std::invalid_argument("bad integer '" + token + "' in level structure");
        values.push_back(value);
    }
    if (values.empty()) throw std::invalid_argument("empty list in level structure");
    return values;
}

}  // namespace

LevelStructure::LevelStructure(std::vector<int> levels, std::vector<int> sparsities)
    : levels_(std::move(levels)), sparsities_(std::move(sparsities)) {
    if (levels_.empty()) throw std::invalid_argument("level structure needs at least one level");
    if (levels_.size() != sparsities_.size())
        throw std::invalid_argument("levels and sparsities must have equal length");
    int previous = 0;
    for (std::size_t k = 0; k < levels_.size(); ++k) {
        if (levels_[k] <= previous)
            throw std::invalid_argument("levels not increasing at position " + std::to_string(k + 1));
        const int width = levels_[k] - previous;
        if (sparsities_[k] < 0)
            throw std::invalid_argument("negative sparsity at level " + std::to_string(k + 1));
        if (sparsities_[k] > width)
            throw std::invalid_argument("s" + std::to_string(k + 1) + " > level width " + std::to_string(width));
        previous = levels_[k];
    }
}

int LevelStructure::total_sparsity() const {
    int total = 0;
    for (int s : sparsities_) total += s;
    return total;
}

int LevelStructure::level_of(int index) const {
    if (index < 1 || index > dim()) throw std::out_of_range("index outside {1,...,N}");
    const auto it = std::lower_bound(levels_.begin(), levels_.end(), index);
    return static_cast<int>(it - levels_.begin()) + 1;
}

std::string LevelStructure::to_string() const {
    std::ostringstream out;
    for (std::size_t k = 0; k < levels_.size(); ++k) out << (k ? "," : "") << levels_[k];
    out << '/';
    for (std::size_t k = 0; k < sparsities_.size(); ++k) out << (k ? "," : "") << sparsities_[k];
    return out.str();
}

LevelStructure LevelStructure::parse(const std::string& text) {
    const auto slash = text.find('/');
    if (slash == std::string::npos)
        throw std::invalid_argument("level structure must look like \"M1,...,Mr/s1,...,sr\"");
    return LevelStructure(parse_int_list(text.substr(0, slash)), parse_int_list(text.substr(slash + 1)));
}

LevelStructure scale_sparsities(const LevelStructure& ls, int factor) {
    if (factor < 1) throw std::invalid_argument("scale factor must be >= 1");
    std::vector<int> scaled(ls.sparsities());
    for (int k = 1; k <= ls.num_levels(); ++k) {
        const long long grown = static_cast<long long>(factor) * scaled[static_cast<std::size_t>(k) - 1];
        scaled[static_cast<std::size_t>(k) - 1] =
            static_cast<int>(std::min<long long>(grown, ls.level_width(k)));
    }
    return LevelStructure(ls.levels(), std::move(scaled));
}

SupportSet::SupportSet(std::vector<int> indices, int dim) : indices_(std::move(indices)), dim_(dim) {
    std::sort(indices_.begin(), indices_.end());
    for (std::size_t i = 0; i < indices_.size(); ++i) {
        if (indices_[i] < 1 || indices_[i] > dim_)
            throw std::invalid_argument("support index " + std::to_string(indices_[i]) + " outside [1, N]");
        if (i > 0 && indices_[i] == indices_[i - 1])
            throw std::invalid_argument("duplicate support index " + std::to_string(indices_[i]));
    }
}

bool SupportSet::contains(int index) const {
    return std::binary_search(indices_.begin(), indices_.end(), index);
}

SupportSet support_union(const SupportSet& a, const SupportSet& b) {
    if (a.dim() != b.dim()) throw std::invalid_argument("support dimension mismatch");
    std::vector<int> merged;
    merged.reserve(a.indices().size() + b.indices().size());
    std::set_union(a.indices().begin(), a.indices().end(), b.indices().begin(), b.indices().end(),
                   std::back_inserter(merged));
    return SupportSet(std::move(merged), a.dim());
}

SupportSet nonzero_support(const DenseVector& x) {
    std::vector<int> indices;
    for (int i = 0; i < x.dim(); ++i)
        if (x[i] != 0.0) indices.push_back(i + 1);
    return SupportSet(std::move(indices), x.dim());
}

DenseVector restrict_to(const DenseVector& x, const SupportSet& support) {
    if (support.dim() != x.dim()) throw std::invalid_argument("restrict: dimension mismatch");
    DenseVector out(x.dim(), 0.0);
    for (int index : support.indices()) out[index - 1] = x[index - 1];
    return out;
}

DenseVector level_slice(const DenseVector& x, const LevelStructure& ls, int k) {
    if (x.dim() != ls.dim()) throw std::invalid_argument("level_slice: dimension mismatch");
    if (k < 1 || k > ls.num_levels()) throw std::out_of_range("level index out of range");
    DenseVector out(x.dim(), 0.0);
    for (int i = ls.level_begin(k); i < ls.level_end(k); ++i) out[i] = x[i];
    return out;
}

SupportSet top_support(const DenseVector& x, const LevelStructure& ls) {
    if (x.dim() != ls.dim()) throw std::invalid_argument("top_support: dimension mismatch");
    std::vector<int> selected;
    selected.reserve(static_cast<std::size_t>(ls.total_sparsity()));
    std::vector<int> order;
    for (int k = 1; k <= ls.num_levels(); ++k) {
        order.clear();
        for (int i = ls.level_begin(k); i < ls.level_end(k); ++i) order.push_back(i);
        // magnitude descending, ties toward the lowest index
        std::sort(order.begin(), order.end(), [&x](int a, int b) {
            const double ma = std::abs(x[a]);
            const double mb = std::abs(x[b]);
            if (ma != mb) return ma > mb;
            return a < b;
        });
        for (int j = 0; j < ls.local_sparsity(k); ++j) selected.push_back(order[static_cast<std::size_t>(j)] + 1);
    }
    return SupportSet(std::move(selected), x.dim());
}

DenseVector hard_threshold(const DenseVector& x, const LevelStructure& ls) {
    return restrict_to(x, top_support(x, ls));
}

bool is_sparse_in_levels(const DenseVector& x, const LevelStructure& ls) {
    if (x.dim() != ls.dim()) return false;
    for (int k = 1; k <= ls.num_levels(); ++k) {
        int nonzeros = 0;
        for (int i = ls.level_begin(k); i < ls.level_end(k); ++i)
            if (x[i] != 0.0) ++nonzeros;
        if (nonzeros > ls.local_sparsity(k)) return false;
    }
    return true;
}

LevelWeights::LevelWeights(std::vector<double> per_level) : per_level_(std::move(per_level)) {
    if (per_level_.empty()) throw std::invalid_argument("weights need at least one level");
    for (double w : per_level_)
        if (!(w > 0.0)) throw std::invalid_argument("weights must be positive");
}

LevelWeights LevelWeights::unit(int num_levels) {
    return LevelWeights(std::vector<double>(static_cast<std::size_t>(num_levels), 1.0));
}

}  // namespace levelcs
