#pragma once

#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <vector>

namespace levelcs {

/// Dense real vector with 0-based component access.
class DenseVector {
public:
    DenseVector() = default;
    explicit DenseVector(int dim, double value = 0.0) : entries_(static_cast<std::size_t>(dim), value) {}
    DenseVector(std::initializer_list<double> entries) : entries_(entries) {}
    explicit DenseVector(std::vector<double> entries) : entries_(std::move(entries)) {}

    int dim() const { return static_cast<int>(entries_.size()); }
    double& operator[](int i) { return entries_[static_cast<std::size_t>(i)]; }
    double operator[](int i) const { return entries_[static_cast<std::size_t>(i)]; }
    const std::vector<double>& entries() const { return entries_; }
    std::vector<double>& entries() { return entries_; }

    double norm() const {
        double acc = 0.0;
        for (double v : entries_) acc += v * v;
        return std::sqrt(acc);
    }
    double norm1() const {
        double acc = 0.0;
        for (double v : entries_) acc += std::abs(v);
        return acc;
    }
    double dot(const DenseVector& other) const {
        double acc = 0.0;
        for (int i = 0; i < dim(); ++i) acc += entries_[static_cast<std::size_t>(i)] * other[i];
        return acc;
    }
    bool all_finite() const {
        for (double v : entries_)
            if (!std::isfinite(v)) return false;
        return true;
    }

    DenseVector& operator+=(const DenseVector& other) {
        for (int i = 0; i < dim(); ++i) entries_[static_cast<std::size_t>(i)] += other[i];
        return *this;
    }
    DenseVector& operator-=(const DenseVector& other) {
        for (int i = 0; i < dim(); ++i) entries_[static_cast<std::size_t>(i)] -= other[i];
        return *this;
    }
    DenseVector& operator*=(double c) {
        for (double& v : entries_) v *= c;
        return *this;
    }

    bool operator==(const DenseVector&) const = default;

private:
    std::vector<double> entries_;
};

inline DenseVector operator+(DenseVector a, const DenseVector& b) { return a += b; }
inline DenseVector operator-(DenseVector a, const DenseVector& b) { return a -= b; }
inline DenseVector operator*(double c, DenseVector a) { return a *= c; }

/// Dense real matrix, row-major storage.
class DenseMatrix {
public:
    DenseMatrix() = default;
    DenseMatrix(int rows, int cols, double value = 0.0)
        : rows_(rows), cols_(cols), entries_(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols), value) {}
    DenseMatrix(int rows, int cols, std::vector<double> entries)
        : rows_(rows), cols_(cols), entries_(std::move(entries)) {}

    static DenseMatrix identity(int n) {
        DenseMatrix eye(n, n, 0.0);
        for (int i = 0; i < n; ++i) eye(i, i) = 1.0;
        return eye;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    double& operator()(int i, int j) { return entries_[static_cast<std::size_t>(i) * cols_ + j]; }
    double operator()(int i, int j) const { return entries_[static_cast<std::size_t>(i) * cols_ + j]; }
    const std::vector<double>& entries() const { return entries_; }
    std::vector<double>& entries() { return entries_; }

    bool all_finite() const {
        for (double v : entries_)
            if (!std::isfinite(v)) return false;
        return true;
    }

    bool operator==(const DenseMatrix&) const = default;

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<double> entries_;
};

}  // namespace levelcs
