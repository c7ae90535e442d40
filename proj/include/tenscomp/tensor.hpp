#pragma once

// Dense N-order tensors and their matricizations.
//
// Storage is a flat column vector in mode-1-fastest order: the entry with
// zero-based multi-index (i_1, ..., i_N) lives at
//
//     i_1 + p_1 * (i_2 + p_2 * (i_3 + ...)).
//
// The mode-n matricization is the p_n x J_n matrix (J_n = prod_{k != n} p_k)
// whose columns are the mode-n fibers. Column order is inherited from the flat
// order with mode n removed: the remaining indices are linearized with the
// lowest mode fastest. With left = prod_{k<n} p_k the entry at flat position
// a + left * (i_n + p_n * b) lands in row i_n, column a + left * b.
//
// Modes are 1-based throughout the public API.

#include "tenscomp/errors.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace tenscomp {

using Index = Eigen::Index;

class Shape {
public:
    Shape() = default;

    explicit Shape(std::vector<Index> dims) : dims_(std::move(dims)) {
        if (dims_.empty())
            throw InvalidArgument("Shape: order must be at least 1");
        for (Index p : dims_)
            if (p < 1)
                throw InvalidArgument("Shape: dimensions must be positive");
    }

    Shape(std::initializer_list<Index> dims) : Shape(std::vector<Index>(dims)) {}

    int order() const { return static_cast<int>(dims_.size()); }
    const std::vector<Index> &dims() const { return dims_; }

    /// p_mode, 1-based.
    Index dim(int mode) const {
        check_mode(mode);
        return dims_[static_cast<std::size_t>(mode - 1)];
    }

    Index size() const {
        return std::accumulate(dims_.begin(), dims_.end(), Index{1},
                               std::multiplies<>());
    }

    /// J_mode: product of all other dimensions.
    Index complement(int mode) const { return size() / dim(mode); }

    /// Product of the dimensions before `mode`.
    Index stride(int mode) const {
        check_mode(mode);
        return std::accumulate(dims_.begin(), dims_.begin() + (mode - 1),
                               Index{1}, std::multiplies<>());
    }

    Index min_dim() const { return *std::min_element(dims_.begin(), dims_.end()); }
    Index max_dim() const { return *std::max_element(dims_.begin(), dims_.end()); }

    void check_mode(int mode) const {
        if (mode < 1 || mode > order())
            throw InvalidArgument("mode " + std::to_string(mode) +
                                  " out of range [1, " +
                                  std::to_string(order()) + "]");
    }

    /// Flat position of a zero-based multi-index.
    Index linear_index(std::span<const Index> idx) const {
        if (idx.size() != dims_.size())
            throw InvalidArgument("linear_index: index has wrong order");
        Index pos = 0;
        for (std::size_t k = dims_.size(); k-- > 0;) {
            if (idx[k] < 0 || idx[k] >= dims_[k])
                throw InvalidArgument("linear_index: index out of bounds");
            pos = pos * dims_[k] + idx[k];
        }
        return pos;
    }

    /// Inverse of linear_index.
    std::vector<Index> multi_index(Index pos) const {
        std::vector<Index> idx(dims_.size());
        for (std::size_t k = 0; k < dims_.size(); ++k) {
            idx[k] = pos % dims_[k];
            pos /= dims_[k];
        }
        return idx;
    }

    std::string to_string() const {
        std::string s = "(";
        for (std::size_t k = 0; k < dims_.size(); ++k)
            s += (k ? "," : "") + std::to_string(dims_[k]);
        return s + ")";
    }

    friend bool operator==(const Shape &, const Shape &) = default;

private:
    std::vector<Index> dims_;
};

template <typename Scalar>
class Tensor {
public:
    using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
    using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

    Tensor() = default;

    explicit Tensor(Shape shape)
        : shape_(std::move(shape)), values_(Vector::Zero(shape_.size())) {}

    Tensor(Shape shape, Vector values)
        : shape_(std::move(shape)), values_(std::move(values)) {
        if (values_.size() != shape_.size())
            throw InvalidArgument("Tensor: value count " +
                                  std::to_string(values_.size()) +
                                  " does not match shape " + shape_.to_string());
    }

    static Tensor Zero(const Shape &shape) { return Tensor(shape); }
    static Tensor Constant(const Shape &shape, Scalar c) {
        return Tensor(shape, Vector::Constant(shape.size(), c));
    }

    const Shape &shape() const { return shape_; }
    int order() const { return shape_.order(); }
    Index size() const { return values_.size(); }

    const Vector &values() const { return values_; }
    Vector &values() { return values_; }

    Scalar operator[](Index pos) const { return values_[pos]; }
    Scalar &operator[](Index pos) { return values_[pos]; }

    /// Zero-based multi-index access.
    Scalar operator()(std::span<const Index> idx) const {
        return values_[shape_.linear_index(idx)];
    }
    Scalar &operator()(std::span<const Index> idx) {
        return values_[shape_.linear_index(idx)];
    }
    Scalar operator()(std::initializer_list<Index> idx) const {
        return (*this)(std::span<const Index>(idx.begin(), idx.size()));
    }
    Scalar &operator()(std::initializer_list<Index> idx) {
        return (*this)(std::span<const Index>(idx.begin(), idx.size()));
    }

    Tensor &operator+=(const Tensor &o) {
        check_same_shape(o, "operator+=");
        values_ += o.values_;
        return *this;
    }
    Tensor &operator-=(const Tensor &o) {
        check_same_shape(o, "operator-=");
        values_ -= o.values_;
        return *this;
    }
    Tensor &operator*=(Scalar s) {
        values_ *= s;
        return *this;
    }

    friend Tensor operator+(Tensor a, const Tensor &b) { return a += b; }
    friend Tensor operator-(Tensor a, const Tensor &b) { return a -= b; }
    friend Tensor operator*(Scalar s, Tensor a) { return a *= s; }
    friend Tensor operator*(Tensor a, Scalar s) { return a *= s; }

    friend bool operator==(const Tensor &a, const Tensor &b) {
        return a.shape_ == b.shape_ && a.values_ == b.values_;
    }

    void check_same_shape(const Tensor &o, const char *what) const {
        if (!(shape_ == o.shape_))
            throw InvalidArgument(std::string(what) + ": shape mismatch " +
                                  shape_.to_string() + " vs " +
                                  o.shape_.to_string());
    }

private:
    Shape shape_;
    Vector values_;
};

using DenseTensor = Tensor<double>;

/// Mode-`mode` matricization (1-based mode).
template <typename Scalar>
typename Tensor<Scalar>::Matrix unfold(const Tensor<Scalar> &t, int mode) {
    const Shape &shape = t.shape();
    shape.check_mode(mode);
    const Index rows = shape.dim(mode);
    const Index left = shape.stride(mode);
    const Index right = shape.size() / (left * rows);

    typename Tensor<Scalar>::Matrix m(rows, left * right);
    const auto &v = t.values();
    for (Index b = 0; b < right; ++b)
        for (Index i = 0; i < rows; ++i)
            for (Index a = 0; a < left; ++a)
                m(i, a + left * b) = v[a + left * (i + rows * b)];
    return m;
}

/// Inverse of unfold for the given target shape.
template <typename Derived>
Tensor<typename Derived::Scalar> fold(const Eigen::MatrixBase<Derived> &expr,
                                      int mode, const Shape &shape) {
    using Scalar = typename Derived::Scalar;
    const typename Tensor<Scalar>::Matrix m = expr;
    shape.check_mode(mode);
    const Index rows = shape.dim(mode);
    const Index left = shape.stride(mode);
    const Index right = shape.size() / (left * rows);
    if (m.rows() != rows || m.cols() != left * right)
        throw InvalidArgument("fold: matrix is " + std::to_string(m.rows()) +
                              "x" + std::to_string(m.cols()) +
                              ", expected " + std::to_string(rows) + "x" +
                              std::to_string(left * right) + " for mode " +
                              std::to_string(mode) + " of " + shape.to_string());

    Tensor<Scalar> t(shape);
    auto &v = t.values();
    for (Index b = 0; b < right; ++b)
        for (Index i = 0; i < rows; ++i)
            for (Index a = 0; a < left; ++a)
                v[a + left * (i + rows * b)] = m(i, a + left * b);
    return t;
}

template <typename Scalar>
Scalar inner(const Tensor<Scalar> &a, const Tensor<Scalar> &b) {
    a.check_same_shape(b, "inner");
    return a.values().dot(b.values());
}

template <typename Scalar>
Scalar frobenius_norm(const Tensor<Scalar> &t) {
    return t.values().norm();
}

} // namespace tenscomp
