/*
   Copyright 2026 the drinfeld-lab authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

        http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#ifndef DRINFELDLAB_LINALG_HPP
#define DRINFELDLAB_LINALG_HPP

#include <optional>

#include "gf.hpp"

namespace dlab {

using Vec = std::vector<FieldElem>;

/// Dense matrix over a finite field. Row major.
class Mat {
  public:
    Mat() = default;
    Mat(FieldPtr field, size_t rows, size_t cols)
        : field_(std::move(field)), rows_(rows), cols_(cols),
          a_(rows * cols, field_->zero()) {}

    static Mat identity(FieldPtr field, size_t n) {
        Mat m(field, n, n);
        for (size_t i = 0; i < n; ++i) m.at(i, i) = field->one();
        return m;
    }

    const FieldPtr& field() const { return field_; }
    size_t rows() const { return rows_; }
    size_t cols() const { return cols_; }

    FieldElem& at(size_t i, size_t j) { return a_[i * cols_ + j]; }
    const FieldElem& at(size_t i, size_t j) const { return a_[i * cols_ + j]; }

    Mat operator*(const Mat& r) const {
        if (cols_ != r.rows_) throw std::invalid_argument("matrix shape mismatch");
        Mat out(field_, rows_, r.cols_);
        for (size_t i = 0; i < rows_; ++i)
            for (size_t k = 0; k < cols_; ++k) {
                if (at(i, k).is_zero()) continue;
                for (size_t j = 0; j < r.cols_; ++j)
                    out.at(i, j) = out.at(i, j) + at(i, k) * r.at(k, j);
            }
        return out;
    }

    Mat operator+(const Mat& r) const {
        if (rows_ != r.rows_ || cols_ != r.cols_)
            throw std::invalid_argument("matrix shape mismatch");
        Mat out = *this;
        for (size_t i = 0; i < a_.size(); ++i) out.a_[i] = out.a_[i] + r.a_[i];
        return out;
    }

    Vec apply(const Vec& v) const {
        if (v.size() != cols_) throw std::invalid_argument("vector length mismatch");
        Vec out(rows_, field_->zero());
        for (size_t i = 0; i < rows_; ++i)
            for (size_t j = 0; j < cols_; ++j)
                if (!at(i, j).is_zero() && !v[j].is_zero())
                    out[i] = out[i] + at(i, j) * v[j];
        return out;
    }

    bool operator==(const Mat& r) const {
        return rows_ == r.rows_ && cols_ == r.cols_ && a_ == r.a_;
    }
    bool operator!=(const Mat& r) const { return !(*this == r); }

  private:
    FieldPtr field_;
    size_t rows_ = 0, cols_ = 0;
    std::vector<FieldElem> a_;
};

/// In-place reduced row echelon form; returns the pivot column of each
/// pivot row in order.
inline std::vector<size_t> rref(Mat& m) {
    std::vector<size_t> pivots;
    size_t row = 0;
    for (size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
        size_t sel = row;
        while (sel < m.rows() && m.at(sel, col).is_zero()) ++sel;
        if (sel == m.rows()) continue;
        if (sel != row)
            for (size_t j = 0; j < m.cols(); ++j) std::swap(m.at(sel, j), m.at(row, j));
        FieldElem inv = m.at(row, col).inv();
        for (size_t j = col; j < m.cols(); ++j) m.at(row, j) = m.at(row, j) * inv;
        for (size_t i = 0; i < m.rows(); ++i) {
            if (i == row || m.at(i, col).is_zero()) continue;
            FieldElem f = m.at(i, col);
            for (size_t j = col; j < m.cols(); ++j)
                m.at(i, j) = m.at(i, j) - f * m.at(row, j);
        }
        pivots.push_back(col);
        ++row;
    }
    return pivots;
}

inline size_t rank(Mat m) { return rref(m).size(); }

/// Basis of the right kernel {v : M v = 0}.
inline std::vector<Vec> kernel_basis(Mat m) {
    auto pivots = rref(m);
    std::vector<bool> is_pivot(m.cols(), false);
    for (size_t c : pivots) is_pivot[c] = true;
    std::vector<Vec> basis;
    for (size_t free_col = 0; free_col < m.cols(); ++free_col) {
        if (is_pivot[free_col]) continue;
        Vec v(m.cols(), m.field()->zero());
        v[free_col] = m.field()->one();
        for (size_t r = 0; r < pivots.size(); ++r)
            v[pivots[r]] = -m.at(r, free_col);
        basis.push_back(std::move(v));
    }
    return basis;
}

/// One solution of M x = b, if any.
inline std::optional<Vec> solve(const Mat& m, const Vec& b) {
    if (b.size() != m.rows()) throw std::invalid_argument("rhs length mismatch");
    Mat aug(m.field(), m.rows(), m.cols() + 1);
    for (size_t i = 0; i < m.rows(); ++i) {
        for (size_t j = 0; j < m.cols(); ++j) aug.at(i, j) = m.at(i, j);
        aug.at(i, m.cols()) = b[i];
    }
    auto pivots = rref(aug);
    if (!pivots.empty() && pivots.back() == m.cols()) return std::nullopt;
    Vec x(m.cols(), m.field()->zero());
    for (size_t r = 0; r < pivots.size(); ++r) x[pivots[r]] = aug.at(r, m.cols());
    return x;
}

/// Rows = given vectors; returns an independent subset spanning the same
/// space, in input order.
inline std::vector<Vec> independent_subset(const FieldPtr& field, size_t dim,
                                           const std::vector<Vec>& vecs) {
    std::vector<Vec> kept;
    for (const auto& v : vecs) {
        Mat trial(field, kept.size() + 1, dim);
        for (size_t i = 0; i < kept.size(); ++i)
            for (size_t j = 0; j < dim; ++j) trial.at(i, j) = kept[i][j];
        for (size_t j = 0; j < dim; ++j) trial.at(kept.size(), j) = v[j];
        if (rank(trial) > kept.size()) kept.push_back(v);
    }
    return kept;
}

/// Membership of v in the row span of `basis`.
inline bool in_span(const FieldPtr& field, const std::vector<Vec>& basis, const Vec& v) {
    if (basis.empty()) {
        for (const auto& x : v)
            if (!x.is_zero()) return false;
        return true;
    }
    size_t dim = v.size();
    Mat m(field, dim, basis.size());
    for (size_t j = 0; j < basis.size(); ++j)
        for (size_t i = 0; i < dim; ++i) m.at(i, j) = basis[j][i];
    return solve(m, v).has_value();
}

/// Coordinates of v in the row span of `basis`, if representable.
inline std::optional<Vec> span_coords(const FieldPtr& field, const std::vector<Vec>& basis,
                                      const Vec& v) {
    size_t dim = v.size();
    Mat m(field, dim, basis.size());
    for (size_t j = 0; j < basis.size(); ++j)
        for (size_t i = 0; i < dim; ++i) m.at(i, j) = basis[j][i];
    return solve(m, v);
}

} // namespace dlab

#endif
