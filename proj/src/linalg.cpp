#include "qpir/linalg.hpp"

#include <algorithm>

namespace qpir {

FieldElement dot(const Vec& a, const Vec& b) {
    if (a.size() != b.size()) throw ParameterError("dot product length mismatch");
    if (a.empty()) throw ParameterError("dot product of empty vectors");
    FieldElement acc(0, a[0].spec());
    for (size_t i = 0; i < a.size(); ++i) acc = acc + a[i] * b[i];
    return acc;
}

Vec add(const Vec& a, const Vec& b) {
    if (a.size() != b.size()) throw ParameterError("vector sum length mismatch");
    Vec out(a);
    for (size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
    return out;
}

Vec scale(const FieldElement& c, const Vec& v) {
    Vec out(v);
    for (auto& e : out) e = c * e;
    return out;
}

Vec star(const Vec& a, const Vec& b) {
    if (a.size() != b.size()) throw ParameterError("star product length mismatch");
    Vec out(a);
    for (size_t i = 0; i < a.size(); ++i) out[i] = a[i] * b[i];
    return out;
}

bool is_zero(const Vec& v) {
    return std::all_of(v.begin(), v.end(), [](const FieldElement& e) { return e.is_zero(); });
}

Matrix::Matrix(size_t rows, size_t cols, const FieldSpec& spec)
    : rows_(rows), cols_(cols), spec_(&spec), data_(rows * cols, FieldElement(0, spec)) {}

Matrix Matrix::identity(size_t n, const FieldSpec& spec) {
    Matrix m(n, n, spec);
    for (size_t i = 0; i < n; ++i) m.set(i, i, FieldElement(1, spec));
    return m;
}

Matrix Matrix::from_rows(const std::vector<Vec>& rows) {
    if (rows.empty() || rows[0].empty()) throw ParameterError("from_rows needs a nonempty grid");
    Matrix m(rows.size(), rows[0].size(), rows[0][0].spec());
    for (size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != m.cols_) throw ParameterError("ragged rows in from_rows");
        for (size_t j = 0; j < m.cols_; ++j) m.set(i, j, rows[i][j]);
    }
    return m;
}

Matrix Matrix::block_diag(const Matrix& a, const Matrix& b) {
    if (&a.spec() != &b.spec()) throw FieldMismatchError("block_diag field mismatch");
    Matrix m(a.rows_ + b.rows_, a.cols_ + b.cols_, a.spec());
    for (size_t i = 0; i < a.rows_; ++i)
        for (size_t j = 0; j < a.cols_; ++j) m.set(i, j, a.at(i, j));
    for (size_t i = 0; i < b.rows_; ++i)
        for (size_t j = 0; j < b.cols_; ++j) m.set(a.rows_ + i, a.cols_ + j, b.at(i, j));
    return m;
}

void Matrix::set(size_t i, size_t j, const FieldElement& v) {
    if (&v.spec() != spec_) throw FieldMismatchError("matrix entry from a different field");
    data_[i * cols_ + j] = v;
}

Vec Matrix::row(size_t i) const {
    return Vec(data_.begin() + i * cols_, data_.begin() + (i + 1) * cols_);
}

Vec Matrix::col(size_t j) const {
    Vec out;
    out.reserve(rows_);
    for (size_t i = 0; i < rows_; ++i) out.push_back(at(i, j));
    return out;
}

Matrix Matrix::transposed() const {
    Matrix m(cols_, rows_, *spec_);
    for (size_t i = 0; i < rows_; ++i)
        for (size_t j = 0; j < cols_; ++j) m.set(j, i, at(i, j));
    return m;
}

Matrix Matrix::operator*(const Matrix& o) const {
    if (spec_ != o.spec_) throw FieldMismatchError("matrix product field mismatch");
    if (cols_ != o.rows_) throw ParameterError("matrix product shape mismatch");
    Matrix m(rows_, o.cols_, *spec_);
    for (size_t i = 0; i < rows_; ++i) {
        for (size_t l = 0; l < cols_; ++l) {
            FieldElement a = at(i, l);
            if (a.is_zero()) continue;
            for (size_t j = 0; j < o.cols_; ++j) {
                m.set(i, j, m.at(i, j) + a * o.at(l, j));
            }
        }
    }
    return m;
}

Matrix Matrix::operator+(const Matrix& o) const {
    if (spec_ != o.spec_) throw FieldMismatchError("matrix sum field mismatch");
    if (rows_ != o.rows_ || cols_ != o.cols_) throw ParameterError("matrix sum shape mismatch");
    Matrix m(rows_, cols_, *spec_);
    for (size_t i = 0; i < data_.size(); ++i) m.data_[i] = data_[i] + o.data_[i];
    return m;
}

bool Matrix::operator==(const Matrix& o) const {
    return spec_ == o.spec_ && rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
}

bool Matrix::is_zero() const {
    return std::all_of(data_.begin(), data_.end(),
                       [](const FieldElement& e) { return e.is_zero(); });
}

Matrix Matrix::select_cols(const std::vector<size_t>& cols) const {
    Matrix m(rows_, cols.size(), *spec_);
    for (size_t i = 0; i < rows_; ++i)
        for (size_t j = 0; j < cols.size(); ++j) m.set(i, j, at(i, cols[j]));
    return m;
}

Matrix Matrix::select_rows(const std::vector<size_t>& rows) const {
    Matrix m(rows.size(), cols_, *spec_);
    for (size_t i = 0; i < rows.size(); ++i)
        for (size_t j = 0; j < cols_; ++j) m.set(i, j, at(rows[i], j));
    return m;
}

Matrix Matrix::rref() const {
    Matrix m(*this);
    size_t pivot_row = 0;
    for (size_t col = 0; col < cols_ && pivot_row < rows_; ++col) {
        size_t sel = pivot_row;
        while (sel < rows_ && m.at(sel, col).is_zero()) ++sel;
        if (sel == rows_) continue;
        if (sel != pivot_row) {
            for (size_t j = 0; j < cols_; ++j) {
                FieldElement tmp = m.at(sel, j);
                m.set(sel, j, m.at(pivot_row, j));
                m.set(pivot_row, j, tmp);
            }
        }
        FieldElement piv_inv = m.at(pivot_row, col).inv();
        for (size_t j = 0; j < cols_; ++j) m.set(pivot_row, j, piv_inv * m.at(pivot_row, j));
        for (size_t i = 0; i < rows_; ++i) {
            if (i == pivot_row) continue;
            FieldElement f = m.at(i, col);
            if (f.is_zero()) continue;
            for (size_t j = 0; j < cols_; ++j) m.set(i, j, m.at(i, j) + f * m.at(pivot_row, j));
        }
        ++pivot_row;
    }
    return m;
}

size_t Matrix::rank() const {
    Matrix r = rref();
    size_t rank = 0;
    for (size_t i = 0; i < rows_; ++i) {
        if (!qpir::is_zero(r.row(i))) ++rank;
    }
    return rank;
}

Matrix Matrix::kernel_basis() const {
    Matrix r = rref();
    std::vector<long> pivot_of_col(cols_, -1);
    size_t rank = 0;
    for (size_t i = 0; i < rows_; ++i) {
        size_t j = 0;
        while (j < cols_ && r.at(i, j).is_zero()) ++j;
        if (j == cols_) break;
        pivot_of_col[j] = static_cast<long>(i);
        ++rank;
    }
    FieldElement one(1, *spec_);
    std::vector<Vec> basis;
    for (size_t j = 0; j < cols_; ++j) {
        if (pivot_of_col[j] >= 0) continue;
        Vec v(cols_, FieldElement(0, *spec_));
        v[j] = one;
        for (size_t l = 0; l < cols_; ++l) {
            if (pivot_of_col[l] >= 0) v[l] = r.at(static_cast<size_t>(pivot_of_col[l]), j);
        }
        basis.push_back(std::move(v));
    }
    if (basis.empty()) return Matrix(0, cols_, *spec_);
    return Matrix::from_rows(basis);
}

Matrix Matrix::inverse() const {
    if (rows_ != cols_) throw ParameterError("inverse of a non-square matrix");
    Matrix aug = hstack(*this, Matrix::identity(rows_, *spec_));
    Matrix r = aug.rref();
    for (size_t i = 0; i < rows_; ++i) {
        for (size_t j = 0; j < rows_; ++j) {
            FieldElement want(i == j ? 1u : 0u, *spec_);
            if (r.at(i, j) != want) throw SingularMatrixError("matrix is singular");
        }
    }
    std::vector<size_t> right(rows_);
    for (size_t j = 0; j < rows_; ++j) right[j] = rows_ + j;
    return r.select_cols(right);
}

Matrix vstack(const Matrix& a, const Matrix& b) {
    if (&a.spec() != &b.spec()) throw FieldMismatchError("vstack field mismatch");
    if (a.cols() != b.cols()) throw ParameterError("vstack column mismatch");
    Matrix m(a.rows() + b.rows(), a.cols(), a.spec());
    for (size_t i = 0; i < a.rows(); ++i)
        for (size_t j = 0; j < a.cols(); ++j) m.set(i, j, a.at(i, j));
    for (size_t i = 0; i < b.rows(); ++i)
        for (size_t j = 0; j < b.cols(); ++j) m.set(a.rows() + i, j, b.at(i, j));
    return m;
}

Matrix hstack(const Matrix& a, const Matrix& b) {
    if (&a.spec() != &b.spec()) throw FieldMismatchError("hstack field mismatch");
    if (a.rows() != b.rows()) throw ParameterError("hstack row mismatch");
    Matrix m(a.rows(), a.cols() + b.cols(), a.spec());
    for (size_t i = 0; i < a.rows(); ++i) {
        for (size_t j = 0; j < a.cols(); ++j) m.set(i, j, a.at(i, j));
        for (size_t j = 0; j < b.cols(); ++j) m.set(i, a.cols() + j, b.at(i, j));
    }
    return m;
}

Vec row_times(const Vec& x, const Matrix& m) {
    if (x.size() != m.rows()) throw ParameterError("row_times shape mismatch");
    Vec out(m.cols(), FieldElement(0, m.spec()));
    for (size_t i = 0; i < m.rows(); ++i) {
        if (x[i].is_zero()) continue;
        for (size_t j = 0; j < m.cols(); ++j) out[j] = out[j] + x[i] * m.at(i, j);
    }
    return out;
}

Vec times_col(const Matrix& m, const Vec& x) {
    if (x.size() != m.cols()) throw ParameterError("times_col shape mismatch");
    Vec out(m.rows(), FieldElement(0, m.spec()));
    for (size_t i = 0; i < m.rows(); ++i) out[i] = dot(m.row(i), x);
    return out;
}

bool in_rowspace(const Matrix& space, const Vec& v) {
    if (v.size() != space.cols()) throw ParameterError("in_rowspace length mismatch");
    Matrix stacked = vstack(space, Matrix::from_rows({v}));
    return stacked.rank() == space.rank();
}

bool rowspace_contains(const Matrix& outer, const Matrix& inner) {
    if (inner.rows() == 0) return true;
    return vstack(outer, inner).rank() == outer.rank();
}

bool same_rowspace(const Matrix& a, const Matrix& b) {
    return rowspace_contains(a, b) && rowspace_contains(b, a);
}

std::vector<std::vector<size_t>> subsets_of_size(size_t n, size_t k) {
    std::vector<std::vector<size_t>> out;
    if (k > n) return out;
    std::vector<size_t> idx(k);
    for (size_t i = 0; i < k; ++i) idx[i] = i;
    while (true) {
        out.push_back(idx);
        size_t i = k;
        while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
        if (i == 0) break;
        ++idx[i - 1];
        for (size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
    return out;
}

}  // namespace qpir
