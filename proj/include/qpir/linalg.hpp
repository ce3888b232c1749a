#pragma once

#include <cstddef>
#include <vector>

#include "qpir/gf.hpp"

namespace qpir {

using Vec = std::vector<FieldElement>;

FieldElement dot(const Vec& a, const Vec& b);
Vec add(const Vec& a, const Vec& b);
Vec scale(const FieldElement& c, const Vec& v);
Vec star(const Vec& a, const Vec& b);  // coordinate-wise product
bool is_zero(const Vec& v);

// Dense matrix over one GF(2^r). Row-major. All entries share a FieldSpec.
class Matrix {
public:
    Matrix() : rows_(0), cols_(0), spec_(&FieldSpec::get(1)) {}
    Matrix(size_t rows, size_t cols, const FieldSpec& spec);
    static Matrix identity(size_t n, const FieldSpec& spec);
    static Matrix from_rows(const std::vector<Vec>& rows);
    static Matrix block_diag(const Matrix& a, const Matrix& b);

    size_t rows() const { return rows_; }
    size_t cols() const { return cols_; }
    const FieldSpec& spec() const { return *spec_; }

    FieldElement at(size_t i, size_t j) const { return data_[i * cols_ + j]; }
    void set(size_t i, size_t j, const FieldElement& v);

    Vec row(size_t i) const;
    Vec col(size_t j) const;
    Matrix transposed() const;
    Matrix operator*(const Matrix& o) const;
    Matrix operator+(const Matrix& o) const;
    bool operator==(const Matrix& o) const;
    bool is_zero() const;

    Matrix select_cols(const std::vector<size_t>& cols) const;
    Matrix select_rows(const std::vector<size_t>& rows) const;

    // Reduced row echelon form; the canonical basis of the row space.
    Matrix rref() const;
    size_t rank() const;
    // Rows span the right kernel {x : A x^T = 0}, in canonical (rref-derived) form.
    Matrix kernel_basis() const;
    Matrix inverse() const;  // throws SingularMatrixError

private:
    size_t rows_, cols_;
    const FieldSpec* spec_;
    std::vector<FieldElement> data_;
};

Matrix vstack(const Matrix& a, const Matrix& b);
Matrix hstack(const Matrix& a, const Matrix& b);

// x * m for a row vector x.
Vec row_times(const Vec& x, const Matrix& m);
// m * x^T for a column vector x, returned as a plain Vec.
Vec times_col(const Matrix& m, const Vec& x);

bool in_rowspace(const Matrix& space, const Vec& v);
bool rowspace_contains(const Matrix& outer, const Matrix& inner);
bool same_rowspace(const Matrix& a, const Matrix& b);

// All size-k subsets of {0,...,n-1} in lexicographic order.
std::vector<std::vector<size_t>> subsets_of_size(size_t n, size_t k);

}  // namespace qpir
