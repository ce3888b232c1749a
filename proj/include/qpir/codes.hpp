#pragma once

#include "qpir/linalg.hpp"

namespace qpir {

// Generalized Reed-Solomon code: evaluations of polynomials of degree < dim at
// distinct locators, scaled coordinate-wise by nonzero column multipliers.
// Generator matrices are kept in evaluation (Vandermonde) form so block
// constructions stay bit-exact; parity checks are row-reduced canonical.
class GrsCode {
public:
    // Placeholder [1, 1] code over GF(2); overwritten wherever it appears.
    GrsCode()
        : locators_{FieldElement(0, FieldSpec::get(1))},
          multipliers_{FieldElement(1, FieldSpec::get(1))},
          dim_(1) {}
    GrsCode(Vec locators, Vec multipliers, size_t dim);

    size_t length() const { return locators_.size(); }
    size_t dim() const { return dim_; }
    const Vec& locators() const { return locators_; }
    const Vec& multipliers() const { return multipliers_; }
    const FieldSpec& spec() const { return locators_[0].spec(); }

    // dim x n, entry (i, j) = multiplier_j * locator_j^i.
    Matrix generator_matrix() const;
    // (n - dim) x n in reduced row echelon form; rows span the dual code.
    // Computed by kernel elimination, independently of dual().
    Matrix parity_check_matrix() const;

    // Same locators, multipliers (m_j * u_j)^-1 with u_j = prod_{i!=j}(a_j - a_i).
    GrsCode dual() const;

    Vec encode(const Vec& message) const;
    // Recover the message from dim symbols at distinct known positions.
    Vec erasure_decode(const std::vector<size_t>& positions, const Vec& symbols) const;
    // Every dim x dim minor of the generator is nonsingular.
    bool is_mds() const;

    // u_j = prod_{i != j}(locator_j - locator_i).
    Vec locator_products() const;

    bool operator==(const GrsCode& o) const {
        return locators_ == o.locators_ && multipliers_ == o.multipliers_ && dim_ == o.dim_;
    }

private:
    Vec locators_;
    Vec multipliers_;
    size_t dim_;
};

// Same locators required; the result has dimension dim(c1) + dim(c2) - 1 and
// multipliers m_{c1} star m_{c2}.
GrsCode star_product(const GrsCode& c1, const GrsCode& c2);

// Self-dual [2k, k] code on the given 2k distinct locators over GF(2^r):
// multipliers sqrt(u_j^-1). The product G G^T = 0 is checked, not assumed.
GrsCode self_dual_grs(const Vec& locators);

// Weakly self-dual [n, k] code (dual contained in the code) for k >= n/2.
// Even n: supercode of the self-dual [n, n/2] code on the same locators.
// Odd n: puncture a self-dual [n+1, (n+1)/2] code at a spare locator, then
// raise the dimension with the inherited multipliers.
GrsCode weakly_self_dual_grs(size_t n, size_t k, const Vec& locators);

// An [n, t] code D on the storage code's locators such that storage * D is a
// weakly self-dual [n, k+t-1] code. Requires n/2 <= k+t-1 < n.
GrsCode query_code_for(const GrsCode& storage, size_t t);

// First n elements of the canonical enumeration 0, 1, 2, ...
Vec default_locators(size_t n, const FieldSpec& spec);

// Length-2n code with generator diag(G, G) over a base code of length n.
struct CartesianSquareCode {
    GrsCode base;

    size_t length() const { return 2 * base.length(); }
    size_t dim() const { return 2 * base.dim(); }
    Matrix generator_matrix() const {
        Matrix g = base.generator_matrix();
        return Matrix::block_diag(g, g);
    }
};

}  // namespace qpir
