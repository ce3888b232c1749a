#pragma once

#include "qpir/linalg.hpp"

namespace qpir {

// Length-2n vector over F_q written (a | b): X-part a, Z-part b.
using SymplecticVector = Vec;

// Trace-symplectic form tr(sum_i x_i y_{n+i} - x_{n+i} y_i) in {0, 1}.
// The sign is immaterial in characteristic 2; for general characteristic the
// form pairs through J = [[0, -I], [I, 0]].
int symplectic_form(const SymplecticVector& x, const SymplecticVector& y);

// F_q-valued symplectic pairing before the trace: sum_i (x_i y_{n+i} + x_{n+i} y_i).
FieldElement symplectic_product(const SymplecticVector& x, const SymplecticVector& y);

// Element of the quotient of F_q^{2n} by the symplectic dual of the stabilizer
// space, stored as its coefficient vector over the complement basis rows.
struct CosetLabel {
    Vec coeffs;

    bool operator==(const CosetLabel& o) const { return coeffs == o.coeffs; }
    bool operator!=(const CosetLabel& o) const { return !(*this == o); }
    bool is_zero() const { return qpir::is_zero(coeffs); }
};

// The symplectic layer behind one measurement round:
//   V      = rowspace(diag(H, H)) for the parity check H of the star code,
//   V-perp = its symplectic dual (computed by elimination),
//   complement = the round's targeting rows, completing a basis of F_q^{2n}.
// A vector's coset is its coefficient vector over the complement rows; the
// 2n x 2n basis inverse is solved once so reduction is a vector-matrix product.
class StabilizerSpace {
public:
    StabilizerSpace(const Matrix& star_parity, const Matrix& complement);

    size_t sites() const { return sites_; }
    const FieldSpec& spec() const { return v_basis_.spec(); }
    size_t coset_dim() const { return complement_basis_.rows(); }

    const Matrix& v_basis() const { return v_basis_; }
    const Matrix& vperp_basis() const { return vperp_basis_; }
    const Matrix& complement_basis() const { return complement_basis_; }
    // The classical block H with v_basis = diag(H, H).
    const Matrix& x_block() const { return x_block_; }

    CosetLabel reduce(const SymplecticVector& s) const;
    CosetLabel zero_label() const;
    SymplecticVector representative(const CosetLabel& label) const;
    // Weyl action on coset labels: shift by the reduction of t.
    CosetLabel apply_weyl(const CosetLabel& state, const SymplecticVector& t) const;

    CosetLabel label_from_counter(uint64_t counter) const;
    uint64_t counter_from_label(const CosetLabel& label) const;
    uint64_t label_count() const;

private:
    friend StabilizerSpace corrupted_space_for_tests(const Matrix&, const Matrix&);
    StabilizerSpace() = default;
    void finish_setup();

    size_t sites_ = 0;
    Matrix x_block_;
    Matrix v_basis_;
    Matrix vperp_basis_;
    Matrix complement_basis_;
    Matrix basis_inverse_;  // inverse of [vperp; complement]
};

StabilizerSpace build_stabilizer_space(const Matrix& star_parity, const Matrix& complement);

// Fault injection for audit negative controls: replaces the tail of the
// reduction basis so measurement outcomes leak the masked component.
StabilizerSpace corrupted_space_for_tests(const Matrix& star_parity, const Matrix& complement);

}  // namespace qpir
