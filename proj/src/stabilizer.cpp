#include "qpir/stabilizer.hpp"

namespace qpir {

FieldElement symplectic_product(const SymplecticVector& x, const SymplecticVector& y) {
    if (x.size() != y.size()) throw ParameterError("symplectic product length mismatch");
    if (x.empty() || x.size() % 2 != 0) throw ParameterError("symplectic vectors have even length");
    size_t n = x.size() / 2;
    FieldElement acc(0, x[0].spec());
    for (size_t i = 0; i < n; ++i) acc = acc + x[i] * y[n + i] + x[n + i] * y[i];
    return acc;
}

int symplectic_form(const SymplecticVector& x, const SymplecticVector& y) {
    return symplectic_product(x, y).trace();
}

namespace {

// Swap the halves of every row: the characteristic-2 matrix J applied on the right.
Matrix swap_halves(const Matrix& m) {
    size_t n = m.cols() / 2;
    Matrix out(m.rows(), m.cols(), m.spec());
    for (size_t i = 0; i < m.rows(); ++i) {
        for (size_t j = 0; j < n; ++j) {
            out.set(i, j, m.at(i, n + j));
            out.set(i, n + j, m.at(i, j));
        }
    }
    return out;
}

}  // namespace

StabilizerSpace::StabilizerSpace(const Matrix& star_parity, const Matrix& complement) {
    sites_ = star_parity.cols();
    x_block_ = star_parity;
    v_basis_ = Matrix::block_diag(star_parity, star_parity);
    if (complement.cols() != 2 * sites_) {
        throw ParameterError("complement basis width != 2n");
    }

    // Self-orthogonality of V under the symplectic form. Failure signals that
    // the input parity check does not come from a weakly self-dual code.
    for (size_t i = 0; i < v_basis_.rows(); ++i) {
        for (size_t j = 0; j < v_basis_.rows(); ++j) {
            if (symplectic_form(v_basis_.row(i), v_basis_.row(j)) != 0) {
                throw ConstructionError("stabilizer space is not self-orthogonal");
            }
        }
    }

    // V-perp is the F_q-kernel of the paired basis; the trace form adds nothing
    // for an F_q-linear space, so plain elimination computes the dual exactly.
    vperp_basis_ = swap_halves(v_basis_).kernel_basis();

    size_t d = v_basis_.rows();
    if (v_basis_.rank() != d) throw ConstructionError("stabilizer basis rows are dependent");
    if (vperp_basis_.rows() != 2 * sites_ - d) {
        throw ConstructionError("symplectic dual has unexpected dimension");
    }
    if (!rowspace_contains(vperp_basis_, v_basis_)) {
        throw ConstructionError("V not contained in its symplectic dual");
    }

    complement_basis_ = complement;
    finish_setup();
}

void StabilizerSpace::finish_setup() {
    Matrix basis = vstack(vperp_basis_, complement_basis_);
    if (basis.rows() != 2 * sites_) {
        throw ConstructionError("complement rows do not complete the dual to F_q^{2n}");
    }
    try {
        basis_inverse_ = basis.inverse();
    } catch (const SingularMatrixError&) {
        throw ConstructionError("dual plus complement rows do not form a basis of F_q^{2n}");
    }
}

CosetLabel StabilizerSpace::reduce(const SymplecticVector& s) const {
    if (s.size() != 2 * sites_) throw ParameterError("vector length != 2n");
    Vec coords = row_times(s, basis_inverse_);
    Vec tail(coords.end() - static_cast<long>(complement_basis_.rows()), coords.end());
    return CosetLabel{std::move(tail)};
}

CosetLabel StabilizerSpace::zero_label() const {
    return CosetLabel{Vec(complement_basis_.rows(), FieldElement(0, spec()))};
}

SymplecticVector StabilizerSpace::representative(const CosetLabel& label) const {
    if (label.coeffs.size() != complement_basis_.rows()) {
        throw ParameterError("coset label length mismatch");
    }
    return row_times(label.coeffs, complement_basis_);
}

CosetLabel StabilizerSpace::apply_weyl(const CosetLabel& state, const SymplecticVector& t) const {
    CosetLabel shift = reduce(t);
    return CosetLabel{add(state.coeffs, shift.coeffs)};
}

CosetLabel StabilizerSpace::label_from_counter(uint64_t counter) const {
    uint32_t q = spec().order();
    Vec coeffs(complement_basis_.rows(), FieldElement(0, spec()));
    for (size_t j = coeffs.size(); j-- > 0;) {
        coeffs[j] = FieldElement(static_cast<uint32_t>(counter % q), spec());
        counter /= q;
    }
    return CosetLabel{std::move(coeffs)};
}

uint64_t StabilizerSpace::counter_from_label(const CosetLabel& label) const {
    uint32_t q = spec().order();
    uint64_t counter = 0;
    for (const auto& e : label.coeffs) counter = counter * q + e.value();
    return counter;
}

uint64_t StabilizerSpace::label_count() const {
    uint64_t count = 1;
    for (size_t j = 0; j < complement_basis_.rows(); ++j) count *= spec().order();
    return count;
}

StabilizerSpace build_stabilizer_space(const Matrix& star_parity, const Matrix& complement) {
    return StabilizerSpace(star_parity, complement);
}

StabilizerSpace corrupted_space_for_tests(const Matrix& star_parity, const Matrix& complement) {
    StabilizerSpace good(star_parity, complement);
    StabilizerSpace bad;
    bad.sites_ = good.sites_;
    bad.x_block_ = good.x_block_;
    bad.v_basis_ = good.v_basis_;
    bad.complement_basis_ = good.complement_basis_;

    // Replace the last dual-basis row with a standard basis vector outside the
    // dual, keeping the stack invertible. Reductions then mix the masked
    // component into the label.
    Matrix vperp = good.vperp_basis_;
    const FieldSpec& fs = vperp.spec();
    size_t last = vperp.rows() - 1;
    for (size_t j = 0; j < vperp.cols(); ++j) {
        Vec cand(vperp.cols(), FieldElement(0, fs));
        cand[j] = FieldElement(1, fs);
        if (in_rowspace(good.vperp_basis(), cand)) continue;
        Matrix trial = vperp;
        for (size_t col = 0; col < trial.cols(); ++col) trial.set(last, col, cand[col]);
        try {
            bad.vperp_basis_ = trial;
            bad.finish_setup();
            return bad;
        } catch (const ConstructionError&) {
            continue;
        }
    }
    throw ConstructionError("could not build corrupted space");
}

}  // namespace qpir
