#include "qpir/qoracle.hpp"

#include <algorithm>
#include <cmath>

namespace qpir {

namespace {

uint64_t checked_dimension(unsigned sites, const FieldSpec& spec, uint64_t limit) {
    uint64_t dim = 1;
    for (unsigned i = 0; i < sites; ++i) {
        dim *= spec.order();
        if (dim > limit) {
            throw SizeLimitError("oracle dimension q^n exceeds limit " + std::to_string(limit));
        }
    }
    return dim;
}

// Exact cross-block orthogonality H H^T = 0 licenses trivial phases: the Weyl
// images of V then form an abelian group on the nose.
void require_css(const StabilizerSpace& space) {
    const Matrix& h = space.x_block();
    if (!(h * h.transposed()).is_zero()) {
        throw ConstructionError(
            "unsupported stabilizer structure: classical block is not self-orthogonal");
    }
}

}  // namespace

CMat CMat::identity(size_t n) {
    CMat m = zero(n);
    for (size_t i = 0; i < n; ++i) m.at(i, i) = Complex(1, 0);
    return m;
}

CMat CMat::operator*(const CMat& o) const {
    if (n != o.n) throw ParameterError("CMat product shape mismatch");
    CMat out = zero(n);
    for (size_t i = 0; i < n; ++i) {
        for (size_t l = 0; l < n; ++l) {
            Complex x = at(i, l);
            if (x == Complex(0, 0)) continue;
            for (size_t j = 0; j < n; ++j) out.at(i, j) += x * o.at(l, j);
        }
    }
    return out;
}

CMat CMat::operator+(const CMat& o) const {
    if (n != o.n) throw ParameterError("CMat sum shape mismatch");
    CMat out = *this;
    for (size_t i = 0; i < a.size(); ++i) out.a[i] += o.a[i];
    return out;
}

CMat CMat::scaled(Complex c) const {
    CMat out = *this;
    for (auto& x : out.a) x *= c;
    return out;
}

CMat CMat::adjoint() const {
    CMat out = zero(n);
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) out.at(i, j) = std::conj(at(j, i));
    return out;
}

Complex CMat::trace() const {
    Complex t(0, 0);
    for (size_t i = 0; i < n; ++i) t += at(i, i);
    return t;
}

double CMat::max_abs_diff(const CMat& o) const {
    double m = 0;
    for (size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - o.a[i]));
    return m;
}

double CMat::max_abs() const {
    double m = 0;
    for (const auto& x : a) m = std::max(m, std::abs(x));
    return m;
}

SparseState::SparseState(unsigned sites, const FieldSpec& spec) : sites_(sites), spec_(&spec) {
    checked_dimension(sites, spec, kOracleDimensionLimit);
}

SparseState SparseState::basis_state(unsigned sites, const FieldSpec& spec, uint64_t index) {
    SparseState s(sites, spec);
    if (index >= s.dimension()) throw ParameterError("basis state index out of range");
    s.amp_.emplace_back(index, Complex(1, 0));
    return s;
}

uint64_t SparseState::dimension() const {
    uint64_t dim = 1;
    for (unsigned i = 0; i < sites_; ++i) dim *= spec_->order();
    return dim;
}

void SparseState::compact(double eps) {
    std::sort(amp_.begin(), amp_.end(),
              [](const auto& x, const auto& y) { return x.first < y.first; });
    std::vector<std::pair<uint64_t, Complex>> merged;
    for (const auto& [idx, c] : amp_) {
        if (!merged.empty() && merged.back().first == idx) {
            merged.back().second += c;
        } else {
            merged.emplace_back(idx, c);
        }
    }
    amp_.clear();
    for (const auto& [idx, c] : merged) {
        if (std::abs(c) > eps) amp_.emplace_back(idx, c);
    }
}

double SparseState::norm2() const {
    double s = 0;
    for (const auto& [idx, c] : amp_) s += std::norm(c);
    return s;
}

void SparseState::scale(Complex c) {
    for (auto& [idx, amp] : amp_) amp *= c;
}

Complex SparseState::amplitude(uint64_t index) const {
    auto it = std::lower_bound(amp_.begin(), amp_.end(), index,
                               [](const auto& e, uint64_t v) { return e.first < v; });
    if (it != amp_.end() && it->first == index) return it->second;
    return Complex(0, 0);
}

Complex SparseState::inner(const SparseState& other) const {
    const SparseState* small = this;
    const SparseState* big = &other;
    bool conj_small = true;
    if (other.amp_.size() < amp_.size()) {
        small = &other;
        big = this;
        conj_small = false;
    }
    Complex acc(0, 0);
    for (const auto& [idx, c] : small->amp_) {
        Complex o = big->amplitude(idx);
        acc += conj_small ? std::conj(c) * o : std::conj(o) * c;
    }
    return acc;
}

void SparseState::add_scaled(const SparseState& other, Complex c) {
    for (const auto& [idx, amp] : other.amp_) amp_.emplace_back(idx, c * amp);
    compact();
}

uint64_t SparseState::pack_x_part(const Vec& a) const {
    if (a.size() != sites_) throw ParameterError("X part length != site count");
    unsigned r = spec_->degree();
    uint64_t packed = 0;
    for (unsigned s = 0; s < sites_; ++s) {
        packed |= static_cast<uint64_t>(a[s].value()) << (r * (sites_ - 1 - s));
    }
    return packed;
}

int SparseState::z_phase_bit(const Vec& b, uint64_t index) const {
    unsigned r = spec_->degree();
    uint32_t mask = spec_->order() - 1;
    int bit = 0;
    for (unsigned s = 0; s < sites_; ++s) {
        uint32_t digit = static_cast<uint32_t>(index >> (r * (sites_ - 1 - s))) & mask;
        bit ^= spec_->trace(spec_->mul(b[s].value(), digit));
    }
    return bit;
}

void SparseState::apply_site_weyl(size_t site, const FieldElement& a, const FieldElement& b) {
    if (site >= sites_) throw ParameterError("site index out of range");
    unsigned r = spec_->degree();
    uint32_t mask = spec_->order() - 1;
    uint64_t shift_bits = static_cast<uint64_t>(a.value()) << (r * (sites_ - 1 - site));
    for (auto& [idx, c] : amp_) {
        uint32_t digit = static_cast<uint32_t>(idx >> (r * (sites_ - 1 - site))) & mask;
        if (spec_->trace(spec_->mul(b.value(), digit))) c = -c;
        idx ^= shift_bits;
    }
    compact();
}

void SparseState::apply_weyl(const SymplecticVector& s) {
    if (s.size() != 2 * sites_) throw ParameterError("Weyl label length != 2n");
    Vec a(s.begin(), s.begin() + sites_);
    Vec b(s.begin() + sites_, s.end());
    uint64_t shift_bits = pack_x_part(a);
    for (auto& [idx, c] : amp_) {
        if (z_phase_bit(b, idx)) c = -c;
        idx ^= shift_bits;
    }
    compact();
}

Complex SparseState::weyl_expectation(const SymplecticVector& v) const {
    if (v.size() != 2 * sites_) throw ParameterError("Weyl label length != 2n");
    Vec a(v.begin(), v.begin() + sites_);
    Vec b(v.begin() + sites_, v.end());
    uint64_t shift_bits = pack_x_part(a);
    Complex acc(0, 0);
    for (const auto& [idx, c] : amp_) {
        Complex target = amplitude(idx ^ shift_bits);
        if (target == Complex(0, 0)) continue;
        Complex term = std::conj(target) * c;
        acc += z_phase_bit(b, idx) ? -term : term;
    }
    return acc;
}

WeylOperator::WeylOperator(SymplecticVector label, uint64_t dimension_limit)
    : label_(std::move(label)) {
    if (label_.empty() || label_.size() % 2 != 0) {
        throw ParameterError("Weyl label must have even positive length");
    }
    sites_ = static_cast<unsigned>(label_.size() / 2);
    spec_ = &label_[0].spec();
    dim_ = checked_dimension(sites_, *spec_, dimension_limit);
    SparseState probe(sites_, *spec_);
    shift_ = probe.pack_x_part(Vec(label_.begin(), label_.begin() + sites_));
}

int WeylOperator::phase_bit(uint64_t column) const {
    SparseState probe(sites_, *spec_);
    return probe.z_phase_bit(Vec(label_.begin() + sites_, label_.end()), column);
}

void WeylOperator::apply(SparseState& psi) const {
    if (&psi.spec() != spec_ || psi.sites() != sites_) {
        throw ParameterError("Weyl operator applied to mismatched register");
    }
    psi.apply_weyl(label_);
}

CMat WeylOperator::dense() const {
    if (dim_ > kDenseMaterializeLimit) {
        throw SizeLimitError("dense Weyl matrix beyond materialization limit");
    }
    CMat m = CMat::zero(dim_);
    for (uint64_t j = 0; j < dim_; ++j) {
        m.at(target(j), j) = phase_bit(j) ? Complex(-1, 0) : Complex(1, 0);
    }
    return m;
}

WeylOperator weyl_matrix(const SymplecticVector& s, uint64_t dimension_limit) {
    return WeylOperator(s, dimension_limit);
}

DensityMatrix DensityMatrix::pure(SparseState psi) {
    DensityMatrix rho;
    rho.parts_.emplace_back(1.0, std::move(psi));
    return rho;
}

DensityMatrix DensityMatrix::mixture(std::vector<std::pair<double, SparseState>> parts) {
    if (parts.empty()) throw ParameterError("density matrix needs at least one component");
    for (const auto& [w, psi] : parts) {
        if (w < 0) throw ParameterError("negative ensemble weight");
    }
    DensityMatrix rho;
    rho.parts_ = std::move(parts);
    return rho;
}

unsigned DensityMatrix::sites() const { return parts_[0].second.sites(); }
const FieldSpec& DensityMatrix::spec() const { return parts_[0].second.spec(); }

double DensityMatrix::trace() const {
    double t = 0;
    for (const auto& [w, psi] : parts_) t += w * psi.norm2();
    return t;
}

void DensityMatrix::apply_site_weyl(size_t site, const FieldElement& a, const FieldElement& b) {
    for (auto& [w, psi] : parts_) psi.apply_site_weyl(site, a, b);
}

void DensityMatrix::apply_weyl(const SymplecticVector& s) {
    for (auto& [w, psi] : parts_) psi.apply_weyl(s);
}

Complex DensityMatrix::weyl_expectation(const SymplecticVector& v) const {
    Complex acc(0, 0);
    for (const auto& [w, psi] : parts_) acc += w * psi.weyl_expectation(v);
    return acc;
}

CMat DensityMatrix::dense() const {
    uint64_t dim = parts_[0].second.dimension();
    if (dim > kDenseMaterializeLimit) {
        throw SizeLimitError("dense density matrix beyond materialization limit");
    }
    CMat m = CMat::zero(dim);
    for (const auto& [w, psi] : parts_) {
        for (const auto& [i, ci] : psi.entries()) {
            for (const auto& [j, cj] : psi.entries()) {
                m.at(i, j) += w * ci * std::conj(cj);
            }
        }
    }
    return m;
}

std::vector<SymplecticVector> enumerate_rowspace(const Matrix& basis, uint64_t limit) {
    const FieldSpec& fs = basis.spec();
    uint64_t count = 1;
    for (size_t i = 0; i < basis.rows(); ++i) {
        count *= fs.order();
        if (count > limit) throw SizeLimitError("row space too large to enumerate");
    }
    std::vector<SymplecticVector> out;
    out.reserve(count);
    Vec zero(basis.cols(), FieldElement(0, fs));
    out.push_back(zero);
    for (uint64_t c = 1; c < count; ++c) {
        uint64_t rest = c;
        Vec v = zero;
        for (size_t i = 0; i < basis.rows() && rest; ++i) {
            uint32_t coeff = static_cast<uint32_t>(rest % fs.order());
            rest /= fs.order();
            if (coeff) v = add(v, scale(FieldElement(coeff, fs), basis.row(i)));
        }
        out.push_back(std::move(v));
    }
    return out;
}

StabilizerProjector::StabilizerProjector(const StabilizerSpace& space, CosetLabel label)
    : space_(&space), label_(std::move(label)) {
    require_css(space);
    checked_dimension(space.sites(), space.spec(), kOracleDimensionLimit);
    representative_ = space.representative(label_);
}

SparseState StabilizerProjector::apply(const SparseState& psi) const {
    auto group = enumerate_rowspace(space_->v_basis());
    SparseState out(psi.sites(), psi.spec());
    double inv = 1.0 / static_cast<double>(group.size());
    for (const auto& v : group) {
        SparseState term = psi;
        term.apply_weyl(v);
        double sign = symplectic_form(v, representative_) ? -inv : inv;
        out.add_scaled(term, Complex(sign, 0));
    }
    out.compact();
    return out;
}

double StabilizerProjector::expectation(const DensityMatrix& rho) const {
    auto group = enumerate_rowspace(space_->v_basis());
    Complex acc(0, 0);
    for (const auto& v : group) {
        Complex chi = rho.weyl_expectation(v);
        acc += symplectic_form(v, representative_) ? -chi : chi;
    }
    return acc.real() / static_cast<double>(group.size());
}

CMat StabilizerProjector::dense() const {
    uint64_t dim = checked_dimension(space_->sites(), space_->spec(), kDenseMaterializeLimit);
    auto group = enumerate_rowspace(space_->v_basis());
    CMat m = CMat::zero(dim);
    double inv = 1.0 / static_cast<double>(group.size());
    for (const auto& v : group) {
        CMat w = WeylOperator(v).dense();
        double sign = symplectic_form(v, representative_) ? -inv : inv;
        m = m + w.scaled(Complex(sign, 0));
    }
    return m;
}

StabilizerProjector stabilizer_projector(const StabilizerSpace& space, const CosetLabel& label) {
    return StabilizerProjector(space, label);
}

DensityMatrix initial_state(const StabilizerSpace& space) {
    require_css(space);
    unsigned sites = static_cast<unsigned>(space.sites());
    const FieldSpec& fs = space.spec();
    uint64_t dim = checked_dimension(sites, fs, kOracleDimensionLimit);

    size_t d = space.v_basis().rows();
    if (d > sites) throw ConstructionError("self-orthogonal space larger than site count");
    uint64_t rank = 1;
    for (size_t i = 0; i < sites - d; ++i) rank *= fs.order();

    const Matrix& h = space.x_block();
    unsigned r = fs.degree();
    uint32_t mask = fs.order() - 1;

    // Zero-label projector terms, precomputed once: X shifts and Z parts of
    // every element of V. For the zero coset all character signs are +1.
    auto group = enumerate_rowspace(space.v_basis());
    SparseState probe(sites, fs);
    std::vector<std::pair<uint64_t, Vec>> terms;
    terms.reserve(group.size());
    for (const auto& v : group) {
        Vec a(v.begin(), v.begin() + sites);
        Vec b(v.begin() + sites, v.end());
        terms.emplace_back(probe.pack_x_part(a), std::move(b));
    }
    double inv_group = 1.0 / static_cast<double>(group.size());

    // Project computational basis states onto the code space and orthonormalize.
    // A seed contributes iff it is trace-orthogonal to every classical block row
    // (its projection's norm is exactly that character sum), so the rest are
    // skipped without building anything.
    std::vector<SparseState> basis;
    for (uint64_t j = 0; j < dim && basis.size() < rank; ++j) {
        bool orthogonal = true;
        for (size_t row = 0; row < h.rows() && orthogonal; ++row) {
            int bit = 0;
            for (unsigned s = 0; s < sites; ++s) {
                uint32_t digit = static_cast<uint32_t>(j >> (r * (sites - 1 - s))) & mask;
                bit ^= fs.trace(fs.mul(h.at(row, s).value(), digit));
            }
            orthogonal = (bit == 0);
        }
        if (!orthogonal) continue;

        SparseState cand(sites, fs);
        for (const auto& [shift, b] : terms) {
            double sign = probe.z_phase_bit(b, j) ? -inv_group : inv_group;
            cand.add_amplitude(j ^ shift, Complex(sign, 0));
        }
        cand.compact();
        for (const auto& prev : basis) {
            Complex overlap = prev.inner(cand);
            if (overlap != Complex(0, 0)) cand.add_scaled(prev, -overlap);
        }
        double n2 = cand.norm2();
        if (n2 > 1e-9) {
            cand.scale(Complex(1.0 / std::sqrt(n2), 0));
            basis.push_back(std::move(cand));
        }
    }
    if (basis.size() != rank) {
        throw ConstructionError("code space basis construction incomplete");
    }

    std::vector<std::pair<double, SparseState>> parts;
    parts.reserve(basis.size());
    double w = 1.0 / static_cast<double>(rank);
    for (auto& psi : basis) parts.emplace_back(w, std::move(psi));
    return DensityMatrix::mixture(std::move(parts));
}

namespace {

// F_2 generators of the row space: every element is a unique XOR combination
// of rows scaled by the polynomial-basis powers.
std::vector<SymplecticVector> f2_generators(const Matrix& basis) {
    const FieldSpec& fs = basis.spec();
    std::vector<SymplecticVector> gens;
    for (size_t i = 0; i < basis.rows(); ++i) {
        for (unsigned l = 0; l < fs.degree(); ++l) {
            gens.push_back(scale(FieldElement(1u << l, fs), basis.row(i)));
        }
    }
    return gens;
}

}  // namespace

std::vector<std::pair<CosetLabel, double>> pvm_distribution(const DensityMatrix& state,
                                                            const StabilizerSpace& space) {
    require_css(space);
    const FieldSpec& fs = space.spec();
    unsigned r = fs.degree();
    size_t d = space.v_basis().rows();
    unsigned bits = static_cast<unsigned>(r * d);
    if (bits > 20) throw SizeLimitError("PVM outcome space too large to enumerate");
    uint64_t count = 1ull << bits;

    // The outcome distribution is the group Fourier transform of the Weyl
    // expectations over V. Both V and the label set are F_2-spaces of the same
    // dimension and the symplectic pairing between them is bilinear, so one
    // Walsh-Hadamard pass computes every outcome at once.
    std::vector<SymplecticVector> v_gens = f2_generators(space.v_basis());
    std::vector<SymplecticVector> label_gens = f2_generators(space.complement_basis());

    // chi[m] = Tr(W(v(m)) rho) for the XOR combination v(m) of generators,
    // visited in Gray-code order so each element is one generator away.
    std::vector<Complex> chi(count);
    chi[0] = Complex(state.trace(), 0);
    Vec current(2 * space.sites(), FieldElement(0, fs));
    uint64_t prev_gray = 0;
    for (uint64_t i = 1; i < count; ++i) {
        uint64_t gray = i ^ (i >> 1);
        unsigned flipped = static_cast<unsigned>(__builtin_ctzll(gray ^ prev_gray));
        current = add(current, v_gens[flipped]);
        chi[gray] = state.weyl_expectation(current);
        prev_gray = gray;
    }

    for (unsigned len = 1; len < count; len <<= 1) {
        for (uint64_t i = 0; i < count; i += 2 * len) {
            for (uint64_t j = i; j < i + len; ++j) {
                Complex x = chi[j], y = chi[j + len];
                chi[j] = x + y;
                chi[j + len] = x - y;
            }
        }
    }

    // Pairing masks: column w collects <g_u, h_w> over the V generators.
    std::vector<uint64_t> pair_mask(bits, 0);
    for (unsigned w = 0; w < bits; ++w) {
        for (unsigned u = 0; u < bits; ++u) {
            if (symplectic_form(v_gens[u], label_gens[w])) pair_mask[w] |= 1ull << u;
        }
    }

    double inv = 1.0 / static_cast<double>(count);
    std::vector<std::pair<CosetLabel, double>> out;
    out.reserve(count);
    std::vector<uint64_t> mask_of(count, 0);
    for (uint64_t g = 0; g < count; ++g) {
        if (g) {
            unsigned low = static_cast<unsigned>(__builtin_ctzll(g));
            mask_of[g] = mask_of[g & (g - 1)] ^ pair_mask[low];
        }
        Vec coeffs(d, FieldElement(0, fs));
        for (unsigned w = 0; w < bits; ++w) {
            if (g >> w & 1) {
                size_t j = w / r;
                coeffs[j] = coeffs[j] + FieldElement(1u << (w % r), fs);
            }
        }
        out.emplace_back(CosetLabel{std::move(coeffs)}, chi[mask_of[g]].real() * inv);
    }
    return out;
}

PvmOutcome measure_pvm(const DensityMatrix& state, const StabilizerSpace& space) {
    auto dist = pvm_distribution(state, space);
    double total = 0;
    size_t best = 0;
    for (size_t i = 0; i < dist.size(); ++i) {
        total += dist[i].second;
        if (dist[i].second > dist[best].second) best = i;
    }
    if (std::abs(total - 1.0) > 1e-6) {
        throw NumericalError("PVM outcome distribution sums to " + std::to_string(total));
    }
    return PvmOutcome{dist[best].first, dist[best].second, total};
}

}  // namespace qpir
