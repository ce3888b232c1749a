#pragma once

#include <complex>
#include <cstdint>
#include <utility>
#include <vector>

#include "qpir/stabilizer.hpp"

namespace qpir {

using Complex = std::complex<double>;

// The exact simulator works on the full q^n-dimensional register and refuses
// anything larger; it exists to certify the coset backend, not to scale.
inline constexpr uint64_t kOracleDimensionLimit = 1ull << 16;
// Dense materialization cap for the algebraic identity checks.
inline constexpr uint64_t kDenseMaterializeLimit = 1ull << 11;

// Minimal dense complex matrix for certification-scale algebra.
struct CMat {
    size_t n = 0;
    std::vector<Complex> a;

    static CMat zero(size_t n) { return CMat{n, std::vector<Complex>(n * n, Complex(0, 0))}; }
    static CMat identity(size_t n);

    Complex& at(size_t i, size_t j) { return a[i * n + j]; }
    const Complex& at(size_t i, size_t j) const { return a[i * n + j]; }

    CMat operator*(const CMat& o) const;
    CMat operator+(const CMat& o) const;
    CMat scaled(Complex c) const;
    CMat adjoint() const;
    Complex trace() const;
    double max_abs_diff(const CMat& o) const;
    double max_abs() const;
};

// Exact sparse state vector on an n-site register of q-dimensional systems.
// Site s occupies bit block r*(n-1-s) of the index, so the X-shift by a field
// vector is a single XOR on the packed index.
class SparseState {
public:
    SparseState(unsigned sites, const FieldSpec& spec);
    static SparseState basis_state(unsigned sites, const FieldSpec& spec, uint64_t index);

    unsigned sites() const { return sites_; }
    const FieldSpec& spec() const { return *spec_; }
    uint64_t dimension() const;

    const std::vector<std::pair<uint64_t, Complex>>& entries() const { return amp_; }
    void add_amplitude(uint64_t index, Complex c) { amp_.emplace_back(index, c); }
    // Sort by index, merge duplicates, drop negligible amplitudes.
    void compact(double eps = 1e-14);

    double norm2() const;
    void scale(Complex c);
    Complex amplitude(uint64_t index) const;
    Complex inner(const SparseState& other) const;  // <this|other>
    void add_scaled(const SparseState& other, Complex c);

    // X(a)Z(b) on one site: |j> -> (-1)^tr(b j) |j + a>.
    void apply_site_weyl(size_t site, const FieldElement& a, const FieldElement& b);
    void apply_weyl(const SymplecticVector& s);
    // <psi| W(v) |psi>
    Complex weyl_expectation(const SymplecticVector& v) const;

    uint64_t pack_x_part(const Vec& a) const;
    int z_phase_bit(const Vec& b, uint64_t index) const;

private:
    unsigned sites_;
    const FieldSpec* spec_;
    std::vector<std::pair<uint64_t, Complex>> amp_;  // sorted by index
};

// Monomial unitary: per site X(s_i) Z(s_{n+i}); column j carries a single
// +-1 entry at row j XOR shift.
class WeylOperator {
public:
    explicit WeylOperator(SymplecticVector label, uint64_t dimension_limit = kOracleDimensionLimit);

    const SymplecticVector& label() const { return label_; }
    unsigned sites() const { return sites_; }
    uint64_t dimension() const { return dim_; }

    uint64_t target(uint64_t column) const { return column ^ shift_; }
    int phase_bit(uint64_t column) const;

    void apply(SparseState& psi) const;
    CMat dense() const;

private:
    SymplecticVector label_;
    unsigned sites_;
    const FieldSpec* spec_;
    uint64_t dim_;
    uint64_t shift_;
};

WeylOperator weyl_matrix(const SymplecticVector& s,
                         uint64_t dimension_limit = kOracleDimensionLimit);

// Exact ensemble form sum_i w_i |psi_i><psi_i| of a density matrix. Weights are
// nonnegative and sum to the trace, so positivity holds by construction; the
// dense materialization is for identity checks at small dimension.
class DensityMatrix {
public:
    static DensityMatrix pure(SparseState psi);
    static DensityMatrix mixture(std::vector<std::pair<double, SparseState>> parts);

    const std::vector<std::pair<double, SparseState>>& ensemble() const { return parts_; }
    unsigned sites() const;
    const FieldSpec& spec() const;
    double trace() const;

    void apply_site_weyl(size_t site, const FieldElement& a, const FieldElement& b);
    void apply_weyl(const SymplecticVector& s);
    // Tr(W(v) rho)
    Complex weyl_expectation(const SymplecticVector& v) const;

    CMat dense() const;

private:
    std::vector<std::pair<double, SparseState>> parts_;
};

// Projector onto the coset eigenspace: |V|^-1 sum_{v in V} (-1)^{<v,s>} W(v),
// with all phases trivial thanks to the exact cross-block orthogonality of the
// CSS block structure.
class StabilizerProjector {
public:
    StabilizerProjector(const StabilizerSpace& space, CosetLabel label);

    const CosetLabel& label() const { return label_; }
    SparseState apply(const SparseState& psi) const;
    double expectation(const DensityMatrix& rho) const;
    CMat dense() const;

private:
    const StabilizerSpace* space_;
    CosetLabel label_;
    SymplecticVector representative_;
};

StabilizerProjector stabilizer_projector(const StabilizerSpace& space, const CosetLabel& label);

// Maximally mixed state on the joint +1 eigenspace: projector / rank. Under
// the coset decomposition this is the zero-label state tensored with a
// maximally mixed inner factor.
DensityMatrix initial_state(const StabilizerSpace& space);

struct PvmOutcome {
    CosetLabel label;
    double probability;
    double total;  // sum over all outcomes, should be 1
};

// Full outcome distribution of the coset-label measurement.
std::vector<std::pair<CosetLabel, double>> pvm_distribution(const DensityMatrix& state,
                                                            const StabilizerSpace& space);
// Most likely outcome; raises NumericalError if the distribution does not
// normalize within 1e-6.
PvmOutcome measure_pvm(const DensityMatrix& state, const StabilizerSpace& space);

// All q^rows elements of the row space of a full-rank basis.
std::vector<SymplecticVector> enumerate_rowspace(const Matrix& basis, uint64_t limit = 1ull << 20);

}  // namespace qpir
