#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <set>

#include "qpir/protocol.hpp"
#include "qpir/qoracle.hpp"
#include "qpir/stabilizer.hpp"

using namespace qpir;

namespace {

Vec bits(std::initializer_list<uint32_t> values, const FieldSpec& fs) {
    Vec v;
    for (uint32_t x : values) v.emplace_back(x, fs);
    return v;
}

// The replicated two-server layer: H = (1 1) over F_2, complement diag((1 0)).
StabilizerSpace two_server_space() {
    const FieldSpec& f2 = FieldSpec::get(1);
    Matrix h(1, 2, f2);
    h.set(0, 0, FieldElement(1, f2));
    h.set(0, 1, FieldElement(1, f2));
    Matrix n(1, 2, f2);
    n.set(0, 0, FieldElement(1, f2));
    return StabilizerSpace(h, Matrix::block_diag(n, n));
}

std::set<std::vector<uint32_t>> as_set(const std::vector<SymplecticVector>& vectors) {
    std::set<std::vector<uint32_t>> out;
    for (const auto& v : vectors) {
        std::vector<uint32_t> raw;
        for (const auto& e : v) raw.push_back(e.value());
        out.insert(raw);
    }
    return out;
}

}  // namespace

TEST_CASE("symplectic form examples over F_2") {
    const FieldSpec& f2 = FieldSpec::get(1);
    CHECK(symplectic_form(bits({1, 1, 0, 0}, f2), bits({0, 0, 1, 1}, f2)) == 0);
    CHECK(symplectic_form(bits({1, 0, 0, 0}, f2), bits({0, 0, 1, 0}, f2)) == 1);
    // Alternating: <x, x> = 0 for every x.
    for (uint32_t raw = 0; raw < 16; ++raw) {
        Vec x = bits({raw >> 3 & 1, raw >> 2 & 1, raw >> 1 & 1, raw & 1}, f2);
        CHECK(symplectic_form(x, x) == 0);
    }
    CHECK_THROWS_AS(symplectic_form(bits({1, 0}, f2), bits({1, 0, 0, 0}, f2)), ParameterError);
}

TEST_CASE("two-server space is self-dual") {
    StabilizerSpace space = two_server_space();
    auto v = as_set(enumerate_rowspace(space.v_basis()));
    std::set<std::vector<uint32_t>> expected{
        {0, 0, 0, 0}, {1, 1, 0, 0}, {0, 0, 1, 1}, {1, 1, 1, 1}};
    CHECK(v == expected);
    CHECK(as_set(enumerate_rowspace(space.vperp_basis())) == expected);
    CHECK(space.v_basis().rank() == 2);
    CHECK(space.vperp_basis().rank() == 2);
}

TEST_CASE("two-server reduction matches the hand computation") {
    StabilizerSpace space = two_server_space();
    const FieldSpec& f2 = FieldSpec::get(1);
    for (uint32_t raw = 0; raw < 16; ++raw) {
        uint32_t a1 = raw >> 3 & 1, a2 = raw >> 2 & 1, b1 = raw >> 1 & 1, b2 = raw & 1;
        CosetLabel label = space.reduce(bits({a1, a2, b1, b2}, f2));
        CHECK(label.coeffs == bits({a1 ^ a2, b1 ^ b2}, f2));
        Vec rep = space.representative(label);
        CHECK(rep == bits({a1 ^ a2, 0, b1 ^ b2, 0}, f2));
    }
}

TEST_CASE("reduction is a homomorphism with kernel exactly the dual") {
    StabilizerSpace space = two_server_space();
    const FieldSpec& f2 = FieldSpec::get(1);
    auto dual = as_set(enumerate_rowspace(space.vperp_basis()));
    std::set<std::vector<uint32_t>> label_values;
    for (uint32_t raw = 0; raw < 16; ++raw) {
        Vec s = bits({raw >> 3 & 1, raw >> 2 & 1, raw >> 1 & 1, raw & 1}, f2);
        CosetLabel label = space.reduce(s);
        std::vector<uint32_t> raw_s;
        for (const auto& e : s) raw_s.push_back(e.value());
        CHECK((label.is_zero() == (dual.count(raw_s) > 0)));
        std::vector<uint32_t> lv;
        for (const auto& e : label.coeffs) lv.push_back(e.value());
        label_values.insert(lv);
        for (uint32_t raw2 = 0; raw2 < 16; ++raw2) {
            Vec s2 = bits({raw2 >> 3 & 1, raw2 >> 2 & 1, raw2 >> 1 & 1, raw2 & 1}, f2);
            CHECK(space.reduce(add(s, s2)).coeffs ==
                  add(space.reduce(s).coeffs, space.reduce(s2).coeffs));
        }
    }
    // Quotient size q^{2n} / q^{2(k+t-1)} = q^{2c}.
    CHECK(label_values.size() == 4);
}

TEST_CASE("scheme-built space over GF(4)") {
    const FieldSpec& f4 = FieldSpec::get(2);
    SchemeParams params = derive_params(4, 1, 2, 1, f4);
    RoundGeometry geom = round_geometry(params, 0);
    StabilizerSpace space(params.star_parity, geom.complement);

    CHECK(space.v_basis().rank() == 2 * (4 - 1 - 2 + 1));
    CHECK(space.vperp_basis().rank() == 2 * (1 + 2 - 1));
    CHECK(same_rowspace(space.v_basis(), space.vperp_basis()));  // self-dual case
    CHECK(same_rowspace(space.vperp_basis(), params.doubled_star_gen));
    CHECK(vstack(space.vperp_basis(), space.complement_basis()).rank() == 8);

    // Cross-block orthogonality is exact, not just under the trace.
    CHECK((space.x_block() * space.x_block().transposed()).is_zero());
}

TEST_CASE("reduction invariance and Weyl action") {
    const FieldSpec& f8 = FieldSpec::get(3);
    SchemeParams params = derive_params(5, 2, 2, 1, f8);
    RoundGeometry geom = round_geometry(params, 0);
    StabilizerSpace space(params.star_parity, geom.complement);

    Rng rng(31);
    for (int trial = 0; trial < 100; ++trial) {
        Vec s = rng.uniform_vec(10, f8);
        CosetLabel base = space.reduce(s);
        // Shifting by any dual element leaves the label fixed.
        Vec coeffs = rng.uniform_vec(space.vperp_basis().rows(), f8);
        Vec shifted = add(s, row_times(coeffs, space.vperp_basis()));
        CHECK(space.reduce(shifted) == base);

        // Coset shifts compose additively.
        Vec t1 = rng.uniform_vec(10, f8);
        Vec t2 = rng.uniform_vec(10, f8);
        CosetLabel via_two = space.apply_weyl(space.apply_weyl(base, t1), t2);
        CHECK(via_two == space.apply_weyl(base, add(t1, t2)));
    }

    // Every dual element acts trivially.
    for (size_t i = 0; i < space.vperp_basis().rows(); ++i) {
        CosetLabel zero = space.zero_label();
        CHECK(space.apply_weyl(zero, space.vperp_basis().row(i)) == zero);
    }
}

TEST_CASE("quotient size at an exhaustive scale") {
    // n = 2, k = 1, t = 1 over GF(4): q^{2n} = 256 vectors, q^{2c} = 16 labels.
    const FieldSpec& f4 = FieldSpec::get(2);
    SchemeParams params = derive_params(2, 1, 1, 1, f4);
    RoundGeometry geom = round_geometry(params, 0);
    StabilizerSpace space(params.star_parity, geom.complement);

    std::map<std::vector<uint32_t>, size_t> coset_sizes;
    for (uint32_t raw = 0; raw < 256; ++raw) {
        Vec s = bits({raw >> 6 & 3, raw >> 4 & 3, raw >> 2 & 3, raw & 3}, f4);
        std::vector<uint32_t> lv;
        for (const auto& e : space.reduce(s).coeffs) lv.push_back(e.value());
        coset_sizes[lv] += 1;
    }
    CHECK(coset_sizes.size() == 16);
    for (const auto& [label, size] : coset_sizes) CHECK(size == 16);
}

TEST_CASE("non-self-orthogonal input is rejected") {
    const FieldSpec& f2 = FieldSpec::get(1);
    Matrix h(1, 2, f2);
    h.set(0, 0, FieldElement(1, f2));  // (1 0): diag(h, h) is not isotropic
    Matrix n = Matrix::identity(2, f2);
    CHECK_THROWS_AS(StabilizerSpace(h, Matrix::block_diag(n, n)), ConstructionError);
}

TEST_CASE("label counter round trip") {
    const FieldSpec& f4 = FieldSpec::get(2);
    SchemeParams params = derive_params(4, 1, 2, 1, f4);
    StabilizerSpace space(params.star_parity, round_geometry(params, 0).complement);
    for (uint64_t counter = 0; counter < space.label_count(); ++counter) {
        CHECK(space.counter_from_label(space.label_from_counter(counter)) == counter);
    }
}
