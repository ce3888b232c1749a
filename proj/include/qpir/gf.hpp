#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qpir/errors.hpp"

namespace qpir {

// Binary extension field GF(2^r) described by an irreducible modulus polynomial
// over F_2. Polynomials are stored as bitmasks, lowest bit = constant term, so
// x^2+x+1 is 0b111. Instances are interned: get() returns a stable reference and
// elements compare field identity by address.
//
// Element values are the coefficient vectors of the polynomial-basis
// representation, i.e. integers in [0, 2^r). Addition is XOR.
class FieldSpec {
public:
    // Canonical modulus for degree r. Fixed table for r in {1,2,3,4,8}; the
    // smallest irreducible polynomial of degree r otherwise. Deterministic
    // across runs so serialized elements stay comparable.
    static const FieldSpec& get(unsigned r);
    // Explicit modulus; rejects reducible polynomials (trial division).
    static const FieldSpec& get(unsigned r, uint32_t modulus);

    unsigned degree() const { return r_; }
    uint32_t order() const { return q_; }  // q = 2^r
    uint32_t modulus() const { return modulus_; }

    // Carry-less polynomial product reduced modulo the field polynomial.
    uint32_t mul(uint32_t a, uint32_t b) const;
    uint32_t pow(uint32_t a, uint64_t e) const;
    uint32_t inv(uint32_t a) const;  // throws DivisionByZeroError on 0
    // Field trace to F_2: a + a^2 + ... + a^(2^(r-1)).
    int trace(uint32_t a) const;
    // The unique square root, a^(2^(r-1)); squaring is a bijection in char 2.
    uint32_t sqrt(uint32_t a) const;

    bool operator==(const FieldSpec& other) const { return this == &other; }

private:
    FieldSpec(unsigned r, uint32_t modulus);
    uint32_t mul_slow(uint32_t a, uint32_t b) const;

    unsigned r_;
    uint32_t q_;
    uint32_t modulus_;
    // Full operation tables for q <= 256; the carry-less path covers the rest.
    std::vector<uint8_t> mul_table_;
    std::vector<uint8_t> inv_table_;
    std::vector<uint8_t> trace_table_;
};

class FieldElement {
public:
    FieldElement() : value_(0), spec_(&FieldSpec::get(1)) {}
    FieldElement(uint32_t value, const FieldSpec& spec);

    uint32_t value() const { return value_; }
    const FieldSpec& spec() const { return *spec_; }
    bool is_zero() const { return value_ == 0; }

    FieldElement operator+(const FieldElement& o) const;
    FieldElement operator-(const FieldElement& o) const { return *this + o; }
    FieldElement operator*(const FieldElement& o) const;
    FieldElement operator/(const FieldElement& o) const { return *this * o.inv(); }

    FieldElement inv() const;
    FieldElement pow(uint64_t e) const;
    int trace() const { return spec_->trace(value_); }
    FieldElement sqrt() const { return FieldElement(spec_->sqrt(value_), *spec_); }

    bool operator==(const FieldElement& o) const {
        return spec_ == o.spec_ && value_ == o.value_;
    }
    bool operator!=(const FieldElement& o) const { return !(*this == o); }

    // Lowercase hexadecimal of the value, no prefix.
    std::string to_hex() const;
    static FieldElement from_hex(const std::string& hex, const FieldSpec& spec);

private:
    void check_same_spec(const FieldElement& o) const;

    uint32_t value_;
    const FieldSpec* spec_;
};

}  // namespace qpir
