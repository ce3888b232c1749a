#include "qpir/gf.hpp"

#include <map>
#include <memory>
#include <mutex>

namespace qpir {

namespace {

int poly_degree(uint64_t p) {
    int d = -1;
    while (p) {
        ++d;
        p >>= 1;
    }
    return d;
}

// Remainder of a by b in F_2[x].
uint64_t poly_mod(uint64_t a, uint64_t b) {
    int db = poly_degree(b);
    for (int d = poly_degree(a); d >= db; --d) {
        if (a >> d & 1) a ^= b << (d - db);
    }
    return a;
}

bool poly_irreducible(unsigned r, uint32_t modulus) {
    if (poly_degree(modulus) != static_cast<int>(r)) return false;
    if (r == 1) return true;
    // Trial division by every polynomial of degree 1..r-1.
    for (uint32_t d = 2; d < (1u << r); ++d) {
        if (poly_mod(modulus, d) == 0) return false;
    }
    return true;
}

uint32_t canonical_modulus(unsigned r) {
    switch (r) {
        case 1: return 0b10;         // x
        case 2: return 0b111;        // x^2+x+1
        case 3: return 0b1011;       // x^3+x+1
        case 4: return 0b10011;      // x^4+x+1
        case 8: return 0b100011101;  // x^8+x^4+x^3+x^2+1
        default: break;
    }
    for (uint32_t m = 1u << r; m < (1u << (r + 1)); ++m) {
        if (poly_irreducible(r, m)) return m;
    }
    throw ConstructionError("no irreducible modulus of degree " + std::to_string(r));
}

}  // namespace

FieldSpec::FieldSpec(unsigned r, uint32_t modulus) : r_(r), q_(1u << r), modulus_(modulus) {
    if (r < 1 || r > 16) {
        throw ParameterError("field degree r must be in [1, 16], got " + std::to_string(r));
    }
    if (!poly_irreducible(r, modulus)) {
        throw ConstructionError("modulus " + std::to_string(modulus) +
                                " is not an irreducible polynomial of degree " + std::to_string(r));
    }
    if (q_ <= 256) {
        mul_table_.resize(static_cast<size_t>(q_) * q_);
        for (uint32_t a = 0; a < q_; ++a)
            for (uint32_t b = 0; b < q_; ++b)
                mul_table_[a * q_ + b] = static_cast<uint8_t>(mul_slow(a, b));
        inv_table_.assign(q_, 0);
        for (uint32_t a = 1; a < q_; ++a) inv_table_[a] = static_cast<uint8_t>(pow(a, q_ - 2));
        trace_table_.resize(q_);
        for (uint32_t a = 0; a < q_; ++a) {
            uint32_t s = 0, x = a;
            for (unsigned i = 0; i < r_; ++i) {
                s ^= x;
                x = mul(x, x);
            }
            trace_table_[a] = static_cast<uint8_t>(s & 1);
        }
    }
}

const FieldSpec& FieldSpec::get(unsigned r) { return get(r, canonical_modulus(r)); }

const FieldSpec& FieldSpec::get(unsigned r, uint32_t modulus) {
    static std::mutex mu;
    static std::map<std::pair<unsigned, uint32_t>, std::unique_ptr<FieldSpec>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_pair(r, modulus);
    auto it = cache.find(key);
    if (it == cache.end()) {
        it = cache.emplace(key, std::unique_ptr<FieldSpec>(new FieldSpec(r, modulus))).first;
    }
    return *it->second;
}

uint32_t FieldSpec::mul_slow(uint32_t a, uint32_t b) const {
    uint64_t acc = 0;
    uint64_t shifted = a;
    while (b) {
        if (b & 1) acc ^= shifted;
        shifted <<= 1;
        b >>= 1;
    }
    return static_cast<uint32_t>(poly_mod(acc, modulus_));
}

uint32_t FieldSpec::mul(uint32_t a, uint32_t b) const {
    if (!mul_table_.empty()) return mul_table_[a * q_ + b];
    return mul_slow(a, b);
}

uint32_t FieldSpec::pow(uint32_t a, uint64_t e) const {
    uint32_t result = 1;
    uint32_t base = a;
    while (e) {
        if (e & 1) result = mul(result, base);
        base = mul(base, base);
        e >>= 1;
    }
    return result;
}

uint32_t FieldSpec::inv(uint32_t a) const {
    if (a == 0) throw DivisionByZeroError("inverse of zero field element");
    if (!inv_table_.empty()) return inv_table_[a];
    return pow(a, q_ - 2);
}

int FieldSpec::trace(uint32_t a) const {
    if (!trace_table_.empty()) return trace_table_[a];
    uint32_t s = 0;
    uint32_t x = a;
    for (unsigned i = 0; i < r_; ++i) {
        s ^= x;
        x = mul(x, x);
    }
    // Lies in the prime field for any irreducible modulus.
    return static_cast<int>(s & 1);
}

uint32_t FieldSpec::sqrt(uint32_t a) const {
    uint32_t x = a;
    for (unsigned i = 0; i + 1 < r_; ++i) x = mul(x, x);
    return x;
}

FieldElement::FieldElement(uint32_t value, const FieldSpec& spec) : value_(value), spec_(&spec) {
    if (value >= spec.order()) {
        throw ParameterError("field element value " + std::to_string(value) +
                             " out of range for GF(2^" + std::to_string(spec.degree()) + ")");
    }
}

void FieldElement::check_same_spec(const FieldElement& o) const {
    if (spec_ != o.spec_) {
        throw FieldMismatchError("elements of incompatible fields: GF(2^" +
                                 std::to_string(spec_->degree()) + ") vs GF(2^" +
                                 std::to_string(o.spec_->degree()) + ")");
    }
}

FieldElement FieldElement::operator+(const FieldElement& o) const {
    check_same_spec(o);
    return FieldElement(value_ ^ o.value_, *spec_);
}

FieldElement FieldElement::operator*(const FieldElement& o) const {
    check_same_spec(o);
    return FieldElement(spec_->mul(value_, o.value_), *spec_);
}

FieldElement FieldElement::inv() const { return FieldElement(spec_->inv(value_), *spec_); }

FieldElement FieldElement::pow(uint64_t e) const {
    return FieldElement(spec_->pow(value_, e), *spec_);
}

std::string FieldElement::to_hex() const {
    char buf[16];
    snprintf(buf, sizeof(buf), "%x", value_);
    return buf;
}

FieldElement FieldElement::from_hex(const std::string& hex, const FieldSpec& spec) {
    if (hex.empty()) throw ConfigError("empty hex field element");
    uint32_t v = 0;
    for (char ch : hex) {
        uint32_t digit;
        if (ch >= '0' && ch <= '9') digit = ch - '0';
        else if (ch >= 'a' && ch <= 'f') digit = 10 + (ch - 'a');
        else if (ch >= 'A' && ch <= 'F') digit = 10 + (ch - 'A');
        else throw ConfigError("invalid hex digit in field element: " + hex);
        v = (v << 4) | digit;
        if (v >= (1u << 24)) throw ConfigError("hex field element too large: " + hex);
    }
    if (v >= spec.order()) {
        throw ConfigError("field element " + hex + " out of range for GF(2^" +
                          std::to_string(spec.degree()) + ")");
    }
    return FieldElement(v, spec);
}

}  // namespace qpir
