#pragma once

#include <cstdint>
#include <random>

#include "qpir/gf.hpp"
#include "qpir/linalg.hpp"

namespace qpir {

// Seedable deterministic generator. mt19937_64 output is pinned by the
// standard, so transcripts replay bit-exactly across platforms. Field elements
// are drawn from the low bits; q divides 2^64, so the draw is exactly uniform.
class Rng {
public:
    explicit Rng(uint64_t seed) : gen_(seed) {}

    uint64_t next_u64() { return gen_(); }

    FieldElement uniform(const FieldSpec& spec) {
        return FieldElement(static_cast<uint32_t>(gen_() & (spec.order() - 1)), spec);
    }

    // Uniform in [0, bound); bound must be a power of two or small enough that
    // the slight modulo bias is irrelevant for tests. Protocol randomness only
    // ever needs field elements, which take the exact path above.
    uint64_t below(uint64_t bound) { return gen_() % bound; }

    Matrix uniform_matrix(size_t rows, size_t cols, const FieldSpec& spec) {
        Matrix m(rows, cols, spec);
        for (size_t i = 0; i < rows; ++i)
            for (size_t j = 0; j < cols; ++j) m.set(i, j, uniform(spec));
        return m;
    }

    Vec uniform_vec(size_t len, const FieldSpec& spec) {
        Vec v;
        v.reserve(len);
        for (size_t i = 0; i < len; ++i) v.push_back(uniform(spec));
        return v;
    }

private:
    std::mt19937_64 gen_;
};

}  // namespace qpir
