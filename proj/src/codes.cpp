#include "qpir/codes.hpp"

#include <algorithm>
#include <set>

namespace qpir {

GrsCode::GrsCode(Vec locators, Vec multipliers, size_t dim)
    : locators_(std::move(locators)), multipliers_(std::move(multipliers)), dim_(dim) {
    size_t n = locators_.size();
    if (n == 0) throw ParameterError("GRS code needs at least one locator");
    if (multipliers_.size() != n) throw ParameterError("GRS multiplier count != locator count");
    const FieldSpec& fs = locators_[0].spec();
    if (n > fs.order()) throw ParameterError("GRS length exceeds field size");
    if (dim_ < 1 || dim_ > n) throw ParameterError("GRS dimension out of range [1, n]");
    for (const auto& a : locators_) {
        if (&a.spec() != &fs) throw FieldMismatchError("GRS locators from mixed fields");
    }
    for (const auto& m : multipliers_) {
        if (&m.spec() != &fs) throw FieldMismatchError("GRS multipliers from mixed fields");
        if (m.is_zero()) throw DegenerateCodeError("GRS column multiplier is zero");
    }
    for (size_t i = 0; i < n; ++i)
        for (size_t j = i + 1; j < n; ++j)
            if (locators_[i] == locators_[j]) throw DegenerateCodeError("repeated GRS locators");
}

Matrix GrsCode::generator_matrix() const {
    size_t n = length();
    Matrix g(dim_, n, spec());
    Vec power(multipliers_);
    for (size_t i = 0; i < dim_; ++i) {
        for (size_t j = 0; j < n; ++j) g.set(i, j, power[j]);
        if (i + 1 < dim_) {
            for (size_t j = 0; j < n; ++j) power[j] = power[j] * locators_[j];
        }
    }
    return g;
}

Matrix GrsCode::parity_check_matrix() const {
    return generator_matrix().kernel_basis().rref();
}

Vec GrsCode::locator_products() const {
    size_t n = length();
    Vec u;
    u.reserve(n);
    for (size_t j = 0; j < n; ++j) {
        FieldElement p(1, spec());
        for (size_t i = 0; i < n; ++i) {
            if (i != j) p = p * (locators_[j] - locators_[i]);
        }
        u.push_back(p);
    }
    return u;
}

GrsCode GrsCode::dual() const {
    if (dim_ == length()) {
        throw DegenerateCodeError("dual of a full-dimension GRS code is trivial");
    }
    Vec u = locator_products();
    Vec dual_mult;
    dual_mult.reserve(length());
    for (size_t j = 0; j < length(); ++j) dual_mult.push_back((multipliers_[j] * u[j]).inv());
    return GrsCode(locators_, dual_mult, length() - dim_);
}

Vec GrsCode::encode(const Vec& message) const {
    if (message.size() != dim_) throw ParameterError("GRS message length != dim");
    return row_times(message, generator_matrix());
}

Vec GrsCode::erasure_decode(const std::vector<size_t>& positions, const Vec& symbols) const {
    if (positions.size() != dim_ || symbols.size() != dim_) {
        throw ParameterError("erasure decode needs exactly dim positions and symbols");
    }
    std::set<size_t> unique(positions.begin(), positions.end());
    if (unique.size() != dim_) throw ParameterError("erasure decode positions not distinct");
    Matrix sub = generator_matrix().select_cols(positions);
    Matrix sub_inv;
    try {
        sub_inv = sub.inverse();
    } catch (const SingularMatrixError&) {
        // Cannot happen for a true MDS code.
        throw ConstructionError("singular column restriction in MDS erasure decode");
    }
    return row_times(symbols, sub_inv);
}

bool GrsCode::is_mds() const {
    Matrix g = generator_matrix();
    for (const auto& cols : subsets_of_size(length(), dim_)) {
        if (g.select_cols(cols).rank() != dim_) return false;
    }
    return true;
}

GrsCode star_product(const GrsCode& c1, const GrsCode& c2) {
    if (c1.locators() != c2.locators()) {
        throw ParameterError("star product requires identical locators");
    }
    size_t dim = c1.dim() + c2.dim() - 1;
    if (dim > c1.length()) {
        throw ParameterError("star product dimension " + std::to_string(dim) +
                             " exceeds length " + std::to_string(c1.length()));
    }
    return GrsCode(c1.locators(), star(c1.multipliers(), c2.multipliers()), dim);
}

GrsCode self_dual_grs(const Vec& locators) {
    if (locators.empty() || locators.size() % 2 != 0) {
        throw ParameterError("self-dual GRS code needs an even number of locators");
    }
    size_t n = locators.size();
    Vec ones(n, FieldElement(1, locators[0].spec()));
    GrsCode plain(locators, ones, n / 2);  // validates distinctness
    Vec u = plain.locator_products();
    Vec mult;
    mult.reserve(n);
    for (size_t j = 0; j < n; ++j) mult.push_back(u[j].inv().sqrt());
    GrsCode code(locators, mult, n / 2);
    Matrix g = code.generator_matrix();
    if (!(g * g.transposed()).is_zero()) {
        throw ConstructionError("self-dual multiplier construction failed G G^T = 0");
    }
    return code;
}

GrsCode weakly_self_dual_grs(size_t n, size_t k, const Vec& locators) {
    if (locators.size() != n) throw ParameterError("locator count != n");
    if (2 * k < n) {
        throw ParameterError("weak self-duality impossible: k < n/2 (k=" + std::to_string(k) +
                             ", n=" + std::to_string(n) + ")");
    }
    if (k > n) throw ParameterError("k > n");
    const FieldSpec& fs = locators[0].spec();

    Vec mult;
    if (n % 2 == 0) {
        mult = self_dual_grs(locators).multipliers();
    } else {
        // Spare locator: smallest canonical element outside the locator set.
        FieldElement extra(0, fs);
        bool found = false;
        for (uint32_t v = 0; v < fs.order(); ++v) {
            FieldElement cand(v, fs);
            if (std::find(locators.begin(), locators.end(), cand) == locators.end()) {
                extra = cand;
                found = true;
                break;
            }
        }
        if (!found) {
            throw ParameterError("no spare locator available for odd-length construction (n = q)");
        }
        Vec extended(locators);
        extended.push_back(extra);
        Vec ext_mult = self_dual_grs(extended).multipliers();
        mult.assign(ext_mult.begin(), ext_mult.end() - 1);
    }

    GrsCode code(locators, mult, k);
    Matrix h = code.parity_check_matrix();
    if (!(h * h.transposed()).is_zero() ||
        !rowspace_contains(code.generator_matrix(), h)) {
        throw ConstructionError("weakly self-dual construction failed containment check");
    }
    return code;
}

GrsCode query_code_for(const GrsCode& storage, size_t t) {
    size_t n = storage.length();
    size_t k = storage.dim();
    if (t < 1) throw ParameterError("query code dimension t must be >= 1");
    if (k + t - 1 >= n) {
        throw ParameterError("k+t-1 < n violated (k+t-1 = " + std::to_string(k + t - 1) +
                             ", n = " + std::to_string(n) + ")");
    }
    if (2 * (k + t - 1) < n) {
        throw ParameterError("n/2 <= k+t-1 violated (k+t-1 = " + std::to_string(k + t - 1) +
                             ", n = " + std::to_string(n) + ")");
    }
    Vec star_mult = weakly_self_dual_grs(n, k + t - 1, storage.locators()).multipliers();
    Vec query_mult;
    query_mult.reserve(n);
    for (size_t j = 0; j < n; ++j) query_mult.push_back(storage.multipliers()[j].inv() * star_mult[j]);
    return GrsCode(storage.locators(), query_mult, t);
}

Vec default_locators(size_t n, const FieldSpec& spec) {
    if (n > spec.order()) throw ParameterError("n exceeds field size");
    Vec out;
    out.reserve(n);
    for (uint32_t v = 0; v < n; ++v) out.emplace_back(v, spec);
    return out;
}

}  // namespace qpir
