#include "qpir/protocol.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

namespace qpir {

Rational Rational::make(int64_t num, int64_t den) {
    if (den == 0) throw ParameterError("rational with zero denominator");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    int64_t g = std::gcd(num < 0 ? -num : num, den);
    if (g == 0) g = 1;
    return Rational{num / g, den / g};
}

std::string Rational::str() const {
    if (den == 1) return std::to_string(num);
    return std::to_string(num) + "/" + std::to_string(den);
}

Backend backend_from_string(const std::string& name) {
    if (name == "fast") return Backend::Fast;
    if (name == "oracle") return Backend::Oracle;
    if (name == "both") return Backend::Both;
    throw ConfigError("unknown backend '" + name + "' (expected fast|oracle|both)");
}

std::string backend_to_string(Backend b) {
    switch (b) {
        case Backend::Fast: return "fast";
        case Backend::Oracle: return "oracle";
        case Backend::Both: return "both";
    }
    return "fast";
}

std::pair<size_t, size_t> pad_collusion(size_t n, size_t k, size_t t) {
    if (k + t - 1 >= (n + 1) / 2) {
        // Boundary and beyond: nothing to pad.
        return {n, t};
    }
    size_t n_eff = (n % 2 == 0) ? n : n - 1;
    size_t t_eff = n_eff / 2 + 1 - k;
    if (t_eff < 1) throw ParameterError("collusion padding failed: k > n'/2");
    if (t_eff < t) throw ParameterError("collusion padding produced t' < t");
    return {n_eff, t_eff};
}

SchemeParams derive_params(size_t n, size_t k, size_t t, size_t m, const FieldSpec& field) {
    if (n < 2) throw ParameterError("need at least two servers");
    if (k < 1 || t < 1 || m < 1) throw ParameterError("k, t, m must be positive");
    if (k + t - 1 >= n) {
        throw ParameterError("k+t-1 < n violated (k+t-1 = " + std::to_string(k + t - 1) +
                             ", n = " + std::to_string(n) + ")");
    }
    if (2 * (k + t - 1) < n) {
        throw ParameterError("n/2 <= k+t-1 violated (k+t-1 = " + std::to_string(k + t - 1) +
                             ", n = " + std::to_string(n) + "); apply pad_collusion first");
    }
    if (field.order() % 2 != 0) throw ParameterError("field size must be even");
    if (field.order() < n) {
        throw ParameterError("field size " + std::to_string(field.order()) +
                             " smaller than server count " + std::to_string(n));
    }

    SchemeParams p;
    p.n = n;
    p.k = k;
    p.t = t;
    p.m = m;
    p.field = &field;
    p.c = n - k - t + 1;
    size_t l = std::lcm(p.c, k);
    p.beta = l / k;
    p.rho = l / p.c;
    if (p.c / p.beta != std::gcd(p.c, k) || p.rho * p.c != p.beta * k) {
        throw ConstructionError("round bookkeeping identity failed");
    }

    Vec locators = default_locators(n, field);
    Vec ones(n, FieldElement(1, field));
    p.storage_code = GrsCode(locators, ones, k);
    p.query_code = query_code_for(p.storage_code, t);
    p.star_code = star_product(p.storage_code, p.query_code);
    if (p.star_code.dim() != k + t - 1) {
        throw ConstructionError("star code dimension != k+t-1");
    }

    p.star_parity = p.star_code.parity_check_matrix();
    if (p.star_parity.rows() != p.c) throw ConstructionError("star parity has wrong row count");
    if (!(p.star_parity * p.star_parity.transposed()).is_zero() ||
        !rowspace_contains(p.star_code.generator_matrix(), p.star_parity)) {
        throw ConstructionError("star code is not weakly self-dual");
    }

    // Complete the parity rows to a generator basis with evaluation rows.
    Matrix accum = p.star_parity;
    Matrix eval_gen = p.star_code.generator_matrix();
    std::vector<Vec> extension_rows;
    for (size_t i = 0; i < eval_gen.rows() && accum.rank() < p.star_code.dim(); ++i) {
        Matrix trial = vstack(accum, Matrix::from_rows({eval_gen.row(i)}));
        if (trial.rank() > accum.rank()) {
            extension_rows.push_back(eval_gen.row(i));
            accum = trial;
        }
    }
    if (accum.rank() != p.star_code.dim()) {
        throw ConstructionError("failed to extend parity rows to a star generator");
    }
    p.star_extension = extension_rows.empty()
                           ? Matrix(0, n, field)
                           : Matrix::from_rows(extension_rows);
    p.star_gen = vstack(p.star_parity, p.star_extension);
    p.doubled_star_gen = vstack(Matrix::block_diag(p.star_parity, p.star_parity),
                                Matrix::block_diag(p.star_extension, p.star_extension));
    Matrix g_storage = p.storage_code.generator_matrix();
    p.doubled_storage_gen = Matrix::block_diag(g_storage, g_storage);
    Matrix g_query = p.query_code.generator_matrix();
    p.doubled_query_gen = Matrix::block_diag(g_query, g_query);

    // Every stripe must see exactly k distinct target positions across rounds.
    for (size_t b = 0; b < p.beta; ++b) {
        std::set<size_t> seen;
        for (size_t r = 0; r < p.rho; ++r) {
            RoundGeometry geom = round_geometry(p, r);
            seen.insert(geom.targets_per_block[b].begin(), geom.targets_per_block[b].end());
        }
        if (seen.size() != k) {
            throw ConstructionError("target positions do not cover k columns per stripe");
        }
    }
    return p;
}

StorageMatrix encode_storage(const Matrix& x, const SchemeParams& params) {
    if (x.rows() != params.m * params.beta || x.cols() != 2 * params.k) {
        throw ParameterError("storage matrix must be m*beta x 2k");
    }
    if (&x.spec() != params.field) throw FieldMismatchError("storage matrix field mismatch");
    return StorageMatrix{x, x * params.doubled_storage_gen};
}

RoundGeometry round_geometry(const SchemeParams& params, size_t round) {
    if (round >= params.rho) {
        throw ParameterError("round index " + std::to_string(round) + " out of range [0, " +
                             std::to_string(params.rho) + ")");
    }
    RoundGeometry g;
    g.round = round;
    size_t window = std::max(params.c, params.k);
    g.window.resize(window);
    for (size_t i = 0; i < window; ++i) g.window[i] = i;

    size_t step = params.c / params.beta;
    g.targets_per_block.resize(params.beta);
    for (size_t b = 0; b < params.beta; ++b) {
        for (size_t i = 0; i < step; ++i) {
            g.targets_per_block[b].push_back((b * step + i + round * step) % window);
        }
        std::sort(g.targets_per_block[b].begin(), g.targets_per_block[b].end());
    }

    for (size_t b = 0; b < params.beta; ++b) {
        for (size_t a : g.targets_per_block[b]) g.layout.emplace_back(a, b);
    }

    std::set<size_t> distinct;
    g.selector = Matrix(params.c, params.n, *params.field);
    for (size_t j = 0; j < params.c; ++j) {
        g.selector.set(j, g.layout[j].first, FieldElement(1, *params.field));
        distinct.insert(g.layout[j].first);
    }
    if (distinct.size() != params.c) {
        throw ConstructionError("round targets are not distinct");
    }
    g.complement = Matrix::block_diag(g.selector, g.selector);

    if (vstack(params.doubled_star_gen, g.complement).rank() != 2 * params.n) {
        throw ConstructionError("star generator plus selector rows do not span F_q^{2n}");
    }
    return g;
}

Matrix file_selector(const SchemeParams& params, const RoundGeometry& geometry, size_t iota) {
    if (iota >= params.m) throw ParameterError("file index out of range");
    Matrix e(params.m * params.beta, 2 * params.c, *params.field);
    for (size_t p = 0; p < 2; ++p) {
        for (size_t j = 0; j < params.c; ++j) {
            size_t stripe = geometry.layout[j].second;
            e.set(iota * params.beta + stripe, p * params.c + j, FieldElement(1, *params.field));
        }
    }
    return e;
}

QueryBundle build_queries(const SchemeParams& params, const RoundGeometry& geometry, size_t iota,
                          Rng& rng) {
    QueryBundle q;
    q.mask = rng.uniform_matrix(params.m * params.beta, 2 * params.t, *params.field);
    q.selector = file_selector(params, geometry, iota);
    q.queries = q.mask * params.doubled_query_gen + q.selector * geometry.complement;
    return q;
}

std::pair<FieldElement, FieldElement> server_respond(const Vec& y1, const Vec& y2, const Vec& q1,
                                                     const Vec& q2) {
    return {dot(y1, q1), dot(y2, q2)};
}

Vec collect_responses(const SchemeParams& params, const StorageMatrix& storage,
                      const QueryBundle& queries) {
    Vec response(2 * params.n, FieldElement(0, *params.field));
    for (size_t s = 0; s < params.n; ++s) {
        auto [b1, b2] = server_respond(storage.server_column(0, s, params.n),
                                       storage.server_column(1, s, params.n),
                                       queries.server_query(0, s, params.n),
                                       queries.server_query(1, s, params.n));
        response[s] = b1;
        response[params.n + s] = b2;
    }
    return response;
}

MeasuredRound measure_response(const SchemeParams& params, const RoundGeometry& geometry,
                               const Vec& response, Backend backend) {
    StabilizerSpace space(params.star_parity, geometry.complement);

    CosetLabel fast_label = space.apply_weyl(space.zero_label(), response);
    // The masked component must sit inside the star code.
    Vec masked = add(response, space.representative(fast_label));
    if (!in_rowspace(params.doubled_star_gen, masked)) {
        throw ConstructionError("response minus targeted symbols is not a star codeword");
    }

    if (backend == Backend::Fast) return MeasuredRound{fast_label, 1.0};

    DensityMatrix state = initial_state(space);
    for (size_t s = 0; s < params.n; ++s) {
        state.apply_site_weyl(s, response[s], response[params.n + s]);
    }
    PvmOutcome outcome = measure_pvm(state, space);
    if (outcome.probability < 1.0 - 1e-9) {
        throw CertificationError("PVM outcome is not a point mass: p = " +
                                 std::to_string(outcome.probability));
    }
    if (backend == Backend::Both && outcome.label != fast_label) {
        throw CertificationError("coset backend and exact simulator disagree on the outcome");
    }
    return MeasuredRound{outcome.label, outcome.probability};
}

RoundResult run_round(const SchemeParams& params, const RoundGeometry& geometry,
                      const StorageMatrix& storage, size_t iota, Rng& rng, Backend backend) {
    RoundResult result;
    result.queries = build_queries(params, geometry, iota, rng);
    result.response = collect_responses(params, storage, result.queries);
    MeasuredRound measured = measure_response(params, geometry, result.response, backend);
    result.outcome = measured.outcome;
    result.oracle_probability = measured.oracle_probability;
    return result;
}

Matrix decode_rounds(const SchemeParams& params,
                     const std::vector<RoundGeometry>& geometries,
                     const std::vector<CosetLabel>& outcomes) {
    if (geometries.size() != params.rho || outcomes.size() != params.rho) {
        throw ParameterError("decode needs one geometry and outcome per round");
    }
    // (stripe, pair) -> position -> symbol
    std::vector<std::vector<std::map<size_t, FieldElement>>> collected(
        params.beta, std::vector<std::map<size_t, FieldElement>>(2));
    for (size_t r = 0; r < params.rho; ++r) {
        const auto& layout = geometries[r].layout;
        const Vec& coeffs = outcomes[r].coeffs;
        if (coeffs.size() != 2 * params.c) throw ParameterError("outcome length != 2c");
        for (size_t p = 0; p < 2; ++p) {
            for (size_t j = 0; j < params.c; ++j) {
                auto [server, stripe] = layout[j];
                collected[stripe][p][server] = coeffs[p * params.c + j];
            }
        }
    }

    Matrix decoded(params.beta, 2 * params.k, *params.field);
    for (size_t b = 0; b < params.beta; ++b) {
        for (size_t p = 0; p < 2; ++p) {
            if (collected[b][p].size() != params.k) {
                throw ConstructionError("round outcomes do not cover k positions per stripe");
            }
            std::vector<size_t> positions;
            Vec symbols;
            for (const auto& [pos, sym] : collected[b][p]) {
                positions.push_back(pos);
                symbols.push_back(sym);
            }
            Vec message = params.storage_code.erasure_decode(positions, symbols);
            for (size_t j = 0; j < params.k; ++j) decoded.set(b, p * params.k + j, message[j]);
        }
    }
    return decoded;
}

Matrix run_retrieval(const SchemeParams& params, const StorageMatrix& storage, size_t iota,
                     Rng& rng, Backend backend) {
    std::vector<RoundGeometry> geometries;
    std::vector<CosetLabel> outcomes;
    for (size_t r = 0; r < params.rho; ++r) {
        geometries.push_back(round_geometry(params, r));
        outcomes.push_back(run_round(params, geometries.back(), storage, iota, rng, backend).outcome);
    }
    return decode_rounds(params, geometries, outcomes);
}

ClassicalRound classical_star_pir_round(const SchemeParams& params, const RoundGeometry& geometry,
                                        const StorageMatrix& storage, size_t iota, Rng& rng) {
    ClassicalRound round;
    round.queries = build_queries(params, geometry, iota, rng);
    round.response = collect_responses(params, storage, round.queries);

    // Same algebra as the measurement, without the Weyl layer: solve
    // response = masked * star_gen + desired * complement and keep the tail.
    Matrix basis = vstack(params.doubled_star_gen, geometry.complement);
    Matrix inverse = basis.inverse();
    std::vector<size_t> tail;
    for (size_t j = 2 * params.n - 2 * params.c; j < 2 * params.n; ++j) tail.push_back(j);
    round.recovery = inverse.select_cols(tail);
    round.desired = row_times(round.response, round.recovery);
    return round;
}

Rational scheme_rate(const SchemeParams& params) {
    Rational by_count = Rational::make(static_cast<int64_t>(2 * params.beta * params.k),
                                       static_cast<int64_t>(params.rho * params.n));
    Rational closed = Rational::make(static_cast<int64_t>(2 * params.c),
                                     static_cast<int64_t>(params.n));
    if (by_count != closed) throw ConstructionError("rate bookkeeping mismatch");
    return by_count;
}

Rational classical_star_rate(const SchemeParams& params) {
    return Rational::make(static_cast<int64_t>(params.c), static_cast<int64_t>(params.n));
}

}  // namespace qpir
