#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <set>
#include <algorithm>

#include "qpir/protocol.hpp"

using namespace qpir;

namespace {

const FieldSpec& f2 = FieldSpec::get(1);
const FieldSpec& f4 = FieldSpec::get(2);
const FieldSpec& f8 = FieldSpec::get(3);

Matrix zero_matrix(size_t r, size_t c, const FieldSpec& fs) { return Matrix(r, c, fs); }

}  // namespace

TEST_CASE("derived parameters for the scheme grid") {
    SchemeParams a = derive_params(4, 1, 2, 1, f4);
    CHECK(a.c == 2);
    CHECK(a.beta == 2);
    CHECK(a.rho == 1);

    SchemeParams b = derive_params(6, 2, 2, 1, f8);
    CHECK(b.c == 3);
    CHECK(b.beta == 3);
    CHECK(b.rho == 2);

    SchemeParams c = derive_params(5, 2, 2, 1, f8);
    CHECK(c.c == 2);
    CHECK(c.beta == 1);
    CHECK(c.rho == 1);
}

TEST_CASE("parameter validation names the violated constraint") {
    CHECK_THROWS_WITH_AS(derive_params(4, 1, 4, 1, f4), doctest::Contains("k+t-1 < n"),
                         ParameterError);
    CHECK_THROWS_WITH_AS(derive_params(4, 1, 1, 1, f4), doctest::Contains("n/2 <= k+t-1"),
                         ParameterError);
    CHECK_THROWS_WITH_AS(derive_params(6, 2, 2, 1, f4), doctest::Contains("field size"),
                         ParameterError);
}

TEST_CASE("collusion padding") {
    CHECK(pad_collusion(8, 1, 1) == std::pair<size_t, size_t>{8, 4});
    CHECK(pad_collusion(7, 2, 1) == std::pair<size_t, size_t>{6, 2});
    CHECK(pad_collusion(4, 2, 1) == std::pair<size_t, size_t>{4, 1});  // boundary no-op
    auto [n_eff, t_eff] = pad_collusion(8, 1, 1);
    CHECK(n_eff / 2 == 1 + t_eff - 1);  // k + t' - 1 = n'/2
}

TEST_CASE("storage encoding") {
    SchemeParams params = derive_params(4, 1, 2, 2, f4);  // beta = 2, m = 2
    StorageMatrix zero = encode_storage(zero_matrix(4, 2, f4), params);
    CHECK(zero.y.is_zero());

    // A single nonzero row encodes to that row's codeword in both blocks.
    Matrix x = zero_matrix(4, 2, f4);
    x.set(1, 0, FieldElement(2, f4));
    x.set(1, 1, FieldElement(3, f4));
    StorageMatrix st = encode_storage(x, params);
    Vec left = params.storage_code.encode(Vec{x.at(1, 0)});
    Vec right = params.storage_code.encode(Vec{x.at(1, 1)});
    for (size_t s = 0; s < 4; ++s) {
        CHECK(st.y.at(1, s) == left[s]);
        CHECK(st.y.at(1, 4 + s) == right[s]);
    }
    for (size_t j = 0; j < 8; ++j) CHECK(st.y.at(0, j).is_zero());

    CHECK_THROWS_AS(encode_storage(zero_matrix(3, 2, f4), params), ParameterError);
}

TEST_CASE("round geometry for (4,1,2)") {
    SchemeParams params = derive_params(4, 1, 2, 1, f4);
    RoundGeometry g = round_geometry(params, 0);
    CHECK(g.window == std::vector<size_t>{0, 1});
    CHECK(g.targets_per_block[0] == std::vector<size_t>{0});
    CHECK(g.targets_per_block[1] == std::vector<size_t>{1});
    CHECK(g.selector.rows() == 2);
    // Selector rows are distinct standard basis vectors.
    CHECK(g.selector.at(0, 0) == FieldElement(1, f4));
    CHECK(g.selector.at(1, 1) == FieldElement(1, f4));
    CHECK_THROWS_AS(round_geometry(params, 1), ParameterError);
}

TEST_CASE("round geometry recursion for (6,2,2)") {
    SchemeParams params = derive_params(6, 2, 2, 1, f8);
    RoundGeometry g1 = round_geometry(params, 0);
    RoundGeometry g2 = round_geometry(params, 1);
    for (size_t b = 0; b < 3; ++b) {
        CHECK(g1.targets_per_block[b] == std::vector<size_t>{b});
        CHECK(g2.targets_per_block[b] == std::vector<size_t>{(b + 1) % 3});
        // Union per stripe covers k = 2 distinct positions.
        std::set<size_t> seen{g1.targets_per_block[b][0], g2.targets_per_block[b][0]};
        CHECK(seen.size() == 2);
    }
    CHECK(vstack(params.doubled_star_gen, g1.complement).rank() == 12);
    CHECK(vstack(params.doubled_star_gen, g2.complement).rank() == 12);
}

TEST_CASE("query construction identity and selector structure") {
    SchemeParams params = derive_params(4, 1, 2, 2, f4);
    RoundGeometry geom = round_geometry(params, 0);
    Rng rng(3);
    QueryBundle bundle = build_queries(params, geom, 1, rng);
    CHECK(bundle.queries ==
          bundle.mask * params.doubled_query_gen + bundle.selector * geom.complement);

    // With the random part removed, row (iota, b) selects exactly the round's
    // target positions in both column blocks and every other row is zero.
    Matrix deterministic = bundle.selector * geom.complement;
    for (size_t i = 0; i < params.m; ++i) {
        for (size_t b = 0; b < params.beta; ++b) {
            Vec row = deterministic.row(i * params.beta + b);
            for (size_t p = 0; p < 2; ++p) {
                for (size_t s = 0; s < params.n; ++s) {
                    bool targeted = i == 1 && std::count(geom.targets_per_block[b].begin(),
                                                         geom.targets_per_block[b].end(), s) > 0;
                    CHECK(row[p * params.n + s] == FieldElement(targeted ? 1 : 0, f4));
                }
            }
        }
    }

    CHECK_THROWS_AS(build_queries(params, geom, 2, rng), ParameterError);
}

TEST_CASE("query marginal on a column block is exactly uniform over the mask") {
    // m = 1 at (4,1,2) over GF(4): enumerate all masks and tabulate the
    // first-block queries of a t-subset; every pattern appears equally often.
    SchemeParams params = derive_params(4, 1, 2, 1, f4);
    RoundGeometry geom = round_geometry(params, 0);
    Matrix selector_part = file_selector(params, geom, 0) * geom.complement;
    std::vector<size_t> watched{0, 1};

    std::map<std::vector<uint32_t>, size_t> counts;
    size_t rows = params.m * params.beta;  // 2
    size_t total = 1;
    for (size_t i = 0; i < rows * 2 * params.t; ++i) total *= 4;
    for (size_t enc = 0; enc < total; ++enc) {
        size_t rest = enc;
        Matrix mask(rows, 2 * params.t, f4);
        for (size_t i = 0; i < rows; ++i) {
            for (size_t j = 0; j < 2 * params.t; ++j) {
                mask.set(i, j, FieldElement(static_cast<uint32_t>(rest % 4), f4));
                rest /= 4;
            }
        }
        Matrix queries = mask * params.doubled_query_gen + selector_part;
        std::vector<uint32_t> key;
        for (size_t s : watched) {
            for (size_t i = 0; i < rows; ++i) key.push_back(queries.at(i, s).value());
        }
        counts[key] += 1;
    }
    CHECK(counts.size() == 256);  // 4^(2 rows x 2 servers)
    for (const auto& [key, count] : counts) CHECK(count == total / 256);
}

TEST_CASE("server response dot products") {
    Vec y1{FieldElement(1, f4), FieldElement(2, f4)};
    Vec y2{FieldElement(3, f4), FieldElement(0, f4)};
    Vec e0{FieldElement(1, f4), FieldElement(0, f4)};
    Vec e1{FieldElement(0, f4), FieldElement(1, f4)};
    auto [b1, b2] = server_respond(y1, y2, e0, e1);
    CHECK(b1 == y1[0]);  // unit query selects one stored symbol
    CHECK(b2 == y2[1]);

    Vec zero(2, FieldElement(0, f4));
    auto [z1, z2] = server_respond(zero, zero, e0, e1);
    CHECK(z1.is_zero());
    CHECK(z2.is_zero());
}

TEST_CASE("aggregated responses equal the star-product sum over rows") {
    SchemeParams params = derive_params(5, 2, 2, 2, f8);
    Rng rng(7);
    StorageMatrix storage =
        encode_storage(rng.uniform_matrix(2, 4, f8), params);
    RoundGeometry geom = round_geometry(params, 0);
    QueryBundle bundle = build_queries(params, geom, 0, rng);
    Vec responses = collect_responses(params, storage, bundle);

    Vec expected(2 * params.n, FieldElement(0, f8));
    for (size_t row = 0; row < params.m * params.beta; ++row) {
        expected = add(expected, star(storage.y.row(row), bundle.queries.row(row)));
    }
    CHECK(responses == expected);
}

TEST_CASE("round outcome equals the targeted storage symbols") {
    Rng rng(11);
    for (int trial = 0; trial < 25; ++trial) {
        SchemeParams params = derive_params(4, 1, 2, 3, f4);
        StorageMatrix storage =
            encode_storage(rng.uniform_matrix(params.m * params.beta, 2, f4), params);
        size_t iota = trial % 3;
        RoundGeometry geom = round_geometry(params, 0);
        RoundResult result = run_round(params, geom, storage, iota, rng, Backend::Fast);
        for (size_t p = 0; p < 2; ++p) {
            for (size_t j = 0; j < params.c; ++j) {
                auto [server, stripe] = geom.layout[j];
                CHECK(result.outcome.coeffs[p * params.c + j] ==
                      storage.y.at(iota * params.beta + stripe, p * params.n + server));
            }
        }
        // Decomposition: response minus the targeted part is a star codeword.
        Vec rep = row_times(result.outcome.coeffs, geom.complement);
        CHECK(in_rowspace(params.doubled_star_gen, add(result.response, rep)));
    }
}

TEST_CASE("zero storage yields the zero outcome") {
    SchemeParams params = derive_params(5, 2, 2, 1, f8);
    StorageMatrix storage = encode_storage(zero_matrix(1, 4, f8), params);
    Rng rng(13);
    RoundResult result =
        run_round(params, round_geometry(params, 0), storage, 0, rng, Backend::Fast);
    CHECK(result.outcome.is_zero());
}

TEST_CASE("cross-backend round agreement at oracle scale") {
    SchemeParams params = derive_params(4, 1, 2, 2, f4);  // q^n = 256
    Rng rng(17);
    for (int trial = 0; trial < 5; ++trial) {
        StorageMatrix storage =
            encode_storage(rng.uniform_matrix(params.m * params.beta, 2, f4), params);
        RoundGeometry geom = round_geometry(params, 0);
        RoundResult result = run_round(params, geom, storage, trial % 2, rng, Backend::Both);
        CHECK(result.oracle_probability == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("full retrieval is exact") {
    Rng rng(19);
    SUBCASE("single round geometry") {
        SchemeParams params = derive_params(4, 1, 2, 2, f4);
        for (int trial = 0; trial < 20; ++trial) {
            Matrix x = rng.uniform_matrix(params.m * params.beta, 2, f4);
            StorageMatrix storage = encode_storage(x, params);
            size_t iota = trial % 2;
            Matrix decoded = run_retrieval(params, storage, iota, rng, Backend::Fast);
            for (size_t b = 0; b < params.beta; ++b) {
                for (size_t j = 0; j < 2 * params.k; ++j) {
                    CHECK(decoded.at(b, j) == x.at(iota * params.beta + b, j));
                }
            }
        }
    }
    SUBCASE("two-round geometry") {
        SchemeParams params = derive_params(6, 2, 2, 2, f8);
        CHECK(params.rho == 2);
        for (int trial = 0; trial < 10; ++trial) {
            Matrix x = rng.uniform_matrix(params.m * params.beta, 4, f8);
            StorageMatrix storage = encode_storage(x, params);
            size_t iota = trial % 2;
            Matrix decoded = run_retrieval(params, storage, iota, rng, Backend::Fast);
            for (size_t b = 0; b < params.beta; ++b) {
                for (size_t j = 0; j < 2 * params.k; ++j) {
                    CHECK(decoded.at(b, j) == x.at(iota * params.beta + b, j));
                }
            }
        }
    }
    SUBCASE("single file") {
        SchemeParams params = derive_params(5, 2, 2, 1, f8);
        Matrix x = rng.uniform_matrix(1, 4, f8);
        Matrix decoded = run_retrieval(params, encode_storage(x, params), 0, rng, Backend::Fast);
        CHECK(decoded == x);
    }
}

TEST_CASE("classical mode shares the algebra and is strongly linear") {
    SchemeParams params = derive_params(5, 2, 2, 2, f8);
    RoundGeometry geom = round_geometry(params, 0);
    Rng storage_rng(23);
    StorageMatrix storage =
        encode_storage(storage_rng.uniform_matrix(2, 4, f8), params);

    // Identical seeds give identical query randomness on both paths.
    Rng rng_classical(29);
    Rng rng_quantum(29);
    ClassicalRound classical = classical_star_pir_round(params, geom, storage, 1, rng_classical);
    RoundResult quantum = run_round(params, geom, storage, 1, rng_quantum, Backend::Fast);
    CHECK(classical.desired == quantum.outcome.coeffs);

    // Recovery is one fixed linear map of the responses.
    Rng rng(31);
    for (int trial = 0; trial < 100; ++trial) {
        Vec b1 = rng.uniform_vec(2 * params.n, f8);
        Vec b2 = rng.uniform_vec(2 * params.n, f8);
        Vec sum = row_times(add(b1, b2), classical.recovery);
        CHECK(sum == add(row_times(b1, classical.recovery), row_times(b2, classical.recovery)));
    }

    // Download bookkeeping: the quantum mode moves the same symbols in half
    // the downloaded units.
    Rational quantum_rate = scheme_rate(params);
    Rational classical_rate = classical_star_rate(params);
    CHECK(quantum_rate == Rational::make(2 * classical_rate.num, classical_rate.den));
}

TEST_CASE("scheme rate values") {
    CHECK(scheme_rate(derive_params(4, 1, 2, 1, f4)) == Rational::make(1, 1));
    CHECK(scheme_rate(derive_params(5, 2, 2, 1, f8)) == Rational::make(4, 5));
    CHECK(scheme_rate(derive_params(6, 3, 2, 1, f8)) == Rational::make(2, 3));
}
