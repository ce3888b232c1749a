#pragma once

#include <optional>

#include "qpir/codes.hpp"
#include "qpir/qoracle.hpp"
#include "qpir/rng.hpp"
#include "qpir/stabilizer.hpp"

namespace qpir {

struct Rational {
    int64_t num = 0;
    int64_t den = 1;

    static Rational make(int64_t num, int64_t den);
    bool operator==(const Rational& o) const { return num == o.num && den == o.den; }
    bool operator!=(const Rational& o) const { return !(*this == o); }
    bool operator<(const Rational& o) const { return num * o.den < o.num * den; }
    std::string str() const;
};

enum class Backend { Fast, Oracle, Both };

Backend backend_from_string(const std::string& name);
std::string backend_to_string(Backend b);

// Everything one retrieval scheme instance needs: the storage, query and star
// codes on shared locators, the parity/extension split of the star generator,
// and the doubled block generators.
struct SchemeParams {
    size_t n = 0, k = 0, t = 0, m = 0;
    const FieldSpec* field = nullptr;
    size_t c = 0;     // n - k - t + 1, symbols targeted per round and column block
    size_t beta = 0;  // lcm(c, k) / k, stripes per file
    size_t rho = 0;   // lcm(c, k) / c, rounds per retrieval

    GrsCode storage_code;  // [n, k]
    GrsCode query_code;    // [n, t]
    GrsCode star_code;     // [n, k+t-1], weakly self-dual

    Matrix star_parity;     // c x n, canonical parity check of the star code
    Matrix star_extension;  // (2(k+t-1) - n) x n, completes parity rows to a basis
    Matrix star_gen;        // [parity; extension]
    Matrix doubled_star_gen;     // [diag(parity,parity); diag(extension,extension)]
    Matrix doubled_storage_gen;  // diag(G_storage, G_storage)
    Matrix doubled_query_gen;    // diag(G_query, G_query)

    size_t file_rows() const { return beta; }
    size_t file_cols() const { return 2 * k; }
};

SchemeParams derive_params(size_t n, size_t k, size_t t, size_t m, const FieldSpec& field);

// For k+t-1 < n/2 the scheme is run with a larger effective collusion
// parameter (and one server dropped when n is odd) so that k+t'-1 = n'/2.
// Returns (n', t').
std::pair<size_t, size_t> pad_collusion(size_t n, size_t k, size_t t);

struct StorageMatrix {
    Matrix x;  // m*beta x 2k
    Matrix y;  // m*beta x 2n, x * diag(G, G)

    Vec server_column(size_t pair, size_t server, size_t n) const {
        return y.col(pair * n + server);
    }
};

StorageMatrix encode_storage(const Matrix& x, const SchemeParams& params);

// Per-round targeting: which server positions carry the desired symbols, how
// they partition across file stripes, and the selector rows completing the
// star generator to a basis of F_q^{2n}.
struct RoundGeometry {
    size_t round = 0;                                    // 0-based
    std::vector<size_t> window;                          // servers 0..max(c,k)-1
    std::vector<std::vector<size_t>> targets_per_block;  // per stripe b, sorted
    // Coset coordinate j -> (server, stripe); stripes ascending, positions
    // ascending inside a stripe. Fixes the serialization order of outcomes.
    std::vector<std::pair<size_t, size_t>> layout;
    Matrix selector;    // c x n, rows are standard basis vectors
    Matrix complement;  // diag(selector, selector), 2c x 2n
};

RoundGeometry round_geometry(const SchemeParams& params, size_t round);

struct QueryBundle {
    Matrix mask;      // m*beta x 2t, uniformly random
    Matrix selector;  // m*beta x 2c, marks the desired file's stripe rows
    Matrix queries;   // mask * diag(G_D, G_D) + selector * complement

    Vec server_query(size_t pair, size_t server, size_t n) const {
        return queries.col(pair * n + server);
    }
};

// The deterministic part of the queries: column (p, j) has a single 1 in the
// desired file's stripe row for coordinate j's stripe.
Matrix file_selector(const SchemeParams& params, const RoundGeometry& geometry, size_t iota);

QueryBundle build_queries(const SchemeParams& params, const RoundGeometry& geometry, size_t iota,
                          Rng& rng);

// Dot products of the stored column pair against the query column pair.
std::pair<FieldElement, FieldElement> server_respond(const Vec& y1, const Vec& y2, const Vec& q1,
                                                     const Vec& q2);

// Aggregated per-server responses (B_{1,1..n} | B_{2,1..n}).
Vec collect_responses(const SchemeParams& params, const StorageMatrix& storage,
                      const QueryBundle& queries);

struct MeasuredRound {
    CosetLabel outcome;
    double oracle_probability = 1.0;  // 1 exactly on the fast path
};

// Turns the response vector into the round outcome, on the requested backend.
// In Both mode the coset path and the exact simulator must agree on the label
// and the simulator must see a point mass.
MeasuredRound measure_response(const SchemeParams& params, const RoundGeometry& geometry,
                               const Vec& response, Backend backend);

struct RoundResult {
    QueryBundle queries;
    Vec response;  // length 2n
    CosetLabel outcome;
    double oracle_probability = 1.0;
};

RoundResult run_round(const SchemeParams& params, const RoundGeometry& geometry,
                      const StorageMatrix& storage, size_t iota, Rng& rng, Backend backend);

// Map round outcomes back to (stripe, pair, server) -> symbol and erasure
// decode each stripe half. Returns the beta x 2k reconstruction.
Matrix decode_rounds(const SchemeParams& params,
                     const std::vector<RoundGeometry>& geometries,
                     const std::vector<CosetLabel>& outcomes);

Matrix run_retrieval(const SchemeParams& params, const StorageMatrix& storage, size_t iota,
                     Rng& rng, Backend backend);

// Classical mode: servers return the raw response pair; the user solves the
// star-generator system instead of measuring. `recovery` maps the length-2n
// response vector linearly onto the 2c desired symbols.
struct ClassicalRound {
    QueryBundle queries;
    Vec response;
    Vec desired;      // length 2c, same layout as the quantum outcome
    Matrix recovery;  // 2n x 2c
};

ClassicalRound classical_star_pir_round(const SchemeParams& params, const RoundGeometry& geometry,
                                        const StorageMatrix& storage, size_t iota, Rng& rng);

// 2*beta*k symbols per rho*n downloaded systems, reduced; equals 2c/n.
Rational scheme_rate(const SchemeParams& params);
// Classical star-product mode: half the quantum rate.
Rational classical_star_rate(const SchemeParams& params);

}  // namespace qpir
