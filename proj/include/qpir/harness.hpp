#pragma once

#include <array>
#include <map>
#include <optional>

#include "qpir/protocol.hpp"
#include "qpir/serialize.hpp"

namespace qpir {

struct SimulationConfig {
    size_t n = 0, k = 0, t = 0, m = 0;
    unsigned field_r = 0;
    uint32_t field_modulus = 0;  // 0 = canonical modulus for field_r
    uint64_t seed = 0;
    Backend backend = Backend::Fast;
    std::string files = "random";  // "random" or a matrix file path
    size_t iota = 1;               // 1-based file index
    bool single_thread = false;

    static SimulationConfig from_json(const Json& j);
    Json to_json() const;
    const FieldSpec& field() const;
};

// Scheme parameters after optional collusion padding.
struct EffectiveParams {
    SchemeParams params;
    size_t requested_n = 0, requested_t = 0;
    bool padded = false;
};

EffectiveParams derive_effective(const SimulationConfig& config);

// One actor per server. An actor owns exactly its stored column pair and sees
// exactly its query slice; everything else moves through recorded messages.
class ServerActor {
public:
    ServerActor(size_t id, Vec y1, Vec y2)
        : id_(id), y1_(std::move(y1)), y2_(std::move(y2)) {}

    size_t id() const { return id_; }
    std::pair<FieldElement, FieldElement> respond(const Vec& q1, const Vec& q2) const {
        return server_respond(y1_, y2_, q1, q2);
    }

private:
    size_t id_;
    Vec y1_, y2_;
};

struct Message {
    std::string from, to, kind;
    Json payload;
};

struct Transcript {
    Json params;
    uint64_t seed = 0;
    size_t iota = 1;  // 1-based
    Json rounds = Json::array();
    Matrix decoded;

    // Runtime bookkeeping, not part of the serialized record.
    std::vector<Message> messages;
    Matrix stored_file;  // the true file block, for verification
    size_t downloaded_systems = 0;
    size_t uploaded_symbols = 0;

    Json to_json() const;
};

Matrix load_or_generate_files(const SimulationConfig& config, const SchemeParams& params,
                              Rng& rng);

Transcript run_simulation(const SimulationConfig& config);

// Every server saw only its own query slice and emitted only its own response.
bool check_actor_isolation(const Transcript& transcript, size_t n);

struct AuditReport {
    std::string kind;
    Json info;
    bool pass = false;
    Json evidence;

    Json to_json() const {
        return Json{{"kind", kind},
                    {"info", info},
                    {"verdict", pass ? "PASS" : "FAIL"},
                    {"evidence", evidence}};
    }
};

// Algebraic mode (always): every t-subset of query-generator columns has full
// rank t, so the joint query marginal of any t servers is exactly uniform.
// Empirical mode (samples > 0): frequency histograms of a fixed projection of
// the colluders' queries for the first two file indices, compared in total
// variation against the threshold 4*sqrt(bins/samples).
AuditReport audit_user_privacy(const SimulationConfig& config, std::vector<size_t> subset_1based,
                               size_t empirical_samples);

// Resamples every non-target file with the queries pinned; the user's coset
// labels and decode must not move. inject_fault corrupts the reduction basis
// as a negative control.
AuditReport audit_server_secrecy(const SimulationConfig& config, size_t trials,
                                 bool inject_fault);

// Code-construction checks: star identity, weak self-duality, column
// independence of the doubled generator, symplectic orthogonality of the
// measurement rows, MDS of all three codes. inject_fault corrupts the star
// multipliers as a negative control.
AuditReport verify_codes(const SimulationConfig& config, bool inject_fault);

// Cross-backend certification over full retrievals.
AuditReport oracle_check(const SimulationConfig& config, size_t rounds);

// Reproduces the replicated two-server retrieval over GF(2): files are pairs
// (m_X, m_Z), the outcome representative is (m_X, 0 | m_Z, 0), rate 1.
AuditReport two_server_example(size_t files, uint64_t seed);

struct CapacityRow {
    size_t n = 0, k = 0, t = 0;
    std::string storage_class;
    Rational pir;   // classical
    Rational spir;  // symmetric classical
    Rational qpir;  // min{1, 2(n-k-t+1)/n}
    bool achievable = false;  // this scheme runs (possibly padded)
    Rational measured;        // scheme rate when achievable
    bool achieved = false;    // measured == qpir
};

std::vector<CapacityRow> capacity_rows(const std::vector<std::array<size_t, 3>>& grid);
std::string format_capacity_table(const std::vector<CapacityRow>& rows);
Json capacity_rows_to_json(const std::vector<CapacityRow>& rows);

}  // namespace qpir
