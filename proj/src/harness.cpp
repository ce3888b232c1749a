#include "qpir/harness.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <set>

namespace qpir {

namespace {

Json label_to_json(const CosetLabel& label) { return vec_to_json(label.coeffs); }

uint64_t mix_seed(uint64_t seed, uint64_t salt) {
    // splitmix-style stir so derived streams never collide with the main one.
    uint64_t z = seed + 0x9e3779b97f4a7c15ull * (salt + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

}  // namespace

SimulationConfig SimulationConfig::from_json(const Json& j) {
    SimulationConfig c;
    try {
        c.n = j.at("n").get<size_t>();
        c.k = j.at("k").get<size_t>();
        c.t = j.at("t").get<size_t>();
        c.m = j.at("m").get<size_t>();
        const Json& field = j.at("field");
        c.field_r = field.at("r").get<unsigned>();
        if (field.contains("modulus")) c.field_modulus = field.at("modulus").get<uint32_t>();
        c.seed = j.at("seed").get<uint64_t>();
        c.backend = backend_from_string(j.value("backend", std::string("fast")));
        c.files = j.value("files", std::string("random"));
        c.iota = j.value("iota", size_t{1});
        c.single_thread = j.value("single_thread", false);
    } catch (const Json::exception& e) {
        throw ConfigError(std::string("bad config: ") + e.what());
    }
    return c;
}

Json SimulationConfig::to_json() const {
    Json field{{"r", field_r}};
    if (field_modulus) field["modulus"] = field_modulus;
    return Json{{"n", n},         {"k", k},
                {"t", t},         {"m", m},
                {"field", field}, {"seed", seed},
                {"backend", backend_to_string(backend)},
                {"files", files}, {"iota", iota},
                {"single_thread", single_thread}};
}

const FieldSpec& SimulationConfig::field() const {
    return field_modulus ? FieldSpec::get(field_r, field_modulus) : FieldSpec::get(field_r);
}

EffectiveParams derive_effective(const SimulationConfig& config) {
    EffectiveParams eff;
    eff.requested_n = config.n;
    eff.requested_t = config.t;
    auto [n_eff, t_eff] = pad_collusion(config.n, config.k, config.t);
    eff.padded = (n_eff != config.n || t_eff != config.t);
    eff.params = derive_params(n_eff, config.k, t_eff, config.m, config.field());
    return eff;
}

Matrix load_or_generate_files(const SimulationConfig& config, const SchemeParams& params,
                              Rng& rng) {
    if (config.files == "random") {
        return rng.uniform_matrix(params.m * params.beta, 2 * params.k, *params.field);
    }
    Matrix x = matrix_from_json(read_json_file(config.files));
    if (x.rows() != params.m * params.beta || x.cols() != 2 * params.k) {
        throw ConfigError("file matrix must be m*beta x 2k for the configured scheme");
    }
    if (&x.spec() != params.field) throw ConfigError("file matrix field differs from config");
    return x;
}

namespace {

Json params_json(const EffectiveParams& eff, const SimulationConfig& config) {
    const SchemeParams& p = eff.params;
    Json j{{"n", p.n},
           {"k", p.k},
           {"t", p.t},
           {"m", p.m},
           {"field", field_spec_to_json(*p.field)},
           {"c", p.c},
           {"beta", p.beta},
           {"rho", p.rho},
           {"rate", scheme_rate(p).str()},
           {"backend", backend_to_string(config.backend)}};
    if (eff.padded) {
        j["padded_from"] = Json{{"n", eff.requested_n}, {"t", eff.requested_t}};
    }
    return j;
}

}  // namespace

Transcript run_simulation(const SimulationConfig& config) {
    EffectiveParams eff = derive_effective(config);
    const SchemeParams& params = eff.params;
    if (config.iota < 1 || config.iota > params.m) {
        throw ConfigError("iota must be in [1, m]");
    }
    size_t iota = config.iota - 1;

    Rng rng(config.seed);
    Matrix x = load_or_generate_files(config, params, rng);
    StorageMatrix storage = encode_storage(x, params);

    std::vector<ServerActor> servers;
    servers.reserve(params.n);
    for (size_t s = 0; s < params.n; ++s) {
        servers.emplace_back(s, storage.server_column(0, s, params.n),
                             storage.server_column(1, s, params.n));
    }

    Transcript transcript;
    transcript.params = params_json(eff, config);
    transcript.seed = config.seed;
    transcript.iota = config.iota;

    std::vector<RoundGeometry> geometries;
    std::vector<CosetLabel> outcomes;
    for (size_t r = 0; r < params.rho; ++r) {
        geometries.push_back(round_geometry(params, r));
        const RoundGeometry& geom = geometries.back();
        QueryBundle bundle = build_queries(params, geom, iota, rng);

        Json query_log = Json::array();
        for (size_t s = 0; s < params.n; ++s) {
            Json q{{"q1", vec_to_json(bundle.server_query(0, s, params.n))},
                   {"q2", vec_to_json(bundle.server_query(1, s, params.n))}};
            transcript.messages.push_back(
                {"user", "server" + std::to_string(s + 1), "query", q});
            query_log.push_back(std::move(q));
            transcript.uploaded_symbols += 2 * params.m * params.beta;
        }

        // Servers answer independently; each sees only its own slice.
        std::vector<std::pair<FieldElement, FieldElement>> replies(
            params.n, {FieldElement(0, *params.field), FieldElement(0, *params.field)});
        auto answer = [&](size_t s) {
            return servers[s].respond(bundle.server_query(0, s, params.n),
                                      bundle.server_query(1, s, params.n));
        };
        if (config.single_thread) {
            for (size_t s = 0; s < params.n; ++s) replies[s] = answer(s);
        } else {
            std::vector<std::future<std::pair<FieldElement, FieldElement>>> futures;
            for (size_t s = 0; s < params.n; ++s) {
                futures.push_back(std::async(std::launch::async, answer, s));
            }
            for (size_t s = 0; s < params.n; ++s) replies[s] = futures[s].get();
        }

        Vec response(2 * params.n, FieldElement(0, *params.field));
        Json response_log = Json::array();
        for (size_t s = 0; s < params.n; ++s) {
            response[s] = replies[s].first;
            response[params.n + s] = replies[s].second;
            Json pair = Json::array({replies[s].first.to_hex(), replies[s].second.to_hex()});
            transcript.messages.push_back(
                {"server" + std::to_string(s + 1), "user", "response", pair});
            response_log.push_back(std::move(pair));
            transcript.downloaded_systems += 1;
        }

        MeasuredRound measured = measure_response(params, geom, response, config.backend);
        outcomes.push_back(measured.outcome);
        transcript.rounds.push_back(Json{{"r", r + 1},
                                         {"queries", query_log},
                                         {"responses", response_log},
                                         {"outcome", label_to_json(measured.outcome)}});
    }

    transcript.decoded = decode_rounds(params, geometries, outcomes);
    transcript.stored_file = Matrix(params.beta, 2 * params.k, *params.field);
    for (size_t b = 0; b < params.beta; ++b) {
        for (size_t j = 0; j < 2 * params.k; ++j) {
            transcript.stored_file.set(b, j, x.at(iota * params.beta + b, j));
        }
    }
    return transcript;
}

Json Transcript::to_json() const {
    return Json{{"params", params},
                {"seed", seed},
                {"iota", iota},
                {"rounds", rounds},
                {"decoded", matrix_to_json(decoded)}};
}

bool check_actor_isolation(const Transcript& transcript, size_t n) {
    std::map<std::string, size_t> queries_in, responses_out;
    for (const auto& msg : transcript.messages) {
        bool to_server = msg.to.rfind("server", 0) == 0;
        bool from_server = msg.from.rfind("server", 0) == 0;
        if (to_server && from_server) return false;  // no server-to-server traffic
        if (to_server) {
            if (msg.from != "user" || msg.kind != "query") return false;
            // Exactly one column pair addressed to this server.
            if (!msg.payload.contains("q1") || !msg.payload.contains("q2") ||
                msg.payload.size() != 2) {
                return false;
            }
            queries_in[msg.to] += 1;
        } else if (from_server) {
            if (msg.to != "user" || msg.kind != "response") return false;
            if (!msg.payload.is_array() || msg.payload.size() != 2) return false;
            responses_out[msg.from] += 1;
        }
    }
    size_t rounds = transcript.rounds.size();
    if (queries_in.size() != n || responses_out.size() != n) return false;
    for (const auto& [who, count] : queries_in) {
        if (count != rounds) return false;
    }
    for (const auto& [who, count] : responses_out) {
        if (count != rounds) return false;
    }
    return true;
}

AuditReport audit_user_privacy(const SimulationConfig& config, std::vector<size_t> subset_1based,
                               size_t empirical_samples) {
    EffectiveParams eff = derive_effective(config);
    const SchemeParams& params = eff.params;
    AuditReport report;
    report.kind = "user-privacy";
    report.info = params_json(eff, config);

    if (subset_1based.size() > params.t) {
        throw ParameterError("subset of " + std::to_string(subset_1based.size()) +
                             " servers exceeds the collusion bound t = " +
                             std::to_string(params.t));
    }
    std::vector<std::vector<size_t>> subsets;
    if (!subset_1based.empty()) {
        std::vector<size_t> subset;
        for (size_t s : subset_1based) {
            if (s < 1 || s > params.n) throw ParameterError("server index out of range");
            subset.push_back(s - 1);
        }
        std::sort(subset.begin(), subset.end());
        subsets.push_back(subset);
    } else {
        subsets = subsets_of_size(params.n, params.t);
    }

    // Algebraic audit: a full-rank t-column restriction of the query generator
    // makes the masked queries exactly uniform, independent of the file index.
    Matrix g_query = params.query_code.generator_matrix();
    size_t min_rank = params.t;
    for (const auto& subset : subsets) {
        min_rank = std::min(min_rank, g_query.select_cols(subset).rank());
    }
    bool algebraic_pass = (min_rank == params.t);
    report.evidence = Json{{"subsets_checked", subsets.size()},
                           {"required_rank", params.t},
                           {"min_rank", min_rank}};
    report.pass = algebraic_pass;

    if (empirical_samples > 0) {
        if (params.m < 2) throw ParameterError("empirical privacy audit needs m >= 2");
        const std::vector<size_t>& watched = subsets.front();
        const FieldSpec& fs = *params.field;
        size_t total_symbols = 2 * watched.size() * params.m * params.beta;
        size_t width = std::max<size_t>(1, 8 / fs.degree());
        width = std::min(width, total_symbols);
        size_t bins = 1;
        for (size_t i = 0; i < width; ++i) bins *= fs.order();

        RoundGeometry geom = round_geometry(params, 0);
        auto project = [&](size_t iota, uint64_t trial) {
            Rng rng(mix_seed(config.seed, trial * 2 + iota));
            QueryBundle bundle = build_queries(params, geom, iota, rng);
            Vec flat;
            for (size_t s : watched) {
                for (size_t p = 0; p < 2; ++p) {
                    Vec col = bundle.server_query(p, s, params.n);
                    flat.insert(flat.end(), col.begin(), col.end());
                }
            }
            uint64_t key = 0;
            for (size_t i = 0; i < width; ++i) key = key * fs.order() + flat[i].value();
            return key;
        };

        std::vector<double> hist0(bins, 0.0), hist1(bins, 0.0);
        for (uint64_t trial = 0; trial < empirical_samples; ++trial) {
            hist0[project(0, trial)] += 1.0;
            hist1[project(1, trial)] += 1.0;
        }
        double tv = 0;
        for (size_t b = 0; b < bins; ++b) {
            tv += std::abs(hist0[b] - hist1[b]) / empirical_samples;
        }
        tv /= 2.0;
        double threshold = 4.0 * std::sqrt(static_cast<double>(bins) / empirical_samples);
        report.evidence["empirical"] =
            Json{{"samples", empirical_samples}, {"bins", bins},
                 {"projection_width", width},   {"tv_distance", tv},
                 {"threshold", threshold}};
        report.pass = report.pass && (tv < threshold);
    }
    return report;
}

AuditReport audit_server_secrecy(const SimulationConfig& config, size_t trials,
                                 bool inject_fault) {
    EffectiveParams eff = derive_effective(config);
    const SchemeParams& params = eff.params;
    AuditReport report;
    report.kind = "server-secrecy";
    report.info = params_json(eff, config);
    report.info["inject_fault"] = inject_fault;
    size_t iota = (config.iota >= 1 && config.iota <= params.m) ? config.iota - 1 : 0;

    if (params.m < 2) {
        report.pass = true;
        report.evidence = Json{{"trials", 0}, {"note", "single file, nothing to vary"}};
        return report;
    }

    std::vector<RoundGeometry> geometries;
    std::vector<StabilizerSpace> spaces;
    for (size_t r = 0; r < params.rho; ++r) {
        geometries.push_back(round_geometry(params, r));
        spaces.push_back(inject_fault
                             ? corrupted_space_for_tests(params.star_parity,
                                                         geometries.back().complement)
                             : StabilizerSpace(params.star_parity, geometries.back().complement));
    }

    // Queries are a pure function of the seed, so replaying the seed pins them
    // while the non-target files are resampled.
    auto run_labels = [&](const Matrix& x) {
        StorageMatrix storage = encode_storage(x, params);
        Rng query_rng(config.seed);
        std::vector<CosetLabel> labels;
        for (size_t r = 0; r < params.rho; ++r) {
            QueryBundle bundle = build_queries(params, geometries[r], iota, query_rng);
            Vec response = collect_responses(params, storage, bundle);
            labels.push_back(spaces[r].apply_weyl(spaces[r].zero_label(), response));
        }
        return labels;
    };

    Rng base_rng(mix_seed(config.seed, 0));
    Matrix x_base =
        base_rng.uniform_matrix(params.m * params.beta, 2 * params.k, *params.field);
    std::vector<CosetLabel> base_labels = run_labels(x_base);

    size_t mismatches = 0;
    for (size_t trial = 1; trial <= trials; ++trial) {
        Rng trial_rng(mix_seed(config.seed, trial));
        Matrix x =
            trial_rng.uniform_matrix(params.m * params.beta, 2 * params.k, *params.field);
        for (size_t b = 0; b < params.beta; ++b) {
            for (size_t j = 0; j < 2 * params.k; ++j) {
                x.set(iota * params.beta + b, j, x_base.at(iota * params.beta + b, j));
            }
        }
        std::vector<CosetLabel> labels = run_labels(x);
        if (labels != base_labels) ++mismatches;
    }
    report.pass = (mismatches == 0);
    report.evidence = Json{{"trials", trials},
                           {"rounds_per_trial", params.rho},
                           {"label_mismatches", mismatches}};
    return report;
}

AuditReport verify_codes(const SimulationConfig& config, bool inject_fault) {
    EffectiveParams eff = derive_effective(config);
    const SchemeParams& params = eff.params;
    AuditReport report;
    report.kind = "verify-codes";
    report.info = params_json(eff, config);
    report.info["inject_fault"] = inject_fault;

    GrsCode star = params.star_code;
    if (inject_fault) {
        Vec bad = star.multipliers();
        bad[0] = bad[0] * FieldElement(2, *params.field);
        star = GrsCode(star.locators(), bad, star.dim());
    }
    Matrix parity = star.parity_check_matrix();
    Matrix gen = star.generator_matrix();

    Json checks;
    bool star_identity = star_product(params.storage_code, params.query_code) == star &&
                         star.dim() == params.k + params.t - 1;
    checks["star_identity"] = star_identity;

    bool weakly_self_dual =
        (parity * parity.transposed()).is_zero() && rowspace_contains(gen, parity);
    checks["weak_self_duality"] = weakly_self_dual;

    // Rebuild the doubled generator for the audited star code.
    Matrix accum = parity;
    std::vector<Vec> ext_rows;
    for (size_t i = 0; i < gen.rows() && accum.rank() < star.dim(); ++i) {
        Matrix trial = vstack(accum, Matrix::from_rows({gen.row(i)}));
        if (trial.rank() > accum.rank()) {
            ext_rows.push_back(gen.row(i));
            accum = trial;
        }
    }
    Matrix extension =
        ext_rows.empty() ? Matrix(0, params.n, *params.field) : Matrix::from_rows(ext_rows);
    Matrix doubled = vstack(Matrix::block_diag(parity, parity),
                            Matrix::block_diag(extension, extension));

    // Any k+t-1 columns per block, and both blocks jointly, stay independent.
    bool independence = doubled.rows() == 2 * star.dim();
    for (const auto& subset : subsets_of_size(params.n, star.dim())) {
        if (!independence) break;
        if (gen.select_cols(subset).rank() != star.dim()) independence = false;
        std::vector<size_t> joint = subset;
        for (size_t s : subset) joint.push_back(params.n + s);
        if (doubled.select_cols(joint).rank() != 2 * star.dim()) independence = false;
    }
    checks["column_independence"] = independence;

    // Measurement rows against the full doubled generator under the
    // symplectic pairing.
    bool symplectic_ok = true;
    Matrix measurement = Matrix::block_diag(parity, parity);
    for (size_t i = 0; i < measurement.rows() && symplectic_ok; ++i) {
        for (size_t j = 0; j < doubled.rows() && symplectic_ok; ++j) {
            if (symplectic_form(measurement.row(i), doubled.row(j)) != 0) symplectic_ok = false;
        }
    }
    checks["symplectic_orthogonality"] = symplectic_ok;

    bool mds = params.storage_code.is_mds() && params.query_code.is_mds() && star.is_mds();
    checks["mds"] = mds;

    report.pass = star_identity && weakly_self_dual && independence && symplectic_ok && mds;
    report.evidence = checks;
    return report;
}

AuditReport oracle_check(const SimulationConfig& config, size_t rounds) {
    EffectiveParams eff = derive_effective(config);
    const SchemeParams& params = eff.params;
    AuditReport report;
    report.kind = "oracle-check";
    report.info = params_json(eff, config);

    size_t executed = 0;
    double min_probability = 1.0;
    Rng rng(config.seed);
    size_t retrieval = 0;
    while (executed < rounds) {
        Matrix x = rng.uniform_matrix(params.m * params.beta, 2 * params.k, *params.field);
        StorageMatrix storage = encode_storage(x, params);
        size_t iota = retrieval % params.m;
        for (size_t r = 0; r < params.rho && executed < rounds; ++r) {
            RoundGeometry geom = round_geometry(params, r);
            RoundResult result = run_round(params, geom, storage, iota, rng, Backend::Both);
            min_probability = std::min(min_probability, result.oracle_probability);
            ++executed;
        }
        ++retrieval;
    }
    report.pass = min_probability >= 1.0 - 1e-9;
    report.evidence = Json{{"rounds", executed}, {"min_point_mass", min_probability}};
    return report;
}

AuditReport two_server_example(size_t files, uint64_t seed) {
    AuditReport report;
    report.kind = "two-server-example";
    report.info = Json{{"n", 2}, {"k", 1}, {"t", 1}, {"m", files}, {"field", Json{{"r", 1}}}};

    SimulationConfig config;
    config.n = 2;
    config.k = 1;
    config.t = 1;
    config.m = files;
    config.field_r = 1;
    config.seed = seed;
    config.backend = Backend::Both;

    EffectiveParams eff = derive_effective(config);
    bool pass = scheme_rate(eff.params) == Rational::make(1, 1);
    Json outcomes = Json::array();
    for (size_t iota = 1; iota <= files && pass; ++iota) {
        config.iota = iota;
        config.seed = mix_seed(seed, iota);
        Transcript transcript = run_simulation(config);
        if (!(transcript.decoded == transcript.stored_file)) pass = false;

        // The outcome's representative must be (m_X, 0 | m_Z, 0).
        const FieldSpec& fs = FieldSpec::get(1);
        StabilizerSpace space(eff.params.star_parity,
                              round_geometry(eff.params, 0).complement);
        Vec coeffs = vec_from_json(transcript.rounds[0]["outcome"], fs);
        Vec rep = space.representative(CosetLabel{coeffs});
        Vec expected{transcript.stored_file.at(0, 0), FieldElement(0, fs),
                     transcript.stored_file.at(0, 1), FieldElement(0, fs)};
        if (rep != expected) pass = false;
        outcomes.push_back(Json{{"iota", iota}, {"outcome", vec_to_json(rep)}});
    }
    report.pass = pass;
    report.evidence =
        Json{{"rate", scheme_rate(eff.params).str()}, {"outcome_representatives", outcomes}};
    return report;
}

std::vector<CapacityRow> capacity_rows(const std::vector<std::array<size_t, 3>>& grid) {
    if (grid.empty()) throw ParameterError("capacity grid must not be empty");
    std::vector<CapacityRow> rows;
    for (const auto& [n, k, t] : grid) {
        CapacityRow row;
        row.n = n;
        row.k = k;
        row.t = t;
        if (k == 1 && t == 1) row.storage_class = "replicated, no collusion";
        else if (k == 1) row.storage_class = "replicated, t-collusion";
        else if (t == 1) row.storage_class = "mds, no collusion";
        else row.storage_class = "mds, t-collusion";

        int64_t c = static_cast<int64_t>(n) - static_cast<int64_t>(k) -
                    static_cast<int64_t>(t) + 1;
        if (c <= 0) {
            row.pir = Rational::make(0, 1);
            row.spir = row.pir;
            row.qpir = row.pir;
            rows.push_back(row);
            continue;
        }
        row.pir = Rational::make(c, static_cast<int64_t>(n));
        row.spir = row.pir;
        row.qpir = (2 * c >= static_cast<int64_t>(n))
                       ? Rational::make(1, 1)
                       : Rational::make(2 * c, static_cast<int64_t>(n));

        try {
            auto [n_eff, t_eff] = pad_collusion(n, k, t);
            unsigned r = 1;
            while ((1u << r) < n_eff) ++r;
            SchemeParams params = derive_params(n_eff, k, t_eff, 2, FieldSpec::get(r));
            row.measured = scheme_rate(params);
            row.achievable = true;
            row.achieved = (row.measured == row.qpir);
        } catch (const Error&) {
            row.achievable = false;
        }
        rows.push_back(row);
    }
    return rows;
}

std::string format_capacity_table(const std::vector<CapacityRow>& rows) {
    std::string out =
        "  n  k  t  storage class             PIR     SPIR    QPIR    measured\n";
    for (const auto& row : rows) {
        char line[160];
        std::string measured = row.achievable
                                   ? row.measured.str() + (row.achieved ? " *" : " !")
                                   : "-";
        snprintf(line, sizeof(line), "%3zu %2zu %2zu  %-24s %-7s %-7s %-7s %s\n", row.n, row.k,
                 row.t, row.storage_class.c_str(), row.pir.str().c_str(), row.spir.str().c_str(),
                 row.qpir.str().c_str(), measured.c_str());
        out += line;
    }
    out += "  (* = this scheme attains the capacity entry)\n";
    return out;
}

Json capacity_rows_to_json(const std::vector<CapacityRow>& rows) {
    Json out = Json::array();
    for (const auto& row : rows) {
        Json j{{"n", row.n},
               {"k", row.k},
               {"t", row.t},
               {"storage_class", row.storage_class},
               {"pir", row.pir.str()},
               {"spir", row.spir.str()},
               {"qpir", row.qpir.str()},
               {"achievable", row.achievable}};
        if (row.achievable) {
            j["measured"] = row.measured.str();
            j["achieved"] = row.achieved;
        }
        out.push_back(j);
    }
    return out;
}

}  // namespace qpir
