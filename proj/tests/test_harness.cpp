#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qpir/harness.hpp"

using namespace qpir;

namespace {

SimulationConfig small_config() {
    SimulationConfig config;
    config.n = 4;
    config.k = 1;
    config.t = 2;
    config.m = 2;
    config.field_r = 2;
    config.seed = 1234;
    config.backend = Backend::Fast;
    config.iota = 1;
    return config;
}

}  // namespace

TEST_CASE("config serialization round trip") {
    SimulationConfig config = small_config();
    SimulationConfig parsed = SimulationConfig::from_json(config.to_json());
    CHECK(parsed.to_json() == config.to_json());
    CHECK(&parsed.field() == &FieldSpec::get(2));

    Json bad = config.to_json();
    bad.erase("seed");
    CHECK_THROWS_AS(SimulationConfig::from_json(bad), ConfigError);
}

TEST_CASE("simulation decodes the stored file and replays bit-exactly") {
    SimulationConfig config = small_config();
    Transcript first = run_simulation(config);
    CHECK(first.decoded == first.stored_file);
    CHECK(first.rounds.size() == 1);
    CHECK(first.downloaded_systems == 4);

    Transcript second = run_simulation(config);
    CHECK(first.to_json().dump() == second.to_json().dump());

    // A different seed moves the queries.
    config.seed = 99;
    Transcript third = run_simulation(config);
    CHECK(first.to_json().dump() != third.to_json().dump());
    CHECK(third.decoded == third.stored_file);
}

TEST_CASE("transcript carries the documented fields") {
    Transcript transcript = run_simulation(small_config());
    Json j = transcript.to_json();
    CHECK(j.contains("params"));
    CHECK(j.contains("seed"));
    CHECK(j.contains("iota"));
    CHECK(j.contains("rounds"));
    CHECK(j.contains("decoded"));
    const Json& round = j["rounds"][0];
    CHECK(round.contains("r"));
    CHECK(round["queries"].size() == 4);
    CHECK(round["responses"].size() == 4);
    CHECK(round["outcome"].size() == 2 * 2);  // 2c
}

TEST_CASE("threading flag does not change the transcript") {
    SimulationConfig config = small_config();
    config.single_thread = true;
    Transcript sequential = run_simulation(config);
    config.single_thread = false;
    Transcript parallel = run_simulation(config);
    // The flag is not part of the serialized record.
    sequential.params = parallel.params;
    CHECK(sequential.to_json().dump() == parallel.to_json().dump());
}

TEST_CASE("actor isolation holds on the message log") {
    Transcript transcript = run_simulation(small_config());
    CHECK(check_actor_isolation(transcript, 4));
    // A server-to-server message breaks it.
    transcript.messages.push_back({"server1", "server2", "query", Json::object()});
    CHECK_FALSE(check_actor_isolation(transcript, 4));
}

TEST_CASE("collusion padding is applied and recorded") {
    SimulationConfig config = small_config();
    config.n = 8;
    config.k = 1;
    config.t = 1;
    config.field_r = 3;
    Transcript transcript = run_simulation(config);
    CHECK(transcript.params["t"] == 4);
    CHECK(transcript.params["padded_from"]["t"] == 1);
    CHECK(transcript.decoded == transcript.stored_file);
}

TEST_CASE("oracle certification over a full simulation") {
    SimulationConfig config = small_config();
    config.backend = Backend::Both;
    Transcript transcript = run_simulation(config);
    CHECK(transcript.decoded == transcript.stored_file);
}

TEST_CASE("algebraic privacy audit") {
    SimulationConfig config = small_config();
    AuditReport all = audit_user_privacy(config, {}, 0);
    CHECK(all.pass);
    CHECK(all.evidence["subsets_checked"] == 6);  // C(4,2)
    CHECK(all.evidence["min_rank"] == 2);

    AuditReport one = audit_user_privacy(config, {1, 3}, 0);
    CHECK(one.pass);

    CHECK_THROWS_AS(audit_user_privacy(config, {1, 2, 3}, 0), ParameterError);
}

TEST_CASE("empirical privacy audit stays under the threshold") {
    SimulationConfig config = small_config();
    AuditReport report = audit_user_privacy(config, {}, 2000);
    CHECK(report.pass);
    double tv = report.evidence["empirical"]["tv_distance"].get<double>();
    double threshold = report.evidence["empirical"]["threshold"].get<double>();
    CHECK(tv < threshold);
}

TEST_CASE("server secrecy audit") {
    SimulationConfig config = small_config();
    AuditReport report = audit_server_secrecy(config, 50, false);
    CHECK(report.pass);
    CHECK(report.evidence["label_mismatches"] == 0);

    SUBCASE("vacuous with one file") {
        config.m = 1;
        AuditReport single = audit_server_secrecy(config, 50, false);
        CHECK(single.pass);
    }

    SUBCASE("fault injection is caught") {
        AuditReport corrupted = audit_server_secrecy(config, 50, true);
        CHECK_FALSE(corrupted.pass);
        CHECK(corrupted.evidence["label_mismatches"].get<size_t>() > 0);
    }
}

TEST_CASE("code verification audit") {
    SimulationConfig config = small_config();
    AuditReport report = verify_codes(config, false);
    CHECK(report.pass);
    for (const auto& [name, ok] : report.evidence.items()) CHECK(ok.get<bool>());

    AuditReport corrupted = verify_codes(config, true);
    CHECK_FALSE(corrupted.pass);
    CHECK_FALSE(corrupted.evidence["weak_self_duality"].get<bool>());

    SimulationConfig wide = small_config();
    wide.n = 5;
    wide.k = 2;
    wide.t = 2;
    wide.field_r = 3;
    CHECK(verify_codes(wide, false).pass);
}

TEST_CASE("two-server example") {
    AuditReport report = two_server_example(3, 7);
    CHECK(report.pass);
    CHECK(report.evidence["rate"] == "1");
    CHECK(report.evidence["outcome_representatives"].size() == 3);
}

TEST_CASE("capacity rows") {
    auto rows = capacity_rows({{4, 1, 2}, {4, 2, 1}, {2, 1, 1}, {6, 3, 2}});
    CHECK(rows[0].pir == Rational::make(1, 2));
    CHECK(rows[0].qpir == Rational::make(1, 1));
    CHECK(rows[0].achieved);
    CHECK(rows[1].qpir == Rational::make(1, 1));  // 2(n-k)/n at (4,2,1)
    CHECK(rows[1].storage_class == "mds, no collusion");
    CHECK(rows[2].qpir == Rational::make(1, 1));  // replicated, no collusion
    CHECK(rows[2].achieved);
    CHECK(rows[3].qpir == Rational::make(2, 3));
    CHECK(rows[3].achieved);
    CHECK_THROWS_AS(capacity_rows({}), ParameterError);
    CHECK(format_capacity_table(rows).find('*') != std::string::npos);
}
