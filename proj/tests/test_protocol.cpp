#include <sstream>

#include <doctest.h>

#include "pingpong/adversary.hpp"
#include "pingpong/protocol.hpp"
#include "pingpong/transcript.hpp"

using namespace pingpong;

namespace {

std::vector<BellIndex> random_message(int n, std::uint64_t seed) {
    RandomSource rng(seed);
    std::vector<BellIndex> msg;
    for (int i = 0; i < n; ++i) msg.push_back(static_cast<BellIndex>(rng.uniform_int(4)));
    return msg;
}

// Misbehaving non-rewriting strategy, used to prove the engine rejects it.
class RogueRewriter final : public Adversary {
public:
    std::optional<ClassicalMessage> on_classical(AdversaryContext&, const ClassicalMessage& msg,
                                                 Direction) override {
        ClassicalMessage forged = msg;
        forged.outcome_j ^= 1;
        return forged;
    }
};

}  // namespace

TEST_CASE("honest sessions decode perfectly") {
    for (std::uint64_t seed = 0; seed < 300; ++seed) {
        SessionConfig config;
        config.n_messages = 20;
        config.lambda_c = 0.3;
        config.seed = seed;
        auto message = random_message(config.n_messages, seed ^ 0xABC);
        auto eve = make_no_eve();
        SessionResult result = run_session(config, message, *eve);
        REQUIRE(!result.detected);
        REQUIRE(result.bob_decoded == message);
        // counters bookkeeping
        CHECK(result.counters.qubit_transmissions ==
              2 * result.counters.message_rounds + result.counters.control_rounds);
        CHECK(result.counters.classical_bits == 2 * config.n_messages);
    }
}

TEST_CASE("lambda_c = 0 never enters control mode") {
    SessionConfig config;
    config.n_messages = 40;
    config.lambda_c = 0.0;
    config.seed = 5;
    auto message = random_message(40, 99);
    auto eve = make_no_eve();
    SessionResult result = run_session(config, message, *eve);
    CHECK(result.counters.control_rounds == 0);
    CHECK(result.counters.message_rounds == 40);
}

TEST_CASE("a passed control round repeats the same symbol") {
    SessionConfig config;
    config.n_messages = 5;
    config.seed = 17;
    config.forced_control_schedule = std::vector<int>{0, 3};
    auto message = random_message(5, 3);
    auto eve = make_no_eve();
    SessionResult result = run_session(config, message, *eve);
    REQUIRE(!result.detected);

    REQUIRE(result.transcript.size() == 7);  // 5 message + 2 control rounds
    CHECK(result.transcript[0].mode == RoundMode::Control);
    CHECK(result.transcript[1].mode == RoundMode::Message);
    CHECK(result.transcript[0].msg_index == result.transcript[1].msg_index);
    CHECK(result.transcript[0].a_n == result.transcript[1].a_n);
    CHECK(result.transcript[3].mode == RoundMode::Control);
    CHECK(result.transcript[3].msg_index == result.transcript[4].msg_index);
}

TEST_CASE("input validation") {
    auto eve = make_no_eve();
    SessionConfig config;
    config.n_messages = 2;
    CHECK_THROWS_AS(run_session(config, {0, 4}, *eve), std::invalid_argument);
    CHECK_THROWS_AS(run_session(config, {0}, *eve), std::invalid_argument);
    config.lambda_c = 1.5;
    CHECK_THROWS_AS(run_session(config, {0, 1}, *eve), std::invalid_argument);
}

TEST_CASE("engine rejects classical tampering from non-rewriting strategies") {
    SessionConfig config;
    config.n_messages = 3;
    config.lambda_c = 1.0;
    config.seed = 9;
    RogueRewriter rogue;
    CHECK_THROWS_AS(run_session(config, {0, 1, 2}, rogue), std::logic_error);
}

TEST_CASE("strong mitm requires the rewriting opt-in") {
    SessionConfig config;
    config.n_messages = 2;
    config.seed = 1;
    auto eve = make_strong_mitm();
    CHECK_THROWS_AS(run_session(config, {0, 1}, *eve), std::invalid_argument);
    config.allow_channel_rewriting = true;
    CHECK_NOTHROW(run_session(config, {0, 1}, *eve));
}

TEST_CASE("paper-literal rule flags an honest control round on (Psi1, B1)") {
    SessionConfig config;
    config.n_messages = 1;
    config.rule_mode = RuleMode::PaperLiteral;
    config.seed = 2;
    config.forced_control_schedule = std::vector<int>{0};
    config.forced_control_basis = Basis::B1;
    auto eve = make_no_eve();
    SessionResult result = run_session(config, {1}, *eve);
    REQUIRE(result.detected);
    REQUIRE(result.transcript.size() == 1);
    CHECK(!result.transcript[0].control->verdict_pass);

    // same round under the physical rule is fine
    config.rule_mode = RuleMode::PhysicallyCorrect;
    SessionResult ok = run_session(config, {1}, *eve);
    CHECK(!ok.detected);
}

TEST_CASE("restart policy retries after detection and honors the cap") {
    SessionConfig config;
    config.n_messages = 4;
    config.lambda_c = 0.5;
    config.detection_policy = DetectionPolicy::Restart;
    config.max_restarts = 3;
    auto message = random_message(4, 7);

    int completed = 0, capped = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        config.seed = seed;
        auto eve = make_intercept_resend();
        SessionResult result = run_session(config, message, *eve);
        CHECK(result.restarts <= config.max_restarts + 1);
        if (result.restart_cap_exceeded) {
            CHECK(result.detected);
            ++capped;
        } else if (!result.detected) {
            CHECK(result.bob_decoded.size() == 4);
            ++completed;
        }
    }
    CHECK(completed > 0);
    CHECK(capped > 0);
}

TEST_CASE("transcript roundtrip and replay") {
    SessionConfig config;
    config.n_messages = 10;
    config.lambda_c = 0.4;
    config.seed = 1234;
    auto message = random_message(10, 55);
    auto eve = make_intercept_resend();
    SessionResult result = run_session(config, message, *eve);

    std::stringstream buffer;
    write_transcript(buffer, config, AttackKind::InterceptResend, message, result);

    TranscriptFile recorded = read_transcript(buffer);
    CHECK(recorded.message == message);
    CHECK(recorded.rounds.size() == result.transcript.size());

    ReplayResult replay = replay_transcript(recorded);
    CHECK(replay.identical);

    // tamper with one recorded outcome
    TranscriptFile edited = recorded;
    for (auto& round : edited.rounds) {
        if (round.mode == RoundMode::Message) {
            *round.f_n = (*round.f_n + 1) % 4;
            break;
        }
    }
    ReplayResult mismatch = replay_transcript(edited);
    CHECK(!mismatch.identical);
    CHECK(mismatch.first_divergent_round >= 0);

    // different seed diverges too
    TranscriptFile reseeded = recorded;
    reseeded.config.seed += 1;
    CHECK(!replay_transcript(reseeded).identical);
}

TEST_CASE("truncated and malformed transcripts are rejected") {
    std::stringstream empty("");
    CHECK_THROWS_AS(read_transcript(empty), std::runtime_error);
    std::stringstream junk("{\"type\":\"nonsense\"}\n");
    CHECK_THROWS_AS(read_transcript(junk), std::runtime_error);
}
