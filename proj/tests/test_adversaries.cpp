#include <cmath>

#include <doctest.h>

#include "pingpong/adversary.hpp"
#include "pingpong/protocol.hpp"

using namespace pingpong;

namespace {

std::vector<BellIndex> random_message(int n, std::uint64_t seed) {
    RandomSource rng(seed);
    std::vector<BellIndex> msg;
    for (int i = 0; i < n; ++i) msg.push_back(static_cast<BellIndex>(rng.uniform_int(4)));
    return msg;
}

// Checks what the wire actually carries: the forwarded qubit's marginal.
class MarginalProbe final : public Adversary {
public:
    double worst_deviation = 0.0;

    QubitId on_forward(AdversaryContext& ctx, QubitId travel) override {
        DensityMatrix2 rho = ctx.reg.reduced_density(travel);
        double dev = std::abs(rho(0, 0) - Amplitude{0.5, 0.0}) +
                     std::abs(rho(1, 1) - Amplitude{0.5, 0.0}) + std::abs(rho(0, 1)) +
                     std::abs(rho(1, 0));
        worst_deviation = std::max(worst_deviation, dev);
        return travel;
    }
};

}  // namespace

TEST_CASE("no-eve baseline leaves no trace") {
    SessionConfig config;
    config.n_messages = 30;
    config.lambda_c = 0.4;
    config.seed = 100;
    auto message = random_message(30, 1);
    auto eve = make_no_eve();
    SessionResult result = run_session(config, message, *eve);
    CHECK(!result.detected);
    CHECK(result.bob_decoded == message);
    for (const auto& round : result.transcript) CHECK(round.eve_events.empty());
}

TEST_CASE("the travel qubit carries no information about a") {
    // Honest Alice's forwarded qubit is the complete mixture for every a.
    for (BellIndex symbol = 0; symbol < 4; ++symbol) {
        SessionConfig config;
        config.n_messages = 1;
        config.seed = 7 + static_cast<std::uint64_t>(symbol);
        MarginalProbe probe;
        run_session(config, {symbol}, probe);
        CHECK(probe.worst_deviation < 1e-12);
    }
}

TEST_CASE("intercept-resend learns the pair class of every b") {
    SessionConfig config;
    config.n_messages = 50;
    config.lambda_c = 0.0;
    long long guesses = 0;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        config.seed = seed;
        auto message = random_message(50, seed ^ 0x55);
        auto eve = make_intercept_resend();
        SessionResult result = run_session(config, message, *eve);
        CHECK(result.eve_report.b_pairclass_accuracy == 1.0);
        guesses += result.eve_report.b_guesses;
    }
    CHECK(guesses == 50 * 50);
}

TEST_CASE("intercept-resend disturbs the message") {
    SessionConfig config;
    config.n_messages = 50;
    config.lambda_c = 0.0;
    long long errors = 0, symbols = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        config.seed = seed;
        auto message = random_message(50, seed ^ 0x99);
        auto eve = make_intercept_resend();
        SessionResult result = run_session(config, message, *eve);
        symbols += static_cast<long long>(result.bob_decoded.size());
        for (std::size_t i = 0; i < result.bob_decoded.size(); ++i)
            if (result.bob_decoded[i] != message[i]) ++errors;
    }
    CHECK(errors > 0);
    // Eve's measurement leaves half the rounds decoding to a wrong symbol.
    double rate = static_cast<double>(errors) / static_cast<double>(symbols);
    CHECK(rate > 0.3);
}

TEST_CASE("intercept-resend detection factorizes over the basis match") {
    auto run_with_bases = [](InterceptResendOptions::BasisPolicy policy, Basis bob_basis,
                             std::uint64_t seed) {
        SessionConfig config;
        config.n_messages = 5;
        config.forced_control_schedule = std::vector<int>{0};
        config.forced_control_basis = bob_basis;
        long long failures = 0, controls = 0;
        for (std::uint64_t t = 0; t < 4000; ++t) {
            config.seed = seed + t;
            auto message = random_message(5, t);
            InterceptResendOptions opts;
            opts.basis_policy = policy;
            auto eve = make_intercept_resend(opts);
            SessionResult result = run_session(config, message, *eve);
            for (const auto& round : result.transcript) {
                if (round.mode == RoundMode::Control) {
                    ++controls;
                    if (!round.control->verdict_pass) ++failures;
                }
            }
        }
        return std::pair<long long, long long>{failures, controls};
    };

    auto [eq_failures, eq_controls] =
        run_with_bases(InterceptResendOptions::BasisPolicy::FixedB0, Basis::B0, 1000);
    CHECK(eq_controls == 4000);
    CHECK(eq_failures == 0);

    auto [ne_failures, ne_controls] =
        run_with_bases(InterceptResendOptions::BasisPolicy::FixedB0, Basis::B1, 2000);
    double rate = static_cast<double>(ne_failures) / static_cast<double>(ne_controls);
    CHECK(std::abs(rate - 0.5) < 0.03);
}

TEST_CASE("weak mitm is invisible without control rounds") {
    SessionConfig config;
    config.n_messages = 40;
    config.lambda_c = 0.0;
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        config.seed = seed;
        auto message = random_message(40, seed ^ 0x77);
        auto eve = make_weak_mitm();
        SessionResult result = run_session(config, message, *eve);
        REQUIRE(!result.detected);
        CHECK(result.bob_decoded == message);
        CHECK(result.eve_report.b_pairclass_accuracy == 1.0);
        CHECK(result.eve_report.a_recovery_accuracy == 1.0);
        // her guesses are the actual plaintext
        for (std::size_t i = 0; i < message.size(); ++i)
            CHECK(*result.eve_report.guessed_a[i] == message[i]);
    }
}

TEST_CASE("weak mitm control-round detection is one half") {
    SessionConfig config;
    config.n_messages = 3;
    config.forced_control_schedule = std::vector<int>{0};
    long long failures = 0, controls = 0;
    for (std::uint64_t t = 0; t < 20000; ++t) {
        config.seed = t;
        auto message = random_message(3, t);
        auto eve = make_weak_mitm();
        SessionResult result = run_session(config, message, *eve);
        for (const auto& round : result.transcript) {
            if (round.mode == RoundMode::Control) {
                ++controls;
                if (!round.control->verdict_pass) ++failures;
            }
        }
    }
    double rate = static_cast<double>(failures) / static_cast<double>(controls);
    CHECK(std::abs(rate - 0.5) < 0.015);
}

TEST_CASE("strong mitm defeats the control mode entirely") {
    SessionConfig config;
    config.n_messages = 20;
    config.lambda_c = 0.5;
    config.allow_channel_rewriting = true;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        config.seed = seed;
        auto message = random_message(20, seed ^ 0x31);
        auto eve = make_strong_mitm();
        SessionResult result = run_session(config, message, *eve);
        REQUIRE(!result.detected);
        CHECK(result.bob_decoded == message);
        CHECK(result.eve_report.a_recovery_accuracy == 1.0);
        CHECK(result.eve_report.b_pairclass_accuracy == 1.0);
    }
}

TEST_CASE("attack names round-trip") {
    for (AttackKind kind : {AttackKind::NoEve, AttackKind::InterceptResend, AttackKind::WeakMitm,
                            AttackKind::StrongMitm})
        CHECK(attack_from_name(attack_name(kind)) == kind);
    CHECK(!attack_from_name("quantum-hacker").has_value());
}
