#include "pingpong/verify.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "pingpong/adversary.hpp"
#include "pingpong/coding.hpp"
#include "pingpong/harness.hpp"
#include "pingpong/protocol.hpp"
#include "pingpong/quantum.hpp"
#include "pingpong/transcript.hpp"

namespace pingpong {

namespace {

constexpr std::uint64_t kSuiteSeed = 0x5D4A9C33B17Eull;

long long scaled(long long n, double scale) {
    return std::max<long long>(1, static_cast<long long>(std::llround(static_cast<double>(n) * scale)));
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

// 1. transform(a,b) agrees with the state-vector route for all 16 pairs.
CriterionResult check_transform_oracle(const VerifyOptions& opt) {
    CriterionResult r{1, "transform-table state-vector oracle", true, ""};
    RandomSource rng(kSuiteSeed);
    for (BellIndex a = 0; a < 4; ++a) {
        for (PauliIndex b = 0; b < 4; ++b) {
            QubitId home{0}, travel{1};
            QuantumSystem sys = bell_state(a, home, travel);
            sys.apply_pauli(travel, b);
            BellIndex expected = transform(a, b);
            if (opt.inject_table_fault && a == 0 && b == 2) expected ^= 1;
            QuantumSystem target = bell_state(expected, home, travel);
            double overlap = overlap_magnitude(target, sys);
            if (std::abs(overlap - 1.0) > 1e-12) {
                r.pass = false;
                r.detail = "mismatch at (a=" + std::to_string(a) + ", b=" + std::to_string(b) +
                           "), overlap " + fmt(overlap);
                return r;
            }
        }
    }
    r.detail = "all 16 (a,b) pairs agree within 1e-12";
    return r;
}

// 2. Honest end-to-end sessions: zero detections, perfect decoding.
CriterionResult check_honest_end_to_end(const VerifyOptions& opt) {
    CriterionResult r{2, "honest end-to-end sessions", false, ""};
    ExperimentSpec spec;
    spec.trials = scaled(10000, opt.scale);
    spec.attack = AttackKind::NoEve;
    spec.workers = opt.workers;
    spec.session_config.n_messages = 50;
    spec.session_config.lambda_c = 0.3;
    spec.session_config.seed = kSuiteSeed + 2;
    SummaryStats s = run_experiment(spec);
    r.pass = s.detected_sessions == 0 && s.bob_symbol_error_rate == 0.0 &&
             s.undetected_sessions == spec.trials;
    r.detail = std::to_string(s.detected_sessions) + " detections, symbol error rate " +
               fmt(s.bob_symbol_error_rate) + " over " + std::to_string(spec.trials) + " sessions";
    return r;
}

// 3. Travel-qubit marginal is the complete mixture for all Bell and
//    post-encoding states.
CriterionResult check_reduced_density(const VerifyOptions&) {
    CriterionResult r{3, "travel-qubit reduced state is I/2", true, ""};
    for (BellIndex a = 0; a < 4; ++a) {
        for (PauliIndex b = 0; b < 4; ++b) {
            QubitId home{0}, travel{1};
            QuantumSystem sys = bell_state(a, home, travel);
            if (b != 0) sys.apply_pauli(travel, b);
            DensityMatrix2 rho = sys.reduced_density(travel);
            double err = std::abs(rho(0, 0) - Amplitude{0.5, 0.0}) +
                         std::abs(rho(1, 1) - Amplitude{0.5, 0.0}) + std::abs(rho(0, 1)) +
                         std::abs(rho(1, 0));
            if (err > 4e-12) {
                r.pass = false;
                r.detail = "deviation " + fmt(err) + " at (a=" + std::to_string(a) +
                           ", b=" + std::to_string(b) + ")";
                return r;
            }
        }
    }
    r.detail = "all 4 Bell states and 16 encoded states within 1e-12";
    return r;
}

// 4. Intercept-resend detection rate 1/4, with its basis factorization.
CriterionResult check_intercept_resend_detection(const VerifyOptions& opt) {
    CriterionResult r{4, "intercept-resend detection rate", false, ""};
    double widen = 1.0 / std::sqrt(opt.scale);

    ExperimentSpec spec;
    spec.trials = scaled(30000, opt.scale);
    spec.attack = AttackKind::InterceptResend;
    spec.workers = opt.workers;
    spec.session_config.n_messages = 50;
    spec.session_config.lambda_c = 0.5;
    spec.session_config.seed = kSuiteSeed + 4;
    SummaryStats s = run_experiment(spec);

    bool rate_ok = std::abs(s.detection_rate_per_control - 0.25) <= 0.01 * widen;
    bool volume_ok = opt.scale < 1.0 || s.control_rounds_total >= 100000;

    // Equal bases: Eve and Bob both pinned to B0.
    ExperimentSpec eq = spec;
    eq.trials = scaled(4000, opt.scale);
    eq.intercept_options.basis_policy = InterceptResendOptions::BasisPolicy::FixedB0;
    eq.session_config.forced_control_basis = Basis::B0;
    eq.session_config.seed = kSuiteSeed + 5;
    SummaryStats se = run_experiment(eq);

    // Unequal bases: Eve pinned to B0, Bob to B1.
    ExperimentSpec ne = eq;
    ne.session_config.forced_control_basis = Basis::B1;
    ne.session_config.seed = kSuiteSeed + 6;
    SummaryStats sn = run_experiment(ne);

    bool equal_ok = se.detections == 0;
    bool unequal_ok = std::abs(sn.detection_rate_per_control - 0.5) <= 0.02 * widen;

    r.pass = rate_ok && volume_ok && equal_ok && unequal_ok;
    r.detail = "rate " + fmt(s.detection_rate_per_control) + " over " +
               std::to_string(s.control_rounds_total) + " control rounds; equal-bases detections " +
               std::to_string(se.detections) + "; unequal-bases rate " +
               fmt(sn.detection_rate_per_control);
    return r;
}

// 5. Survival law (3/4)^{N_c}, point value at N_c=16 plus log-linear fit.
CriterionResult check_survival_law(const VerifyOptions& opt) {
    CriterionResult r{5, "survival law (3/4)^Nc", false, ""};
    double widen = 1.0 / std::sqrt(opt.scale);

    ExperimentSpec spec;
    spec.trials = scaled(1000000, opt.scale);
    spec.attack = AttackKind::InterceptResend;
    spec.workers = opt.workers;
    spec.session_config.n_messages = 2;
    spec.session_config.seed = kSuiteSeed + 7;
    std::vector<int> schedule(16);
    for (int i = 0; i < 16; ++i) schedule[static_cast<std::size_t>(i)] = i;
    spec.session_config.forced_control_schedule = schedule;
    SummaryStats s = run_experiment(spec);
    double fraction =
        static_cast<double>(s.undetected_sessions) / static_cast<double>(s.trials);
    double expected = std::pow(0.75, 16);
    bool point_ok = std::abs(fraction - expected) <= 0.003 * widen;

    auto curve = survival_curve(AttackKind::InterceptResend, 0.0, 16,
                                scaled(200000, opt.scale), kSuiteSeed + 8, opt.workers);
    std::vector<std::pair<double, double>> pts;
    for (const auto& [nc, frac] : curve)
        if (frac > 0.0) pts.emplace_back(static_cast<double>(nc), std::log(frac));
    LinearFit fit = fit_line(pts);
    bool fit_ok = fit.r_squared > 0.99 && std::abs(fit.slope - std::log(0.75)) < 0.02 * widen;

    r.pass = point_ok && fit_ok;
    r.detail = "Nc=16 fraction " + fmt(fraction) + " (expect " + fmt(expected) + "); slope " +
               fmt(fit.slope) + " (expect " + fmt(std::log(0.75)) + "), R^2 " + fmt(fit.r_squared);
    return r;
}

// 6. Weak MITM: invisible without control rounds, detected at 1/2 with them.
CriterionResult check_weak_mitm(const VerifyOptions& opt) {
    CriterionResult r{6, "weak man-in-the-middle", false, ""};
    double widen = 1.0 / std::sqrt(opt.scale);

    ExperimentSpec quiet;
    quiet.trials = scaled(200, opt.scale);
    quiet.attack = AttackKind::WeakMitm;
    quiet.workers = opt.workers;
    quiet.session_config.n_messages = 50;
    quiet.session_config.lambda_c = 0.0;
    quiet.session_config.seed = kSuiteSeed + 9;
    SummaryStats sq = run_experiment(quiet);
    bool quiet_ok = sq.detected_sessions == 0 && sq.eve_b_pairclass_accuracy == 1.0 &&
                    sq.eve_a_recovery_accuracy == 1.0 && sq.bob_symbol_error_rate == 0.0;

    ExperimentSpec loud = quiet;
    loud.trials = scaled(50000, opt.scale);
    loud.session_config.lambda_c = 0.5;
    loud.session_config.seed = kSuiteSeed + 10;
    SummaryStats sl = run_experiment(loud);
    bool loud_ok = std::abs(sl.detection_rate_per_control - 0.5) <= 0.01 * widen;

    r.pass = quiet_ok && loud_ok;
    r.detail = "lambda_c=0: detections " + std::to_string(sq.detected_sessions) + ", eve b acc " +
               fmt(sq.eve_b_pairclass_accuracy) + ", eve a acc " + fmt(sq.eve_a_recovery_accuracy) +
               ", bob errors " + fmt(sq.bob_symbol_error_rate) + "; control detection rate " +
               fmt(sl.detection_rate_per_control) + " over " +
               std::to_string(sl.control_rounds_total) + " rounds";
    return r;
}

// 7. Strong MITM: never detected, full recovery on both sides.
CriterionResult check_strong_mitm(const VerifyOptions& opt) {
    CriterionResult r{7, "strong man-in-the-middle", false, ""};
    ExperimentSpec spec;
    spec.trials = scaled(10000, opt.scale);
    spec.attack = AttackKind::StrongMitm;
    spec.workers = opt.workers;
    spec.session_config.n_messages = 20;
    spec.session_config.lambda_c = 0.3;
    spec.session_config.seed = kSuiteSeed + 11;
    SummaryStats s = run_experiment(spec);
    r.pass = s.detected_sessions == 0 && s.eve_b_pairclass_accuracy == 1.0 &&
             s.eve_a_recovery_accuracy == 1.0 && s.bob_symbol_error_rate == 0.0;
    r.detail = std::to_string(s.detected_sessions) + " detections over " +
               std::to_string(s.trials) + " sessions (" + std::to_string(s.control_rounds_total) +
               " control rounds); eve a acc " + fmt(s.eve_a_recovery_accuracy);
    return r;
}

// 8. Published finals act as a one-time pad: uniform per symbol, ~zero MI.
CriterionResult check_one_time_pad(const VerifyOptions& opt) {
    CriterionResult r{8, "one-time-pad property of final states", false, ""};
    ExperimentSpec spec;
    spec.trials = scaled(2000, opt.scale);
    spec.attack = AttackKind::NoEve;
    spec.workers = opt.workers;
    spec.session_config.n_messages = 50;
    spec.session_config.lambda_c = 0.0;
    spec.session_config.seed = kSuiteSeed + 12;
    SummaryStats s = run_experiment(spec);

    bool chi_ok = true;
    double worst_p = 1.0;
    for (int a = 0; a < 4; ++a) {
        double p = chi_square_pvalue(s.chi2_f_uniformity[a], 3);
        worst_p = std::min(worst_p, p);
        if (p <= 0.001) chi_ok = false;
    }
    bool mi_ok = s.mi_a_f < 0.01;
    r.pass = chi_ok && mi_ok;
    r.detail = "MI " + fmt(s.mi_a_f) + " bits over " + std::to_string(s.mi_pairs) +
               " pairs; worst chi-square p " + fmt(worst_p);
    return r;
}

// 9. Rates of a pure message session.
CriterionResult check_rates(const VerifyOptions&) {
    CriterionResult r{9, "transmission rates rq=1, rtot=1/2", false, ""};
    ExperimentSpec spec;
    spec.trials = 1;
    spec.attack = AttackKind::NoEve;
    spec.session_config.n_messages = 100;
    spec.session_config.lambda_c = 0.0;
    spec.session_config.seed = kSuiteSeed + 13;
    SummaryStats s = run_experiment(spec);
    r.pass = s.rq == 1.0 && s.rtot == 0.5;
    r.detail = "rq " + fmt(s.rq) + ", rtot " + fmt(s.rtot);
    return r;
}

// 10. Intercept-resend learns exactly one bit of b per message round.
CriterionResult check_eve_one_bit(const VerifyOptions& opt) {
    CriterionResult r{10, "intercept-resend pair-class accuracy", false, ""};
    ExperimentSpec spec;
    spec.trials = scaled(200, opt.scale);
    spec.attack = AttackKind::InterceptResend;
    spec.workers = opt.workers;
    spec.session_config.n_messages = 50;
    spec.session_config.lambda_c = 0.0;
    spec.session_config.seed = kSuiteSeed + 14;
    SummaryStats s = run_experiment(spec);
    r.pass = s.eve_b_pairclass_accuracy == 1.0;
    r.detail = "pair-class accuracy " + fmt(s.eve_b_pairclass_accuracy);
    return r;
}

// 11. The literal control rule false-positives exactly on (Psi1,B1) and
//     (Psi2,B1) in honest sessions.
CriterionResult check_paper_literal_false_positives(const VerifyOptions& opt) {
    CriterionResult r{11, "literal-rule false positives", false, ""};
    long long sessions = scaled(2000, opt.scale);
    long long bad_rounds = 0, bad_failed = 0, good_failed = 0, good_rounds = 0;
    for (long long t = 0; t < sessions; ++t) {
        SessionConfig config;
        config.n_messages = 20;
        config.lambda_c = 0.5;
        config.rule_mode = RuleMode::PaperLiteral;
        config.seed = derive_trial_seed(kSuiteSeed + 15, t);
        RandomSource msg_rng(config.seed ^ 0x1234);
        std::vector<BellIndex> message;
        for (int i = 0; i < config.n_messages; ++i)
            message.push_back(static_cast<BellIndex>(msg_rng.uniform_int(4)));
        auto eve = make_no_eve();
        SessionResult result = run_session(config, message, *eve);
        for (const RoundRecord& rec : result.transcript) {
            if (rec.mode != RoundMode::Control || !rec.control) continue;
            bool flagged_combo =
                (rec.a_n == 1 || rec.a_n == 2) && rec.control->basis == Basis::B1;
            if (flagged_combo) {
                ++bad_rounds;
                if (!rec.control->verdict_pass) ++bad_failed;
            } else {
                ++good_rounds;
                if (!rec.control->verdict_pass) ++good_failed;
            }
        }
    }
    r.pass = bad_rounds > 0 && bad_failed == bad_rounds && good_failed == 0;
    r.detail = std::to_string(bad_failed) + "/" + std::to_string(bad_rounds) +
               " flagged on (Psi1|Psi2, B1); " + std::to_string(good_failed) + "/" +
               std::to_string(good_rounds) + " false alarms elsewhere";
    return r;
}

// 12. Bit-exact replay and worker-count independence.
CriterionResult check_determinism(const VerifyOptions& opt) {
    CriterionResult r{12, "determinism and replay", false, ""};

    bool replay_ok = true;
    for (AttackKind kind : {AttackKind::NoEve, AttackKind::InterceptResend, AttackKind::WeakMitm,
                            AttackKind::StrongMitm}) {
        SessionConfig config;
        config.n_messages = 30;
        config.lambda_c = 0.3;
        config.seed = kSuiteSeed + 16 + static_cast<std::uint64_t>(kind);
        config.allow_channel_rewriting = kind == AttackKind::StrongMitm;
        RandomSource msg_rng(config.seed ^ 0x77);
        std::vector<BellIndex> message;
        for (int i = 0; i < config.n_messages; ++i)
            message.push_back(static_cast<BellIndex>(msg_rng.uniform_int(4)));
        auto eve = make_adversary(kind);
        SessionResult result = run_session(config, message, *eve);

        std::stringstream buffer;
        write_transcript(buffer, config, kind, message, result);
        TranscriptFile recorded = read_transcript(buffer);
        ReplayResult replay = replay_transcript(recorded);
        if (!replay.identical) replay_ok = false;
    }

    ExperimentSpec spec;
    spec.trials = scaled(5000, opt.scale);
    spec.attack = AttackKind::InterceptResend;
    spec.session_config.n_messages = 20;
    spec.session_config.lambda_c = 0.5;
    spec.session_config.seed = kSuiteSeed + 20;
    spec.workers = 1;
    SummaryStats one = run_experiment(spec);
    spec.workers = 8;
    SummaryStats eight = run_experiment(spec);
    bool parallel_ok =
        one.detections == eight.detections && one.control_rounds_total == eight.control_rounds_total &&
        one.detection_rate_per_control == eight.detection_rate_per_control &&
        one.mi_a_f == eight.mi_a_f && one.rq == eight.rq && one.rtot == eight.rtot &&
        one.bob_symbol_error_rate == eight.bob_symbol_error_rate &&
        one.eve_b_pairclass_accuracy == eight.eve_b_pairclass_accuracy &&
        one.survival_by_ncontrol.size() == eight.survival_by_ncontrol.size();

    r.pass = replay_ok && parallel_ok;
    r.detail = std::string("replay ") + (replay_ok ? "identical" : "diverged") +
               "; 1 vs 8 workers " + (parallel_ok ? "identical" : "differ");
    return r;
}

}  // namespace

std::vector<CriterionResult> run_acceptance(const VerifyOptions& options) {
    std::vector<CriterionResult> results;
    results.push_back(check_transform_oracle(options));
    results.push_back(check_honest_end_to_end(options));
    results.push_back(check_reduced_density(options));
    results.push_back(check_intercept_resend_detection(options));
    results.push_back(check_survival_law(options));
    results.push_back(check_weak_mitm(options));
    results.push_back(check_strong_mitm(options));
    results.push_back(check_one_time_pad(options));
    results.push_back(check_rates(options));
    results.push_back(check_eve_one_bit(options));
    results.push_back(check_paper_literal_false_positives(options));
    results.push_back(check_determinism(options));
    return results;
}

}  // namespace pingpong
