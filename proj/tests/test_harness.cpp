#include <cmath>
#include <set>

#include <doctest.h>

#include "pingpong/harness.hpp"

using namespace pingpong;

TEST_CASE("trial seed derivation is deterministic and well spread") {
    std::set<std::uint64_t> seen;
    for (long long i = 0; i < 10000; ++i) {
        std::uint64_t s = derive_trial_seed(42, i);
        CHECK(s == derive_trial_seed(42, i));
        seen.insert(s);
    }
    CHECK(seen.size() == 10000);
    CHECK(derive_trial_seed(42, 0) != derive_trial_seed(43, 0));
}

TEST_CASE("mutual information estimator") {
    RandomSource rng(3);

    std::vector<std::pair<BellIndex, BellIndex>> independent;
    for (int i = 0; i < 100000; ++i)
        independent.emplace_back(static_cast<int>(rng.uniform_int(4)),
                                 static_cast<int>(rng.uniform_int(4)));
    CHECK(estimate_mutual_information(independent) < 0.01);

    std::vector<std::pair<BellIndex, BellIndex>> coupled;
    for (int i = 0; i < 100000; ++i) {
        int a = static_cast<int>(rng.uniform_int(4));
        coupled.emplace_back(a, a);  // b_n = 0 always, so f = a
    }
    CHECK(estimate_mutual_information(coupled) == doctest::Approx(2.0).epsilon(1e-3));

    std::vector<std::pair<BellIndex, BellIndex>> tiny(10, {0, 0});
    CHECK_THROWS_AS(estimate_mutual_information(tiny), std::invalid_argument);
}

TEST_CASE("chi-square helpers") {
    CHECK(chi_square_uniform({25, 25, 25, 25}) == 0.0);
    CHECK(chi_square_uniform({100, 0, 0, 0}) == doctest::Approx(300.0));
    CHECK(chi_square_pvalue(0.0, 3) == doctest::Approx(1.0));
    // upper 0.1% critical value for 3 degrees of freedom
    CHECK(chi_square_pvalue(16.266, 3) == doctest::Approx(0.001).epsilon(0.01));
    CHECK(chi_square_pvalue(1e-9, 3) > 0.999);
}

TEST_CASE("linear fit recovers an exact line") {
    std::vector<std::pair<double, double>> pts;
    for (int x = 0; x < 10; ++x) pts.emplace_back(x, -0.25 * x + 3.0);
    LinearFit fit = fit_line(pts);
    CHECK(fit.slope == doctest::Approx(-0.25));
    CHECK(fit.intercept == doctest::Approx(3.0));
    CHECK(fit.r_squared == doctest::Approx(1.0));
}

TEST_CASE("honest experiment summary") {
    ExperimentSpec spec;
    spec.trials = 500;
    spec.attack = AttackKind::NoEve;
    spec.session_config.n_messages = 20;
    spec.session_config.lambda_c = 0.3;
    spec.session_config.seed = 2024;
    SummaryStats s = run_experiment(spec);
    CHECK(s.trials == 500);
    CHECK(s.detections == 0);
    CHECK(s.detection_rate_per_control == 0.0);
    CHECK(s.bob_symbol_error_rate == 0.0);
    CHECK(s.rq == 1.0);
    CHECK(s.rtot == 0.5);
    CHECK(s.control_rounds_total > 0);
    long long grouped = 0;
    for (const auto& [nc, cell] : s.survival_by_ncontrol) grouped += cell.trials;
    CHECK(grouped == s.trials);
}

TEST_CASE("survival at a single forced control round") {
    auto curve = survival_curve(AttackKind::InterceptResend, 0.0, 1, 5000, 31337, 2);
    REQUIRE(curve.size() == 2);
    CHECK(curve[0].first == 0);
    CHECK(curve[0].second == 1.0);
    CHECK(curve[1].first == 1);
    CHECK(std::abs(curve[1].second - 0.75) < 0.02);
}

TEST_CASE("worker count does not change the summary") {
    ExperimentSpec spec;
    spec.trials = 2000;
    spec.attack = AttackKind::InterceptResend;
    spec.session_config.n_messages = 10;
    spec.session_config.lambda_c = 0.5;
    spec.session_config.seed = 777;

    spec.workers = 1;
    SummaryStats one = run_experiment(spec);
    spec.workers = 4;
    SummaryStats four = run_experiment(spec);

    CHECK(one.detections == four.detections);
    CHECK(one.control_rounds_total == four.control_rounds_total);
    CHECK(one.detection_rate_per_control == four.detection_rate_per_control);
    CHECK(one.mi_a_f == four.mi_a_f);
    CHECK(one.bob_symbol_error_rate == four.bob_symbol_error_rate);
    CHECK(one.eve_b_pairclass_accuracy == four.eve_b_pairclass_accuracy);
}

TEST_CASE("experiment validation") {
    ExperimentSpec spec;
    spec.trials = 0;
    CHECK_THROWS_AS(run_experiment(spec), std::invalid_argument);
}
