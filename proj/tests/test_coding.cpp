#include <cmath>

#include <doctest.h>

#include "pingpong/coding.hpp"
#include "pingpong/quantum.hpp"

using namespace pingpong;

TEST_CASE("transform table spot values") {
    CHECK(transform(0, 0) == 0);
    CHECK(transform(0, 2) == 3);  // sigma_y swaps |0+> and |1->
    CHECK(transform(1, 2) == 2);
    CHECK(transform(0, 1) == 2);
    CHECK(transform(1, 3) == 0);
    CHECK_THROWS_AS(transform(4, 0), std::invalid_argument);
    CHECK_THROWS_AS(transform(0, -1), std::invalid_argument);
}

TEST_CASE("transform agrees with the state-vector oracle on all 16 pairs") {
    for (BellIndex a = 0; a < 4; ++a) {
        for (PauliIndex b = 0; b < 4; ++b) {
            QuantumSystem s = bell_state(a, QubitId{0}, QubitId{1});
            s.apply_pauli(QubitId{1}, b);
            QuantumSystem expected = bell_state(transform(a, b), QubitId{0}, QubitId{1});
            CHECK(std::abs(overlap_magnitude(expected, s) - 1.0) < 1e-12);
        }
    }
}

TEST_CASE("decode and infer invert the encoding") {
    CHECK(decode_message(3, 2) == 0);
    CHECK(infer_operation(0, 3) == 2);
    for (BellIndex a = 0; a < 4; ++a) {
        CHECK(decode_message(a, 0) == a);
        CHECK(infer_operation(a, a) == 0);
        for (PauliIndex b = 0; b < 4; ++b) {
            CHECK(decode_message(transform(a, b), b) == a);
            CHECK(infer_operation(a, transform(a, b)) == b);
            CHECK(transform(transform(a, b), b) == a);  // involution
        }
    }
}

TEST_CASE("transform is a latin square") {
    for (int fixed = 0; fixed < 4; ++fixed) {
        int seen_b[4] = {0}, seen_a[4] = {0};
        for (int other = 0; other < 4; ++other) {
            ++seen_b[transform(fixed, other)];
            ++seen_a[transform(other, fixed)];
        }
        for (int v = 0; v < 4; ++v) {
            CHECK(seen_b[v] == 1);
            CHECK(seen_a[v] == 1);
        }
    }
}

TEST_CASE("expected correlation tables") {
    CHECK(expected_correlation(0, Basis::B0, RuleMode::PhysicallyCorrect) ==
          Correlation::Correlated);
    CHECK(expected_correlation(1, Basis::B1, RuleMode::PhysicallyCorrect) ==
          Correlation::Anticorrelated);
    CHECK(expected_correlation(1, Basis::B1, RuleMode::PaperLiteral) == Correlation::Correlated);

    // the two rules disagree exactly on (Psi1,B1) and (Psi2,B1)
    for (BellIndex a = 0; a < 4; ++a) {
        for (Basis basis : {Basis::B0, Basis::B1}) {
            bool differ = expected_correlation(a, basis, RuleMode::PhysicallyCorrect) !=
                          expected_correlation(a, basis, RuleMode::PaperLiteral);
            bool should_differ = basis == Basis::B1 && (a == 1 || a == 2);
            CHECK(differ == should_differ);
        }
    }
}

TEST_CASE("physical correlations match measured statistics for every (a, basis)") {
    RandomSource rng(77);
    for (BellIndex a = 0; a < 4; ++a) {
        for (Basis basis : {Basis::B0, Basis::B1}) {
            Correlation expected = expected_correlation(a, basis, RuleMode::PhysicallyCorrect);
            for (int t = 0; t < 10000; ++t) {
                QuantumRegister reg;
                QubitId home = reg.allocate(), travel = reg.allocate();
                reg.insert(bell_state(a, home, travel));
                int j = reg.measure(travel, basis, rng);
                int k = reg.measure(home, basis, rng);
                Correlation observed =
                    j == k ? Correlation::Correlated : Correlation::Anticorrelated;
                REQUIRE(observed == expected);
            }
        }
    }
}

TEST_CASE("transmission rates") {
    Rates pure = compute_rates({200, 200, 200});  // 100 message rounds
    CHECK(pure.rq == 1.0);
    CHECK(pure.rtot == 0.5);

    Rates none = compute_rates({10, 0, 10});
    CHECK(none.rq == 0.0);

    CHECK_THROWS_AS(compute_rates({0, 0, 0}), std::invalid_argument);
}
