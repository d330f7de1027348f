#pragma once

#include <stdexcept>

#include "pingpong/quantum.hpp"

namespace pingpong {

enum class Correlation : int { Correlated = 0, Anticorrelated = 1 };

// The control-check rule. Physical follows the actual correlations of each
// Bell state in each basis; Literal applies the basis-independent check of
// the written algorithm, which false-positives on (Psi1,B1) and (Psi2,B1).
enum class RuleMode : int { PhysicallyCorrect = 0, PaperLiteral = 1 };

namespace detail {
// transform(a,b) = a XOR kPauliXor[b]: sigma_x flips n, sigma_z flips the
// sign, sigma_y flips both.
inline constexpr int kPauliXor[4] = {0, 2, 3, 1};
inline constexpr int kXorToPauli[4] = {0, 3, 1, 2};

inline void check_index(int v, const char* what) {
    if (v < 0 || v > 3) throw std::invalid_argument(what);
}
}  // namespace detail

// Bell index f with |Psi_f> ~ (1 x sigma_b)|Psi_a>, phase discarded.
inline BellIndex transform(BellIndex a, PauliIndex b) {
    detail::check_index(a, "bell index out of range");
    detail::check_index(b, "pauli index out of range");
    return a ^ detail::kPauliXor[b];
}

// Inverse of encoding; the same table because every sigma is self-inverse.
inline BellIndex decode_message(BellIndex f, PauliIndex b) { return transform(f, b); }

// The unique b with transform(a,b) = f.
inline PauliIndex infer_operation(BellIndex a, BellIndex f) {
    detail::check_index(a, "bell index out of range");
    detail::check_index(f, "bell index out of range");
    return detail::kXorToPauli[a ^ f];
}

inline Correlation expected_correlation(BellIndex a, Basis basis, RuleMode mode) {
    detail::check_index(a, "bell index out of range");
    if (mode == RuleMode::PaperLiteral)
        return bell_n(a) == 0 ? Correlation::Correlated : Correlation::Anticorrelated;
    if (basis == Basis::B0)
        return bell_n(a) == 0 ? Correlation::Correlated : Correlation::Anticorrelated;
    // In B1 the sign bit decides: |n+> correlates, |n-> anticorrelates.
    return bell_sign(a) == 0 ? Correlation::Correlated : Correlation::Anticorrelated;
}

struct TransmissionCounts {
    long long message_qubits = 0;          // qubit transmissions, control excluded
    long long message_bits_delivered = 0;  // usable message bits
    long long classical_bits = 0;          // published final-state bits
};

struct Rates {
    double rq = 0.0;
    double rtot = 0.0;
};

inline Rates compute_rates(const TransmissionCounts& c) {
    if (c.message_qubits <= 0 || c.message_qubits + c.classical_bits <= 0)
        throw std::invalid_argument("rate denominator must be positive");
    return {static_cast<double>(c.message_bits_delivered) / static_cast<double>(c.message_qubits),
            static_cast<double>(c.message_bits_delivered) /
                static_cast<double>(c.message_qubits + c.classical_bits)};
}

}  // namespace pingpong
