#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "pingpong/coding.hpp"
#include "pingpong/quantum.hpp"

namespace pingpong {

enum class DetectionPolicy : int { Abort = 0, Restart = 1 };

struct SessionConfig {
    int n_messages = 1;
    double lambda_c = 0.0;
    RuleMode rule_mode = RuleMode::PhysicallyCorrect;
    DetectionPolicy detection_policy = DetectionPolicy::Abort;
    std::uint64_t seed = 0;
    // Wall-clock round indices that run in control mode, overriding the
    // lambda_c coin. Empty optional = use the coin.
    std::optional<std::vector<int>> forced_control_schedule;
    // Test hook: pins Bob's basis choice in every control round.
    std::optional<Basis> forced_control_basis;
    int max_restarts = 8;
    // Explicit opt-in for strategies that rewrite the public channel.
    bool allow_channel_rewriting = false;
};

struct ClassicalMessage {
    enum class Kind : int { ControlAnnounce, FinalStates, AbortNotice };
    Kind kind = Kind::ControlAnnounce;
    // ControlAnnounce
    Basis basis = Basis::B0;
    int outcome_j = 0;
    // FinalStates
    std::vector<BellIndex> f_list;

    friend bool operator==(const ClassicalMessage&, const ClassicalMessage&) = default;
};

enum class RoundMode : int { Message = 0, Control = 1 };

struct ControlOutcome {
    Basis basis = Basis::B0;
    int j = 0;
    int k = 0;
    bool verdict_pass = true;

    friend bool operator==(const ControlOutcome&, const ControlOutcome&) = default;
};

struct RoundRecord {
    int round_seq = 0;  // wall-clock counter, including repeats and restarts
    int msg_index = 0;  // n
    RoundMode mode = RoundMode::Message;
    BellIndex a_n = 0;
    std::optional<PauliIndex> b_n;
    std::optional<BellIndex> f_n;
    std::optional<ControlOutcome> control;
    std::vector<std::string> eve_events;

    friend bool operator==(const RoundRecord&, const RoundRecord&) = default;
};

struct SessionCounters {
    long long message_rounds = 0;
    long long control_rounds = 0;
    long long qubit_transmissions = 0;
    long long classical_bits = 0;
};

struct EveReport {
    // Exact guesses of Bob's operation where the strategy makes them.
    std::vector<std::optional<PauliIndex>> guessed_b;
    // Pair-class guesses (two candidate operations) where only one bit of b
    // was learned; empty pairs mean no guess that round.
    std::vector<std::optional<std::pair<PauliIndex, PauliIndex>>> guessed_b_pair;
    std::vector<std::optional<BellIndex>> guessed_a;
    double b_pairclass_accuracy = 0.0;
    double a_recovery_accuracy = 0.0;
    long long b_guesses = 0;
    long long a_guesses = 0;
    std::vector<std::string> notes;
};

class QuantumRegister;

// Everything an eavesdropping strategy can touch. Hooks receive the session
// register (their own qubits live alongside Alice's) and may annotate the
// current round's transcript entry.
struct AdversaryContext {
    QuantumRegister& reg;
    RandomSource& rng;
    std::vector<std::string>& round_events;
};

enum class Direction : int { AliceToBob = 0, BobToAlice = 1 };

class Adversary {
public:
    virtual ~Adversary() = default;

    // Returns the qubit actually delivered to the other side.
    virtual QubitId on_forward(AdversaryContext& ctx, QubitId travel) { (void)ctx; return travel; }
    virtual QubitId on_return(AdversaryContext& ctx, QubitId travel) { (void)ctx; return travel; }

    // Observes (and, only for rewriting strategies, replaces) a public
    // classical message. The engine rejects replacements from strategies
    // that did not declare rewriting().
    virtual std::optional<ClassicalMessage> on_classical(AdversaryContext& ctx,
                                                         const ClassicalMessage& msg,
                                                         Direction dir) {
        (void)ctx; (void)msg; (void)dir;
        return std::nullopt;
    }

    virtual bool rewriting() const { return false; }

    // Called once per message round with the true b_n, so reports can score
    // themselves. Strategies must not read this for their own guesses.
    virtual void score_message_round(PauliIndex true_b, BellIndex true_a) {
        (void)true_b; (void)true_a;
    }

    virtual EveReport on_session_end(AdversaryContext& ctx,
                                     const std::vector<BellIndex>& published_f) {
        (void)ctx; (void)published_f;
        return {};
    }
};

struct SessionResult {
    std::vector<RoundRecord> transcript;
    bool detected = false;
    std::optional<int> detection_round;
    std::vector<BellIndex> bob_decoded;
    EveReport eve_report;
    SessionCounters counters;
    int restarts = 0;
    bool restart_cap_exceeded = false;
};

// Executes one full session of the protocol: Alice prepares |Psi_{a_n}> and
// sends the travel qubit; Bob either runs a control check (probability
// lambda_c) or encodes sigma_b and returns the qubit; after the last symbol
// Alice publishes the final-state list and Bob decodes.
SessionResult run_session(const SessionConfig& config, const std::vector<BellIndex>& message,
                          Adversary& adversary);

}  // namespace pingpong
