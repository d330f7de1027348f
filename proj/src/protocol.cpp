#include "pingpong/protocol.hpp"

#include <algorithm>
#include <stdexcept>

namespace pingpong {

namespace {

ClassicalMessage deliver(Adversary& adv, AdversaryContext& ctx, const ClassicalMessage& msg,
                         Direction dir) {
    auto replacement = adv.on_classical(ctx, msg, dir);
    if (replacement) {
        if (!adv.rewriting())
            throw std::logic_error("non-rewriting adversary attempted to modify the public channel");
        return *replacement;
    }
    return msg;
}

}  // namespace

SessionResult run_session(const SessionConfig& config, const std::vector<BellIndex>& message,
                          Adversary& adversary) {
    if (config.n_messages < 1) throw std::invalid_argument("n_messages must be >= 1");
    if (config.lambda_c < 0.0 || config.lambda_c > 1.0)
        throw std::invalid_argument("lambda_c must lie in [0,1]");
    if (static_cast<int>(message.size()) != config.n_messages)
        throw std::invalid_argument("message length must equal n_messages");
    for (BellIndex a : message)
        if (a < 0 || a > 3) throw std::invalid_argument("message symbol out of range");
    if (adversary.rewriting() && !config.allow_channel_rewriting)
        throw std::invalid_argument(
            "channel-rewriting adversary requires allow_channel_rewriting");

    RandomSource rng(config.seed);
    SessionResult result;
    const int n_total = config.n_messages;
    int round_seq = 0;

    bool session_done = false;
    while (!session_done) {
        std::vector<BellIndex> f_list;
        std::vector<PauliIndex> b_list;
        int n = 0;
        bool segment_failed = false;

        while (n < n_total) {
            BellIndex a = message[n];

            QuantumRegister reg;
            QubitId home = reg.allocate();
            QubitId travel = reg.allocate();
            reg.insert(bell_state(a, home, travel));

            RoundRecord record;
            record.round_seq = round_seq;
            record.msg_index = n;
            record.a_n = a;
            AdversaryContext ctx{reg, rng, record.eve_events};

            QubitId delivered = adversary.on_forward(ctx, travel);

            bool control_mode;
            if (config.forced_control_schedule) {
                const auto& sched = *config.forced_control_schedule;
                control_mode = std::find(sched.begin(), sched.end(), round_seq) != sched.end();
            } else {
                control_mode = rng.bernoulli(config.lambda_c);
            }

            if (control_mode) {
                Basis basis = config.forced_control_basis
                                  ? *config.forced_control_basis
                                  : (rng.uniform_int(2) ? Basis::B1 : Basis::B0);
                int j = reg.measure(delivered, basis, rng);

                ClassicalMessage announce;
                announce.kind = ClassicalMessage::Kind::ControlAnnounce;
                announce.basis = basis;
                announce.outcome_j = j;
                ClassicalMessage received = deliver(adversary, ctx, announce, Direction::BobToAlice);

                int k = reg.measure(home, received.basis, rng);
                Correlation observed = (received.outcome_j == k) ? Correlation::Correlated
                                                                 : Correlation::Anticorrelated;
                bool pass = observed == expected_correlation(a, received.basis, config.rule_mode);

                record.mode = RoundMode::Control;
                record.control = ControlOutcome{received.basis, received.outcome_j, k, pass};
                result.transcript.push_back(std::move(record));
                result.counters.control_rounds += 1;
                result.counters.qubit_transmissions += 1;
                ++round_seq;

                if (!pass) {
                    result.detected = true;
                    result.detection_round = round_seq - 1;
                    if (config.detection_policy == DetectionPolicy::Abort) {
                        ClassicalMessage abort_msg;
                        abort_msg.kind = ClassicalMessage::Kind::AbortNotice;
                        deliver(adversary, ctx, abort_msg, Direction::AliceToBob);
                        session_done = true;
                    } else {
                        result.restarts += 1;
                        if (result.restarts > config.max_restarts) {
                            result.restart_cap_exceeded = true;
                            session_done = true;
                        } else {
                            result.detected = false;
                            result.detection_round.reset();
                        }
                    }
                    segment_failed = true;
                    break;
                }
                // Pair sacrificed; repeat the same a_n with a fresh pair.
                continue;
            }

            PauliIndex b = static_cast<PauliIndex>(rng.uniform_int(4));
            reg.apply_pauli(delivered, b);
            QubitId returned = adversary.on_return(ctx, delivered);
            BellIndex f = reg.bell_measure(home, returned, rng);
            adversary.score_message_round(b, a);

            record.mode = RoundMode::Message;
            record.b_n = b;
            record.f_n = f;
            result.transcript.push_back(std::move(record));
            result.counters.message_rounds += 1;
            result.counters.qubit_transmissions += 2;
            ++round_seq;

            f_list.push_back(f);
            b_list.push_back(b);
            ++n;
        }

        if (segment_failed) {
            if (session_done) break;
            continue;  // restart from p.0
        }

        // p.4: publish the final-state list; Bob decodes each symbol.
        QuantumRegister end_reg;
        std::vector<std::string> end_events;
        AdversaryContext end_ctx{end_reg, rng, end_events};

        ClassicalMessage finals;
        finals.kind = ClassicalMessage::Kind::FinalStates;
        finals.f_list = f_list;
        ClassicalMessage received = deliver(adversary, end_ctx, finals, Direction::AliceToBob);

        result.bob_decoded.clear();
        result.bob_decoded.reserve(received.f_list.size());
        for (std::size_t i = 0; i < received.f_list.size(); ++i)
            result.bob_decoded.push_back(decode_message(received.f_list[i], b_list[i]));

        result.counters.classical_bits += 2 * static_cast<long long>(f_list.size());
        result.eve_report = adversary.on_session_end(end_ctx, f_list);
        session_done = true;
    }

    if (result.detected) {
        QuantumRegister end_reg;
        std::vector<std::string> end_events;
        AdversaryContext end_ctx{end_reg, rng, end_events};
        result.eve_report = adversary.on_session_end(end_ctx, {});
    }
    return result;
}

}  // namespace pingpong
