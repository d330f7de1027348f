#include "pingpong/adversary.hpp"

#include <stdexcept>
#include <utility>

namespace pingpong {

const char* attack_name(AttackKind kind) {
    switch (kind) {
        case AttackKind::NoEve: return "none";
        case AttackKind::InterceptResend: return "intercept-resend";
        case AttackKind::WeakMitm: return "weak-mitm";
        case AttackKind::StrongMitm: return "strong-mitm";
    }
    return "none";
}

std::optional<AttackKind> attack_from_name(const std::string& name) {
    if (name == "none") return AttackKind::NoEve;
    if (name == "intercept-resend") return AttackKind::InterceptResend;
    if (name == "weak-mitm") return AttackKind::WeakMitm;
    if (name == "strong-mitm") return AttackKind::StrongMitm;
    return std::nullopt;
}

namespace {

class NoEve final : public Adversary {};

// Measures the travel qubit on the way out and again on the way back; a flip
// in her basis narrows Bob's operation to one of two Paulis.
class InterceptResend final : public Adversary {
public:
    explicit InterceptResend(InterceptResendOptions opts) : opts_(opts) {}

    QubitId on_forward(AdversaryContext& ctx, QubitId travel) override {
        switch (opts_.basis_policy) {
            case InterceptResendOptions::BasisPolicy::FixedB0: basis_ = Basis::B0; break;
            case InterceptResendOptions::BasisPolicy::FixedB1: basis_ = Basis::B1; break;
            case InterceptResendOptions::BasisPolicy::Uniform:
                basis_ = ctx.rng.uniform_int(2) ? Basis::B1 : Basis::B0;
                break;
        }
        outward_ = ctx.reg.measure(travel, basis_, ctx.rng);
        ctx.round_events.push_back(std::string("eve-measured-forward basis=") +
                                   (basis_ == Basis::B0 ? "B0" : "B1"));
        return travel;
    }

    QubitId on_return(AdversaryContext& ctx, QubitId travel) override {
        int inward = ctx.reg.measure(travel, basis_, ctx.rng);
        bool flipped = inward != outward_;
        // No flip: {sigma0, sigma3} in B0, {sigma0, sigma1} in B1.
        if (basis_ == Basis::B0)
            pending_pair_ = flipped ? std::pair<PauliIndex, PauliIndex>{1, 2}
                                    : std::pair<PauliIndex, PauliIndex>{0, 3};
        else
            pending_pair_ = flipped ? std::pair<PauliIndex, PauliIndex>{2, 3}
                                    : std::pair<PauliIndex, PauliIndex>{0, 1};
        ctx.round_events.push_back("eve-measured-return");
        return travel;
    }

    void score_message_round(PauliIndex true_b, BellIndex) override {
        if (!pending_pair_) return;
        report_.guessed_b_pair.push_back(pending_pair_);
        report_.guessed_b.push_back(std::nullopt);
        report_.b_guesses += 1;
        if (true_b == pending_pair_->first || true_b == pending_pair_->second) ++pair_correct_;
        pending_pair_.reset();
    }

    EveReport on_session_end(AdversaryContext&, const std::vector<BellIndex>&) override {
        if (report_.b_guesses > 0)
            report_.b_pairclass_accuracy =
                static_cast<double>(pair_correct_) / static_cast<double>(report_.b_guesses);
        report_.notes.push_back("intercept-resend: learned one bit of b per message round");
        return report_;
    }

private:
    InterceptResendOptions opts_;
    Basis basis_ = Basis::B0;
    int outward_ = 0;
    std::optional<std::pair<PauliIndex, PauliIndex>> pending_pair_;
    long long pair_correct_ = 0;
    EveReport report_;
};

// Substitutes her own Bell pair for the travel qubit and relays semantics:
// her Bell measurement on the returned half reveals Bob's operation exactly,
// which she replays onto the stored true travel qubit.
class WeakMitm : public Adversary {
public:
    explicit WeakMitm(MitmOptions opts) : opts_(opts) {}

    QubitId on_forward(AdversaryContext& ctx, QubitId travel) override {
        stored_travel_ = travel;
        evil_home_ = ctx.reg.allocate();
        QubitId evil_travel = ctx.reg.allocate();
        ctx.reg.insert(bell_state(opts_.evil_state, evil_home_, evil_travel));
        pending_b_.reset();
        ctx.round_events.push_back("eve-substituted-pair");
        return evil_travel;
    }

    QubitId on_return(AdversaryContext& ctx, QubitId evil_travel) override {
        BellIndex f_e = ctx.reg.bell_measure(evil_home_, evil_travel, ctx.rng);
        pending_b_ = infer_operation(opts_.evil_state, f_e);
        ctx.reg.apply_pauli(*stored_travel_, *pending_b_);
        ctx.round_events.push_back("eve-learned-b=" + std::to_string(*pending_b_));
        return *stored_travel_;
    }

    void score_message_round(PauliIndex true_b, BellIndex true_a) override {
        if (!pending_b_) return;
        report_.guessed_b.push_back(pending_b_);
        report_.guessed_b_pair.push_back(std::nullopt);
        report_.b_guesses += 1;
        if (*pending_b_ == true_b) ++b_correct_;
        exact_b_.push_back(*pending_b_);
        true_a_.push_back(true_a);
        pending_b_.reset();
    }

    EveReport on_session_end(AdversaryContext&, const std::vector<BellIndex>& published_f) override {
        if (report_.b_guesses > 0) {
            report_.b_pairclass_accuracy =
                static_cast<double>(b_correct_) / static_cast<double>(report_.b_guesses);
        }
        // Published f entries line up with the trailing message rounds.
        if (!published_f.empty() && published_f.size() <= exact_b_.size()) {
            std::size_t offset = exact_b_.size() - published_f.size();
            long long correct = 0;
            for (std::size_t i = 0; i < published_f.size(); ++i) {
                BellIndex guess = decode_message(published_f[i], exact_b_[offset + i]);
                report_.guessed_a.push_back(guess);
                report_.a_guesses += 1;
                if (guess == true_a_[offset + i]) ++correct;
            }
            report_.a_recovery_accuracy =
                static_cast<double>(correct) / static_cast<double>(report_.a_guesses);
        }
        return report_;
    }

protected:
    MitmOptions opts_;
    std::optional<QubitId> stored_travel_;
    QubitId evil_home_{};
    std::optional<PauliIndex> pending_b_;
    std::vector<PauliIndex> exact_b_;
    std::vector<BellIndex> true_a_;
    long long b_correct_ = 0;
    EveReport report_;
};

// Weak MITM plus control of the public channel: she answers Alice's control
// checks with a measurement of the stored true travel qubit, which is still
// entangled with Alice's home qubit, so the check always passes.
class StrongMitm final : public WeakMitm {
public:
    explicit StrongMitm(MitmOptions opts) : WeakMitm(opts) {}

    bool rewriting() const override { return true; }

    std::optional<ClassicalMessage> on_classical(AdversaryContext& ctx,
                                                 const ClassicalMessage& msg,
                                                 Direction dir) override {
        if (msg.kind != ClassicalMessage::Kind::ControlAnnounce || dir != Direction::BobToAlice)
            return std::nullopt;
        if (!stored_travel_ || !ctx.reg.contains(*stored_travel_)) return std::nullopt;
        int j_e = ctx.reg.measure(*stored_travel_, msg.basis, ctx.rng);
        ctx.round_events.push_back("eve-forged-control-announce");
        ClassicalMessage forged = msg;
        forged.outcome_j = j_e;
        return forged;
    }
};

}  // namespace

std::unique_ptr<Adversary> make_no_eve() { return std::make_unique<NoEve>(); }

std::unique_ptr<Adversary> make_intercept_resend(InterceptResendOptions opts) {
    return std::make_unique<InterceptResend>(opts);
}

std::unique_ptr<Adversary> make_weak_mitm(MitmOptions opts) {
    return std::make_unique<WeakMitm>(opts);
}

std::unique_ptr<Adversary> make_strong_mitm(MitmOptions opts) {
    return std::make_unique<StrongMitm>(opts);
}

std::unique_ptr<Adversary> make_adversary(AttackKind kind) {
    switch (kind) {
        case AttackKind::NoEve: return make_no_eve();
        case AttackKind::InterceptResend: return make_intercept_resend();
        case AttackKind::WeakMitm: return make_weak_mitm();
        case AttackKind::StrongMitm: return make_strong_mitm();
    }
    throw std::invalid_argument("unknown attack kind");
}

}  // namespace pingpong
