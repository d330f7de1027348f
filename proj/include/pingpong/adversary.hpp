#pragma once

#include <memory>
#include <optional>
#include <string>

#include "pingpong/protocol.hpp"

namespace pingpong {

enum class AttackKind : int { NoEve = 0, InterceptResend = 1, WeakMitm = 2, StrongMitm = 3 };

const char* attack_name(AttackKind kind);
std::optional<AttackKind> attack_from_name(const std::string& name);

struct InterceptResendOptions {
    enum class BasisPolicy : int { Uniform = 0, FixedB0 = 1, FixedB1 = 2 };
    BasisPolicy basis_policy = BasisPolicy::Uniform;
};

struct MitmOptions {
    // Any Bell state works as Eve's pair since she knows which one she made.
    BellIndex evil_state = 0;
};

std::unique_ptr<Adversary> make_no_eve();
std::unique_ptr<Adversary> make_intercept_resend(InterceptResendOptions opts = {});
std::unique_ptr<Adversary> make_weak_mitm(MitmOptions opts = {});
std::unique_ptr<Adversary> make_strong_mitm(MitmOptions opts = {});

std::unique_ptr<Adversary> make_adversary(AttackKind kind);

}  // namespace pingpong
