#include "pingpong/transcript.hpp"

#include <istream>
#include <ostream>
#include <stdexcept>

#include <json.hpp>

namespace pingpong {

namespace {

using nlohmann::json;

json config_to_json(const SessionConfig& c) {
    json j;
    j["n_messages"] = c.n_messages;
    j["lambda_c"] = c.lambda_c;
    j["rule_mode"] = c.rule_mode == RuleMode::PhysicallyCorrect ? "physical" : "paper-literal";
    j["detection_policy"] = c.detection_policy == DetectionPolicy::Abort ? "abort" : "restart";
    j["seed"] = c.seed;
    if (c.forced_control_schedule) j["forced_control_schedule"] = *c.forced_control_schedule;
    if (c.forced_control_basis)
        j["forced_control_basis"] = *c.forced_control_basis == Basis::B0 ? "B0" : "B1";
    j["max_restarts"] = c.max_restarts;
    j["allow_channel_rewriting"] = c.allow_channel_rewriting;
    return j;
}

SessionConfig config_from_json(const json& j) {
    SessionConfig c;
    c.n_messages = j.at("n_messages").get<int>();
    c.lambda_c = j.at("lambda_c").get<double>();
    c.rule_mode = j.at("rule_mode").get<std::string>() == "physical" ? RuleMode::PhysicallyCorrect
                                                                     : RuleMode::PaperLiteral;
    c.detection_policy = j.at("detection_policy").get<std::string>() == "abort"
                             ? DetectionPolicy::Abort
                             : DetectionPolicy::Restart;
    c.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("forced_control_schedule"))
        c.forced_control_schedule = j["forced_control_schedule"].get<std::vector<int>>();
    if (j.contains("forced_control_basis"))
        c.forced_control_basis = j["forced_control_basis"].get<std::string>() == "B0" ? Basis::B0
                                                                                      : Basis::B1;
    c.max_restarts = j.value("max_restarts", 8);
    c.allow_channel_rewriting = j.value("allow_channel_rewriting", false);
    return c;
}

json round_to_json(const RoundRecord& r) {
    json j;
    j["round_seq"] = r.round_seq;
    j["msg_index"] = r.msg_index;
    j["mode"] = r.mode == RoundMode::Message ? "message" : "control";
    j["a_n"] = r.a_n;
    if (r.b_n) j["b_n"] = *r.b_n;
    if (r.f_n) j["f_n"] = *r.f_n;
    if (r.control) {
        j["control"] = {{"basis", r.control->basis == Basis::B0 ? "B0" : "B1"},
                        {"j", r.control->j},
                        {"k", r.control->k},
                        {"verdict", r.control->verdict_pass ? "pass" : "fail"}};
    }
    j["eve_events"] = r.eve_events;
    return j;
}

RoundRecord round_from_json(const json& j) {
    RoundRecord r;
    r.round_seq = j.at("round_seq").get<int>();
    r.msg_index = j.at("msg_index").get<int>();
    r.mode = j.at("mode").get<std::string>() == "message" ? RoundMode::Message : RoundMode::Control;
    r.a_n = j.at("a_n").get<int>();
    if (j.contains("b_n")) r.b_n = j["b_n"].get<int>();
    if (j.contains("f_n")) r.f_n = j["f_n"].get<int>();
    if (j.contains("control")) {
        const json& c = j["control"];
        r.control = ControlOutcome{c.at("basis").get<std::string>() == "B0" ? Basis::B0 : Basis::B1,
                                   c.at("j").get<int>(), c.at("k").get<int>(),
                                   c.at("verdict").get<std::string>() == "pass"};
    }
    r.eve_events = j.value("eve_events", std::vector<std::string>{});
    return r;
}

}  // namespace

void write_transcript(std::ostream& out, const SessionConfig& config, AttackKind attack,
                      const std::vector<BellIndex>& message, const SessionResult& result) {
    json header;
    header["type"] = "header";
    header["config"] = config_to_json(config);
    header["attack"] = attack_name(attack);
    header["message"] = message;
    out << header.dump() << '\n';
    for (const RoundRecord& r : result.transcript) {
        json j = round_to_json(r);
        j["type"] = "round";
        out << j.dump() << '\n';
    }
    json footer;
    footer["type"] = "result";
    footer["detected"] = result.detected;
    footer["bob_decoded"] = result.bob_decoded;
    out << footer.dump() << '\n';
}

TranscriptFile read_transcript(std::istream& in) {
    TranscriptFile t;
    std::string line;
    bool have_header = false;
    bool have_result = false;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::parse_error& e) {
            throw std::runtime_error(std::string("transcript parse error: ") + e.what());
        }
        std::string type = j.value("type", "");
        if (type == "header") {
            if (have_header) throw std::runtime_error("duplicate transcript header");
            t.config = config_from_json(j.at("config"));
            auto kind = attack_from_name(j.at("attack").get<std::string>());
            if (!kind) throw std::runtime_error("unknown attack in transcript header");
            t.attack = *kind;
            t.message = j.at("message").get<std::vector<BellIndex>>();
            have_header = true;
        } else if (type == "round") {
            if (!have_header) throw std::runtime_error("transcript round before header");
            t.rounds.push_back(round_from_json(j));
        } else if (type == "result") {
            t.detected = j.at("detected").get<bool>();
            t.bob_decoded = j.at("bob_decoded").get<std::vector<BellIndex>>();
            have_result = true;
        } else {
            throw std::runtime_error("unknown transcript line type");
        }
    }
    if (!have_header || !have_result) throw std::runtime_error("truncated transcript");
    return t;
}

ReplayResult replay_transcript(const TranscriptFile& recorded) {
    auto adversary = make_adversary(recorded.attack);
    SessionResult rerun = run_session(recorded.config, recorded.message, *adversary);

    ReplayResult out;
    if (rerun.transcript.size() != recorded.rounds.size()) {
        out.detail = "round count differs: recorded " + std::to_string(recorded.rounds.size()) +
                     ", replayed " + std::to_string(rerun.transcript.size());
        return out;
    }
    for (std::size_t i = 0; i < recorded.rounds.size(); ++i) {
        if (!(recorded.rounds[i] == rerun.transcript[i])) {
            out.first_divergent_round = static_cast<int>(i);
            out.detail = "first divergence at round " + std::to_string(i);
            return out;
        }
    }
    if (rerun.detected != recorded.detected || !(rerun.bob_decoded == recorded.bob_decoded)) {
        out.detail = "result line differs";
        return out;
    }
    out.identical = true;
    return out;
}

}  // namespace pingpong
