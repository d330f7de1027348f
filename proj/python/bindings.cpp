#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "pingpong/adversary.hpp"
#include "pingpong/coding.hpp"
#include "pingpong/harness.hpp"
#include "pingpong/protocol.hpp"
#include "pingpong/quantum.hpp"

namespace py = pybind11;
using namespace pingpong;

namespace {

AttackKind parse_attack(const std::string& name) {
    auto kind = attack_from_name(name);
    if (!kind) throw py::value_error("unknown attack: " + name);
    return *kind;
}

RuleMode parse_rule(const std::string& name) {
    if (name == "physical") return RuleMode::PhysicallyCorrect;
    if (name == "paper-literal") return RuleMode::PaperLiteral;
    throw py::value_error("rule must be 'physical' or 'paper-literal'");
}

py::dict summary_to_dict(const SummaryStats& s) {
    py::dict d;
    d["trials"] = s.trials;
    d["control_rounds_total"] = s.control_rounds_total;
    d["detections"] = s.detections;
    d["detection_rate_per_control"] = s.detection_rate_per_control;
    d["detection_rate_stderr"] = s.detection_rate_stderr;
    d["mi_a_f"] = s.mi_a_f;
    d["mi_pairs"] = s.mi_pairs;
    d["chi2_f_uniformity"] = s.chi2_f_uniformity;
    d["rq"] = s.rq;
    d["rtot"] = s.rtot;
    d["bob_symbol_error_rate"] = s.bob_symbol_error_rate;
    d["eve_b_pairclass_accuracy"] = s.eve_b_pairclass_accuracy;
    d["eve_a_recovery_accuracy"] = s.eve_a_recovery_accuracy;
    d["detected_sessions"] = s.detected_sessions;
    d["undetected_sessions"] = s.undetected_sessions;
    py::dict survival;
    for (const auto& [nc, cell] : s.survival_by_ncontrol)
        survival[py::int_(nc)] =
            py::make_tuple(cell.trials, cell.survivors, cell.fraction);
    d["survival_by_ncontrol"] = survival;
    return d;
}

}  // namespace

PYBIND11_MODULE(_pingpong, m) {
    m.doc() = "Entanglement-based secure direct communication simulator";

    m.def("transform", &transform, py::arg("a"), py::arg("b"),
          "Bell index after applying sigma_b to the travel qubit of Psi_a");
    m.def("decode_message", &decode_message, py::arg("f"), py::arg("b"));
    m.def("infer_operation", &infer_operation, py::arg("a"), py::arg("f"));

    m.def(
        "expected_correlation",
        [](BellIndex a, int basis, const std::string& rule) {
            Correlation c = expected_correlation(a, basis ? Basis::B1 : Basis::B0,
                                                 parse_rule(rule));
            return c == Correlation::Correlated ? "correlated" : "anticorrelated";
        },
        py::arg("a"), py::arg("basis"), py::arg("rule") = "physical");

    m.def(
        "bell_state_amplitudes",
        [](BellIndex a) {
            QuantumSystem s = bell_state(a, QubitId{0}, QubitId{1});
            return s.amps();
        },
        py::arg("a"), "Amplitudes of Psi_a over |00>,|01>,|10>,|11>");

    m.def(
        "run_session",
        [](const std::vector<BellIndex>& message, double lambda_c, const std::string& attack,
           std::uint64_t seed, const std::string& rule) {
            SessionConfig config;
            config.n_messages = static_cast<int>(message.size());
            config.lambda_c = lambda_c;
            config.seed = seed;
            config.rule_mode = parse_rule(rule);
            AttackKind kind = parse_attack(attack);
            config.allow_channel_rewriting = kind == AttackKind::StrongMitm;
            auto eve = make_adversary(kind);
            SessionResult result = run_session(config, message, *eve);
            py::dict d;
            d["detected"] = result.detected;
            d["bob_decoded"] = result.bob_decoded;
            d["message_rounds"] = result.counters.message_rounds;
            d["control_rounds"] = result.counters.control_rounds;
            d["eve_a_recovery_accuracy"] = result.eve_report.a_recovery_accuracy;
            d["eve_b_pairclass_accuracy"] = result.eve_report.b_pairclass_accuracy;
            return d;
        },
        py::arg("message"), py::arg("lambda_c"), py::arg("attack") = "none", py::arg("seed") = 0,
        py::arg("rule") = "physical");

    m.def(
        "run_experiment",
        [](long long trials, int n_messages, double lambda_c, const std::string& attack,
           std::uint64_t seed, int workers) {
            ExperimentSpec spec;
            spec.trials = trials;
            spec.attack = parse_attack(attack);
            spec.workers = workers;
            spec.session_config.n_messages = n_messages;
            spec.session_config.lambda_c = lambda_c;
            spec.session_config.seed = seed;
            return summary_to_dict(run_experiment(spec));
        },
        py::arg("trials"), py::arg("n_messages"), py::arg("lambda_c"), py::arg("attack") = "none",
        py::arg("seed") = 0, py::arg("workers") = 1);

    m.def("estimate_mutual_information", &estimate_mutual_information, py::arg("pairs"));

    m.def(
        "survival_curve",
        [](const std::string& attack, int max_controls, long long trials, std::uint64_t seed,
           int workers) {
            return survival_curve(parse_attack(attack), 0.0, max_controls, trials, seed, workers);
        },
        py::arg("attack"), py::arg("max_controls"), py::arg("trials"), py::arg("seed") = 0,
        py::arg("workers") = 1);
}
