#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pingpong/adversary.hpp"
#include "pingpong/coding.hpp"
#include "pingpong/harness.hpp"
#include "pingpong/transcript.hpp"
#include "pingpong/verify.hpp"

namespace {

using namespace pingpong;

constexpr int kExitOk = 0;
constexpr int kExitVerifyFail = 1;
constexpr int kExitDetected = 2;
constexpr int kExitUsage = 64;
constexpr int kExitDataFormat = 65;

std::vector<BellIndex> parse_symbols(const std::string& digits) {
    std::vector<BellIndex> out;
    for (char c : digits) {
        if (c < '0' || c > '3') throw CLI::ValidationError("message digits must be 0-3");
        out.push_back(c - '0');
    }
    return out;
}

// Two bits per symbol, big-endian within the symbol.
std::vector<BellIndex> parse_bits(const std::string& bits) {
    if (bits.size() % 2 != 0)
        throw CLI::ValidationError("--bits string must have even length");
    std::vector<BellIndex> out;
    for (std::size_t i = 0; i < bits.size(); i += 2) {
        if ((bits[i] != '0' && bits[i] != '1') || (bits[i + 1] != '0' && bits[i + 1] != '1'))
            throw CLI::ValidationError("--bits string must be binary");
        out.push_back((bits[i] - '0') * 2 + (bits[i + 1] - '0'));
    }
    return out;
}

struct SimulateArgs {
    int messages = 0;
    std::string message_string;
    std::string bits_string;
    double lambda_c = 0.0;
    std::string attack = "none";
    std::string rule = "physical";
    std::string policy = "abort";
    std::uint64_t seed = 0;
    long long trials = 1;
    std::string out_dir;
    bool transcripts = false;
    bool fail_on_detect = false;
    int workers = 1;
};

int cmd_simulate(const SimulateArgs& args) {
    ExperimentSpec spec;
    spec.trials = args.trials;
    spec.workers = args.workers;
    spec.output_path = args.out_dir;
    spec.write_transcripts = args.transcripts;

    auto kind = attack_from_name(args.attack);
    if (!kind) {
        std::cerr << "unknown attack: " << args.attack << "\n";
        return kExitUsage;
    }
    spec.attack = *kind;

    if (!args.message_string.empty())
        spec.fixed_message = parse_symbols(args.message_string);
    else if (!args.bits_string.empty())
        spec.fixed_message = parse_bits(args.bits_string);

    int n = spec.fixed_message ? static_cast<int>(spec.fixed_message->size()) : args.messages;
    if (n < 1) {
        std::cerr << "message must contain at least one symbol\n";
        return kExitUsage;
    }
    spec.session_config.n_messages = n;
    spec.session_config.lambda_c = args.lambda_c;
    spec.session_config.rule_mode =
        args.rule == "paper-literal" ? RuleMode::PaperLiteral : RuleMode::PhysicallyCorrect;
    spec.session_config.detection_policy =
        args.policy == "restart" ? DetectionPolicy::Restart : DetectionPolicy::Abort;
    spec.session_config.seed = args.seed;

    SummaryStats stats = run_experiment(spec);

    std::printf("sessions            %lld\n", stats.trials);
    std::printf("control rounds      %lld\n", stats.control_rounds_total);
    std::printf("detections          %lld\n", stats.detections);
    if (stats.control_rounds_total > 0)
        std::printf("detection rate      %.4f +/- %.4f per control round\n",
                    stats.detection_rate_per_control, stats.detection_rate_stderr);
    std::printf("bob symbol errors   %.4f\n", stats.bob_symbol_error_rate);
    std::printf("rq                  %.4f\n", stats.rq);
    std::printf("rtot                %.4f\n", stats.rtot);
    if (stats.mi_pairs >= 1000)
        std::printf("MI(a;f)             %.5f bits over %lld pairs\n", stats.mi_a_f, stats.mi_pairs);
    if (spec.attack != AttackKind::NoEve) {
        std::printf("eve b accuracy      %.4f\n", stats.eve_b_pairclass_accuracy);
        std::printf("eve a accuracy      %.4f\n", stats.eve_a_recovery_accuracy);
    }

    if (!args.out_dir.empty()) {
        std::filesystem::create_directories(args.out_dir);
        write_summary_json((std::filesystem::path(args.out_dir) / "summary.json").string(), spec,
                           stats);
    }

    if (args.fail_on_detect && stats.detected_sessions > 0) return kExitDetected;
    return kExitOk;
}

struct SweepArgs {
    std::vector<double> lambda_cs{0.1, 0.2, 0.5};
    std::vector<int> messages{50};
    std::vector<std::string> attacks{"none", "intercept-resend", "weak-mitm", "strong-mitm"};
    long long trials = 1000;
    std::uint64_t seed = 0;
    std::string out_csv;
    int workers = 1;
};

int cmd_sweep(const SweepArgs& args) {
    std::ofstream out(args.out_csv);
    if (!out) {
        std::cerr << "cannot open " << args.out_csv << "\n";
        return kExitDataFormat;
    }
    out << "lambda_c,n_messages,attack,detection_rate,survival,mi,rq,rtot,bob_error,"
           "eve_b_acc,eve_a_acc\n";
    std::uint64_t point = 0;
    for (const std::string& attack : args.attacks) {
        auto kind = attack_from_name(attack);
        if (!kind) {
            std::cerr << "unknown attack: " << attack << "\n";
            return kExitUsage;
        }
        for (double lc : args.lambda_cs) {
            for (int n : args.messages) {
                ExperimentSpec spec;
                spec.trials = args.trials;
                spec.attack = *kind;
                spec.workers = args.workers;
                spec.session_config.n_messages = n;
                spec.session_config.lambda_c = lc;
                spec.session_config.seed = derive_trial_seed(args.seed, ++point);
                SummaryStats s = run_experiment(spec);
                double survival = static_cast<double>(s.undetected_sessions) /
                                  static_cast<double>(s.trials);
                out << lc << ',' << n << ',' << attack << ',' << s.detection_rate_per_control
                    << ',' << survival << ',' << s.mi_a_f << ',' << s.rq << ',' << s.rtot << ','
                    << s.bob_symbol_error_rate << ',' << s.eve_b_pairclass_accuracy << ','
                    << s.eve_a_recovery_accuracy << '\n';
                std::cout << attack << " lambda_c=" << lc << " N=" << n
                          << ": survival=" << survival << "\n";
            }
        }
    }
    return kExitOk;
}

int cmd_table() {
    std::printf("Bell transform table: entry = transform(a, b)\n");
    std::printf("        b=0   b=1   b=2   b=3\n");
    for (BellIndex a = 0; a < 4; ++a) {
        std::printf("a=%d  ", a);
        for (PauliIndex b = 0; b < 4; ++b) std::printf("   %d  ", transform(a, b));
        std::printf("\n");
    }
    for (RuleMode mode : {RuleMode::PhysicallyCorrect, RuleMode::PaperLiteral}) {
        std::printf("\nControl correlations (%s): C = correlated, A = anticorrelated\n",
                    mode == RuleMode::PhysicallyCorrect ? "physical" : "paper-literal");
        std::printf("        B0    B1\n");
        for (BellIndex a = 0; a < 4; ++a) {
            std::printf("Psi%d  ", a);
            for (Basis basis : {Basis::B0, Basis::B1})
                std::printf("   %c  ",
                            expected_correlation(a, basis, mode) == Correlation::Correlated ? 'C'
                                                                                            : 'A');
            std::printf("\n");
        }
    }
    return kExitOk;
}

int cmd_verify(double scale, int workers, bool inject_fault) {
    VerifyOptions options;
    options.scale = scale;
    options.workers = workers;
    options.inject_table_fault = inject_fault;
    auto results = run_acceptance(options);
    bool all_pass = true;
    for (const auto& r : results) {
        std::printf("[%s] %2d %-42s %s\n", r.pass ? "PASS" : "FAIL", r.id, r.name.c_str(),
                    r.detail.c_str());
        all_pass = all_pass && r.pass;
    }
    return all_pass ? kExitOk : kExitVerifyFail;
}

int cmd_replay(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        std::cerr << "cannot open " << path << "\n";
        return kExitDataFormat;
    }
    TranscriptFile recorded;
    try {
        recorded = read_transcript(in);
    } catch (const std::exception& e) {
        std::cerr << "transcript schema error: " << e.what() << "\n";
        return kExitDataFormat;
    }
    ReplayResult result = replay_transcript(recorded);
    if (result.identical) {
        std::cout << "replay identical (" << recorded.rounds.size() << " rounds)\n";
        return kExitOk;
    }
    std::cout << "replay mismatch: " << result.detail << "\n";
    return kExitVerifyFail;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Entanglement-based secure direct communication simulator"};
    app.require_subcommand(1);

    SimulateArgs sim;
    auto* simulate = app.add_subcommand("simulate", "Run Monte Carlo protocol sessions");
    simulate->add_option("--messages", sim.messages, "Number of random message symbols per session");
    simulate->add_option("--message-string", sim.message_string,
                         "Explicit message as base-4 digits (0-3)");
    simulate->add_option("--bits", sim.bits_string,
                         "Explicit message as a binary string, two bits per symbol");
    simulate->add_option("--lambda-c", sim.lambda_c, "Control-mode probability")
        ->default_val(0.2)
        ->check(CLI::Range(0.0, 1.0));
    simulate->add_option("--attack", sim.attack, "none|intercept-resend|weak-mitm|strong-mitm")
        ->default_val("none");
    simulate->add_option("--rule", sim.rule, "physical|paper-literal")->default_val("physical");
    simulate->add_option("--policy", sim.policy, "abort|restart")->default_val("abort");
    simulate->add_option("--seed", sim.seed, "Master seed (required, no time-based default)")
        ->required();
    simulate->add_option("--trials", sim.trials, "Independent sessions")->default_val(1);
    simulate->add_option("--out", sim.out_dir, "Output directory for summary.json");
    simulate->add_flag("--transcripts", sim.transcripts, "Write per-session JSONL transcripts");
    simulate->add_flag("--fail-on-detect", sim.fail_on_detect,
                       "Exit with code 2 when any session detects Eve");
    simulate->add_option("--workers", sim.workers, "Parallel workers")->default_val(1);

    SweepArgs sweep;
    auto* sweep_cmd = app.add_subcommand("sweep", "Parameter sweep, one CSV row per grid point");
    sweep_cmd->add_option("--lambda-c", sweep.lambda_cs, "Control probabilities");
    sweep_cmd->add_option("--messages", sweep.messages, "Message lengths");
    sweep_cmd->add_option("--attack", sweep.attacks, "Attacks to sweep");
    sweep_cmd->add_option("--trials", sweep.trials, "Sessions per grid point")->default_val(1000);
    sweep_cmd->add_option("--seed", sweep.seed, "Master seed")->required();
    sweep_cmd->add_option("--out", sweep.out_csv, "CSV output path")->required();
    sweep_cmd->add_option("--workers", sweep.workers, "Parallel workers")->default_val(1);

    double verify_scale = 0.1;
    int verify_workers = 4;
    bool verify_fault = false;
    auto* verify_cmd = app.add_subcommand("verify", "Run the built-in verification suite");
    verify_cmd->add_option("--scale", verify_scale, "Trial-count scale factor")
        ->default_val(0.1)
        ->check(CLI::Range(0.001, 1.0));
    verify_cmd->add_option("--workers", verify_workers, "Parallel workers")->default_val(4);
    auto* fault_flag = verify_cmd->add_flag("--self-test-fault", verify_fault,
                                            "Corrupt the transform oracle to prove failures fail");
    fault_flag->group("");  // hidden

    auto* table_cmd = app.add_subcommand("table", "Print the transform and correlation tables");

    std::string replay_path;
    auto* replay_cmd = app.add_subcommand("replay", "Re-execute a transcript and compare");
    replay_cmd->add_option("path", replay_path, "Transcript JSONL file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (simulate->parsed()) return cmd_simulate(sim);
        if (sweep_cmd->parsed()) return cmd_sweep(sweep);
        if (verify_cmd->parsed()) return cmd_verify(verify_scale, verify_workers, verify_fault);
        if (table_cmd->parsed()) return cmd_table();
        if (replay_cmd->parsed()) return cmd_replay(replay_path);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitVerifyFail;
    }
    return kExitUsage;
}
