#include "pingpong/harness.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "pingpong/transcript.hpp"

namespace pingpong {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

// Everything aggregated across trials is an integer count, so the reduction
// is exact and independent of worker count and scheduling.
struct Aggregate {
    long long trials = 0;
    long long control_rounds = 0;
    long long detected_sessions = 0;
    long long undetected_sessions = 0;
    long long control_failures = 0;
    long long message_rounds_undetected = 0;
    long long classical_bits_undetected = 0;
    long long decoded_symbols = 0;
    long long decoded_errors = 0;
    long long eve_b_guesses = 0;
    long long eve_b_correct = 0;
    long long eve_a_guesses = 0;
    long long eve_a_correct = 0;
    std::array<std::array<long long, 4>, 4> joint_af{};
    std::map<int, SurvivalCell> survival;

    void absorb(const Aggregate& o) {
        trials += o.trials;
        control_rounds += o.control_rounds;
        detected_sessions += o.detected_sessions;
        control_failures += o.control_failures;
        undetected_sessions += o.undetected_sessions;
        message_rounds_undetected += o.message_rounds_undetected;
        classical_bits_undetected += o.classical_bits_undetected;
        decoded_symbols += o.decoded_symbols;
        decoded_errors += o.decoded_errors;
        eve_b_guesses += o.eve_b_guesses;
        eve_b_correct += o.eve_b_correct;
        eve_a_guesses += o.eve_a_guesses;
        eve_a_correct += o.eve_a_correct;
        for (int a = 0; a < 4; ++a)
            for (int f = 0; f < 4; ++f) joint_af[a][f] += o.joint_af[a][f];
        for (const auto& [nc, cell] : o.survival) {
            auto& mine = survival[nc];
            mine.trials += cell.trials;
            mine.survivors += cell.survivors;
        }
    }
};

std::unique_ptr<Adversary> make_adversary_for(const ExperimentSpec& spec) {
    switch (spec.attack) {
        case AttackKind::InterceptResend: return make_intercept_resend(spec.intercept_options);
        case AttackKind::WeakMitm: return make_weak_mitm(spec.mitm_options);
        case AttackKind::StrongMitm: return make_strong_mitm(spec.mitm_options);
        case AttackKind::NoEve: return make_no_eve();
    }
    throw std::invalid_argument("unknown attack kind");
}

void run_one_trial(const ExperimentSpec& spec, long long trial_index, Aggregate& agg) {
    std::uint64_t trial_seed = derive_trial_seed(spec.session_config.seed, trial_index);

    std::vector<BellIndex> message;
    if (spec.fixed_message) {
        message = *spec.fixed_message;
    } else {
        RandomSource msg_rng(splitmix64(trial_seed ^ 0xC2B2AE3D27D4EB4Full));
        message.reserve(spec.session_config.n_messages);
        for (int i = 0; i < spec.session_config.n_messages; ++i)
            message.push_back(static_cast<BellIndex>(msg_rng.uniform_int(4)));
    }

    SessionConfig config = spec.session_config;
    config.seed = trial_seed;
    if (spec.attack == AttackKind::StrongMitm) config.allow_channel_rewriting = true;

    auto adversary = make_adversary_for(spec);
    SessionResult result = run_session(config, message, *adversary);

    agg.trials += 1;
    agg.control_rounds += result.counters.control_rounds;
    if (result.detected) {
        agg.detected_sessions += 1;
    } else {
        agg.undetected_sessions += 1;
        agg.message_rounds_undetected += result.counters.message_rounds;
        agg.classical_bits_undetected += result.counters.classical_bits;
        agg.decoded_symbols += static_cast<long long>(result.bob_decoded.size());
        for (std::size_t i = 0; i < result.bob_decoded.size(); ++i)
            if (result.bob_decoded[i] != message[i]) agg.decoded_errors += 1;
    }

    auto& cell = agg.survival[static_cast<int>(result.counters.control_rounds)];
    cell.trials += 1;
    if (!result.detected) cell.survivors += 1;

    for (const RoundRecord& r : result.transcript) {
        if (r.mode == RoundMode::Message && r.f_n) agg.joint_af[r.a_n][*r.f_n] += 1;
        if (r.mode == RoundMode::Control && r.control && !r.control->verdict_pass)
            agg.control_failures += 1;
    }

    const EveReport& eve = result.eve_report;
    agg.eve_b_guesses += eve.b_guesses;
    agg.eve_b_correct += std::llround(eve.b_pairclass_accuracy * static_cast<double>(eve.b_guesses));
    agg.eve_a_guesses += eve.a_guesses;
    agg.eve_a_correct += std::llround(eve.a_recovery_accuracy * static_cast<double>(eve.a_guesses));

    if (spec.write_transcripts && !spec.output_path.empty()) {
        std::ostringstream name;
        name << "transcript_" << trial_index << ".jsonl";
        std::filesystem::path p = std::filesystem::path(spec.output_path) / name.str();
        std::ofstream out(p);
        if (!out) throw std::runtime_error("cannot open transcript output " + p.string());
        write_transcript(out, config, spec.attack, message, result);
    }
}

double mi_from_counts(const std::array<std::array<long long, 4>, 4>& joint) {
    long long total = 0;
    std::array<long long, 4> row{}, col{};
    for (int a = 0; a < 4; ++a)
        for (int f = 0; f < 4; ++f) {
            total += joint[a][f];
            row[a] += joint[a][f];
            col[f] += joint[a][f];
        }
    if (total == 0) return 0.0;
    double mi = 0.0;
    for (int a = 0; a < 4; ++a)
        for (int f = 0; f < 4; ++f) {
            if (joint[a][f] == 0) continue;
            double paf = static_cast<double>(joint[a][f]) / static_cast<double>(total);
            double pa = static_cast<double>(row[a]) / static_cast<double>(total);
            double pf = static_cast<double>(col[f]) / static_cast<double>(total);
            mi += paf * std::log2(paf / (pa * pf));
        }
    return mi;
}

// Regularized incomplete gamma, upper tail (series + continued fraction).
double gamma_q(double a, double x) {
    if (x < 0.0 || a <= 0.0) throw std::invalid_argument("gamma_q domain");
    if (x == 0.0) return 1.0;
    double gln = std::lgamma(a);
    if (x < a + 1.0) {
        double ap = a, sum = 1.0 / a, del = sum;
        for (int i = 0; i < 500; ++i) {
            ap += 1.0;
            del *= x / ap;
            sum += del;
            if (std::abs(del) < std::abs(sum) * 1e-15) break;
        }
        return 1.0 - sum * std::exp(-x + a * std::log(x) - gln);
    }
    double b = x + 1.0 - a, c = 1e300, d = 1.0 / b, h = d;
    for (int i = 1; i <= 500; ++i) {
        double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < 1e-300) d = 1e-300;
        c = b + an / c;
        if (std::abs(c) < 1e-300) c = 1e-300;
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < 1e-15) break;
    }
    return std::exp(-x + a * std::log(x) - gln) * h;
}

Aggregate run_trials(const ExperimentSpec& spec, long long first, long long count) {
    Aggregate agg;
    for (long long i = 0; i < count; ++i) run_one_trial(spec, first + i, agg);
    return agg;
}

Aggregate run_all_trials(const ExperimentSpec& spec) {
    int workers = std::max(1, spec.workers);
    if (workers == 1 || spec.trials < 2) return run_trials(spec, 0, spec.trials);

    long long chunk = (spec.trials + workers - 1) / workers;
    std::vector<Aggregate> parts(static_cast<std::size_t>(workers));
    std::vector<std::thread> threads;
    for (int w = 0; w < workers; ++w) {
        long long first = static_cast<long long>(w) * chunk;
        long long count = std::min(chunk, spec.trials - first);
        if (count <= 0) break;
        threads.emplace_back([&spec, &parts, w, first, count] {
            parts[static_cast<std::size_t>(w)] = run_trials(spec, first, count);
        });
    }
    for (auto& t : threads) t.join();

    Aggregate total;
    for (const Aggregate& p : parts) total.absorb(p);  // ordered reduction
    return total;
}

}  // namespace

std::uint64_t derive_trial_seed(std::uint64_t master_seed, long long trial_index) {
    return splitmix64(master_seed ^
                      splitmix64(static_cast<std::uint64_t>(trial_index) * 0x9E3779B97F4A7C15ull +
                                 0x2545F4914F6CDD1Dull));
}

SummaryStats run_experiment(const ExperimentSpec& spec) {
    if (spec.trials < 1) throw std::invalid_argument("trials must be >= 1");
    if (!spec.output_path.empty()) {
        std::error_code ec;
        std::filesystem::create_directories(spec.output_path, ec);
        if (ec) throw std::runtime_error("cannot create output directory " + spec.output_path);
    }

    Aggregate agg = run_all_trials(spec);

    SummaryStats s;
    s.trials = agg.trials;
    s.control_rounds_total = agg.control_rounds;
    s.detections = agg.control_failures;
    s.detected_sessions = agg.detected_sessions;
    s.undetected_sessions = agg.undetected_sessions;
    if (agg.control_rounds > 0) {
        double p = static_cast<double>(agg.control_failures) /
                   static_cast<double>(agg.control_rounds);
        s.detection_rate_per_control = p;
        s.detection_rate_stderr =
            std::sqrt(p * (1.0 - p) / static_cast<double>(agg.control_rounds));
    }
    s.survival_by_ncontrol = agg.survival;
    for (auto& [nc, cell] : s.survival_by_ncontrol)
        cell.fraction = cell.trials > 0
                            ? static_cast<double>(cell.survivors) / static_cast<double>(cell.trials)
                            : 0.0;

    long long mi_total = 0;
    for (int a = 0; a < 4; ++a)
        for (int f = 0; f < 4; ++f) mi_total += agg.joint_af[a][f];
    s.mi_pairs = mi_total;
    s.mi_a_f = mi_from_counts(agg.joint_af);
    for (int a = 0; a < 4; ++a) {
        std::array<long long, 4> counts{};
        for (int f = 0; f < 4; ++f) counts[f] = agg.joint_af[a][f];
        s.chi2_f_uniformity[a] = chi_square_uniform(counts);
    }

    if (agg.message_rounds_undetected > 0) {
        Rates r = compute_rates({2 * agg.message_rounds_undetected, 2 * agg.decoded_symbols,
                                 agg.classical_bits_undetected});
        s.rq = r.rq;
        s.rtot = r.rtot;
    }
    if (agg.decoded_symbols > 0)
        s.bob_symbol_error_rate =
            static_cast<double>(agg.decoded_errors) / static_cast<double>(agg.decoded_symbols);
    if (agg.eve_b_guesses > 0)
        s.eve_b_pairclass_accuracy =
            static_cast<double>(agg.eve_b_correct) / static_cast<double>(agg.eve_b_guesses);
    if (agg.eve_a_guesses > 0)
        s.eve_a_recovery_accuracy =
            static_cast<double>(agg.eve_a_correct) / static_cast<double>(agg.eve_a_guesses);
    return s;
}

double estimate_mutual_information(
    const std::vector<std::pair<BellIndex, BellIndex>>& pairs) {
    if (pairs.size() < 1000)
        throw std::invalid_argument("mutual information estimate needs at least 1000 pairs");
    std::array<std::array<long long, 4>, 4> joint{};
    for (const auto& [a, f] : pairs) {
        if (a < 0 || a > 3 || f < 0 || f > 3)
            throw std::invalid_argument("pair value out of range");
        joint[a][f] += 1;
    }
    return mi_from_counts(joint);
}

double chi_square_uniform(const std::array<long long, 4>& counts) {
    long long total = counts[0] + counts[1] + counts[2] + counts[3];
    if (total == 0) return 0.0;
    double expected = static_cast<double>(total) / 4.0;
    double stat = 0.0;
    for (long long c : counts) {
        double d = static_cast<double>(c) - expected;
        stat += d * d / expected;
    }
    return stat;
}

double chi_square_pvalue(double statistic, int dof) {
    if (dof < 1) throw std::invalid_argument("dof must be >= 1");
    if (statistic <= 0.0) return 1.0;
    return gamma_q(static_cast<double>(dof) / 2.0, statistic / 2.0);
}

std::vector<std::pair<int, double>> survival_curve(AttackKind attack, double lambda_c,
                                                   int max_controls, long long trials,
                                                   std::uint64_t seed, int workers) {
    (void)lambda_c;  // conditioning on exact N_c sharpens the lambda_c*N law
    std::vector<std::pair<int, double>> curve;
    for (int nc = 0; nc <= max_controls; ++nc) {
        ExperimentSpec spec;
        spec.trials = trials;
        spec.attack = attack;
        spec.workers = workers;
        spec.session_config.n_messages = 2;
        spec.session_config.seed = splitmix64(seed ^ (static_cast<std::uint64_t>(nc) + 1));
        std::vector<int> schedule(static_cast<std::size_t>(nc));
        for (int i = 0; i < nc; ++i) schedule[static_cast<std::size_t>(i)] = i;
        spec.session_config.forced_control_schedule = schedule;
        SummaryStats stats = run_experiment(spec);
        double fraction = static_cast<double>(stats.undetected_sessions) /
                          static_cast<double>(stats.trials);
        curve.emplace_back(nc, fraction);
    }
    return curve;
}

LinearFit fit_line(const std::vector<std::pair<double, double>>& points) {
    if (points.size() < 2) throw std::invalid_argument("fit needs at least two points");
    double n = static_cast<double>(points.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    for (const auto& [x, y] : points) {
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        syy += y * y;
    }
    double denom = n * sxx - sx * sx;
    LinearFit fit;
    fit.slope = (n * sxy - sx * sy) / denom;
    fit.intercept = (sy - fit.slope * sx) / n;
    double ss_tot = syy - sy * sy / n;
    double ss_res = 0.0;
    for (const auto& [x, y] : points) {
        double r = y - (fit.slope * x + fit.intercept);
        ss_res += r * r;
    }
    fit.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
    return fit;
}

void write_summary_json(const std::string& path, const ExperimentSpec& spec,
                        const SummaryStats& stats) {
    nlohmann::json j;
    j["trials"] = stats.trials;
    j["attack"] = attack_name(spec.attack);
    j["lambda_c"] = spec.session_config.lambda_c;
    j["n_messages"] = spec.session_config.n_messages;
    j["seed"] = spec.session_config.seed;
    j["control_rounds_total"] = stats.control_rounds_total;
    j["detections"] = stats.detections;
    j["detection_rate_per_control"] = stats.detection_rate_per_control;
    j["detection_rate_stderr"] = stats.detection_rate_stderr;
    nlohmann::json survival = nlohmann::json::object();
    for (const auto& [nc, cell] : stats.survival_by_ncontrol)
        survival[std::to_string(nc)] = {{"trials", cell.trials},
                                        {"survivors", cell.survivors},
                                        {"fraction", cell.fraction}};
    j["survival_by_ncontrol"] = survival;
    j["mi_a_f"] = stats.mi_a_f;
    j["mi_pairs"] = stats.mi_pairs;
    j["chi2_f_uniformity"] = stats.chi2_f_uniformity;
    j["rq"] = stats.rq;
    j["rtot"] = stats.rtot;
    j["bob_symbol_error_rate"] = stats.bob_symbol_error_rate;
    j["eve_accuracy"] = {{"b_pairclass", stats.eve_b_pairclass_accuracy},
                         {"a_recovery", stats.eve_a_recovery_accuracy}};
    j["detected_sessions"] = stats.detected_sessions;
    j["undetected_sessions"] = stats.undetected_sessions;

    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open summary output " + path);
    out << j.dump(2) << '\n';
}

}  // namespace pingpong
