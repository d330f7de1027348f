#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pingpong/adversary.hpp"
#include "pingpong/protocol.hpp"

namespace pingpong {

struct ExperimentSpec {
    long long trials = 1;
    SessionConfig session_config;
    AttackKind attack = AttackKind::NoEve;
    // When set, every trial sends this message; otherwise each trial draws a
    // uniform random message from its own seed stream.
    std::optional<std::vector<BellIndex>> fixed_message;
    std::string output_path;       // directory; empty = no files written
    bool write_transcripts = false;
    int workers = 1;
    InterceptResendOptions intercept_options;
    MitmOptions mitm_options;
};

struct SurvivalCell {
    long long trials = 0;
    long long survivors = 0;
    double fraction = 0.0;
};

struct SummaryStats {
    long long trials = 0;
    long long control_rounds_total = 0;
    long long detections = 0;
    double detection_rate_per_control = 0.0;
    double detection_rate_stderr = 0.0;
    std::map<int, SurvivalCell> survival_by_ncontrol;
    double mi_a_f = 0.0;
    long long mi_pairs = 0;
    std::array<double, 4> chi2_f_uniformity{};  // per fixed a
    double rq = 0.0;
    double rtot = 0.0;
    double bob_symbol_error_rate = 0.0;
    double eve_b_pairclass_accuracy = 0.0;
    double eve_a_recovery_accuracy = 0.0;
    long long detected_sessions = 0;
    long long undetected_sessions = 0;
};

// Deterministic mixing of (master seed, trial index); parallel order cannot
// change results because each trial owns the full seed derivation.
std::uint64_t derive_trial_seed(std::uint64_t master_seed, long long trial_index);

SummaryStats run_experiment(const ExperimentSpec& spec);

// Plug-in estimate over the 4x4 empirical joint distribution, in bits.
double estimate_mutual_information(const std::vector<std::pair<BellIndex, BellIndex>>& pairs);

// Chi-square statistic of `counts` against the uniform distribution.
double chi_square_uniform(const std::array<long long, 4>& counts);

// Upper tail probability of the chi-square distribution.
double chi_square_pvalue(double statistic, int dof);

// Undetected fraction conditioned on an exact forced control-round count,
// for N_c = 0..max_controls.
std::vector<std::pair<int, double>> survival_curve(AttackKind attack, double lambda_c,
                                                   int max_controls, long long trials,
                                                   std::uint64_t seed, int workers = 1);

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
};

LinearFit fit_line(const std::vector<std::pair<double, double>>& points);

void write_summary_json(const std::string& path, const ExperimentSpec& spec,
                        const SummaryStats& stats);

}  // namespace pingpong
