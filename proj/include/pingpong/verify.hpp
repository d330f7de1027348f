#pragma once

#include <string>
#include <vector>

namespace pingpong {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;
};

struct VerifyOptions {
    // Scales Monte Carlo trial counts; statistical tolerances widen by
    // 1/sqrt(scale) so reduced runs stay meaningful.
    double scale = 1.0;
    int workers = 1;
    // Test hook: corrupts the expected table in the transform-oracle check.
    bool inject_table_fault = false;
};

std::vector<CriterionResult> run_acceptance(const VerifyOptions& options);

}  // namespace pingpong
