#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace rbm {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool passed = false;
    std::string detail; // deterministic summary of the measured quantities
    double seconds = 0.0;
};

struct VerifyOptions {
    std::uint64_t seed = 42;
    std::uint64_t paths = 200000;
    unsigned threads = 1;
};

CriterionResult check_closed_forms();
CriterionResult check_identities(std::uint64_t seed);
CriterionResult check_mc_closed_forms_and_tails(const VerifyOptions& options,
                                                CriterionResult& tails);
CriterionResult check_density_vs_law();
CriterionResult check_coincidence();
CriterionResult check_regime_thresholds(std::uint64_t seed);
CriterionResult check_harmonicity_suite();
CriterionResult check_covariance(const VerifyOptions& options);

/// Criteria 1 to 9 in order.
std::vector<CriterionResult> run_acceptance(const VerifyOptions& options);

} // namespace rbm
