#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "config.hpp"

namespace papal::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;

std::string version_string();

nlohmann::json schedule_report(double lambda1, double lambda2, double lipschitz_grad, int dim,
                               double epsilon, int J, long long T, double delta,
                               double lipschitz_value, double constant);

// Runs one experiment and writes trace.csv, summary.json and optional
// checkpoints into spec.out_dir. Returns the summary.
nlohmann::json run_experiment(const ExperimentSpec& spec, const ConfigMap& inputs);

// Full command line: `papal run|schedule-report [options]`. Returns the exit code.
int main_entry(const std::vector<std::string>& args);

}  // namespace papal::cli
