#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "ctrain/augment.hpp"
#include "ctrain/dataset.hpp"
#include "ctrain/mlp.hpp"

namespace ctrain {

struct TrialConfig {
    std::string dataset_id;
    AugmentationSpec spec;
    int n_trials = 100;
    double train_fraction = 0.75;
    int irrelevant_count = 0;       // injected per trial from the trial seed
    std::uint64_t master_seed = 0;
    MlpConfig mlp;                  // n_inputs/n_outputs are set per arm
    int jobs = 1;
};

/// One paired trial: the same split evaluated under both training arms.
/// A trial whose training threw (non-finite objective and the like) is
/// flagged `failed` and kept in the list; non-converged arms are retained
/// with their accuracies and flags.
struct TrialResult {
    int trial_index = 0;
    std::uint64_t seed = 0;
    double accuracy_usual = std::numeric_limits<double>::quiet_NaN();
    double accuracy_contingency = std::numeric_limits<double>::quiet_NaN();
    bool usual_converged = false;
    bool contingency_converged = false;
    Termination usual_reason = Termination::MaxIterations;
    Termination contingency_reason = Termination::MaxIterations;
    bool failed = false;
    std::string error;
    std::vector<Eigen::Index> test_indices;  // rows both arms were scored on
};

struct FiveNumberSummary {
    double min = 0.0;
    double q1 = 0.0;
    double median = 0.0;
    double q3 = 0.0;
    double max = 0.0;
};

/// Boxplot statistics with linearly interpolated quartiles (the type-7
/// order-statistic convention). Throws on empty input.
FiveNumberSummary summarize(std::vector<double> values);

struct SummaryReport {
    std::vector<TrialResult> trials;
    FiveNumberSummary usual;
    FiveNumberSummary contingency;
    double median_improvement = 0.0;  // median_contingency - median_usual
    int failed_trials = 0;
};

/// Runs one paired trial. The trial seed is derived from
/// (master_seed, trial_index); irrelevant variables, the split, weight
/// initializations and dataset corruption each consume an independent
/// child stream, so results do not depend on evaluation order.
TrialResult run_trial(const RawDataset& d, const TrialConfig& cfg, int trial_index);

/// Runs cfg.n_trials independent trials, optionally across cfg.jobs worker
/// threads; the report is identical regardless of scheduling. Summaries are
/// computed over non-failed trials; throws only if every trial failed.
SummaryReport run_experiment(const RawDataset& d, const TrialConfig& cfg);

}  // namespace ctrain
