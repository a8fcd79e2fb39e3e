#include "ctrain/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace ctrain {

FiveNumberSummary summarize(std::vector<double> values) {
    if (values.empty()) throw std::invalid_argument("cannot summarize an empty list");
    std::sort(values.begin(), values.end());

    const auto quantile = [&](double q) {
        const double h = q * static_cast<double>(values.size() - 1);
        const auto lo = static_cast<std::size_t>(std::floor(h));
        const auto hi = std::min(lo + 1, values.size() - 1);
        const double frac = h - static_cast<double>(lo);
        return values[lo] + frac * (values[hi] - values[lo]);
    };

    FiveNumberSummary s;
    s.min = values.front();
    s.q1 = quantile(0.25);
    s.median = quantile(0.5);
    s.q3 = quantile(0.75);
    s.max = values.back();
    return s;
}

namespace {

// Fixed child-stream indices of a trial seed.
enum Stream : std::uint64_t {
    kInject = 0,
    kSplit = 1,
    kUsualInit = 2,
    kBuild = 3,
    kContingencyInit = 4,
};

}  // namespace

TrialResult run_trial(const RawDataset& d, const TrialConfig& cfg, int trial_index) {
    TrialResult result;
    result.trial_index = trial_index;
    result.seed = derive_seed(cfg.master_seed, static_cast<std::uint64_t>(trial_index));

    try {
        const RawDataset* active = &d;
        RawDataset injected;
        if (cfg.irrelevant_count > 0) {
            Rng rng(derive_seed(result.seed, kInject));
            injected = inject_irrelevant_variables(
                d, static_cast<std::size_t>(cfg.irrelevant_count), rng);
            active = &injected;
        }

        Rng split_rng(derive_seed(result.seed, kSplit));
        const SplitPair split = train_test_split(*active, cfg.train_fraction, split_rng);
        result.test_indices = split.test_indices;

        {
            MlpConfig usual_cfg = cfg.mlp;
            usual_cfg.n_inputs = static_cast<int>(active->nv());
            usual_cfg.n_outputs = active->n_classes;
            TrainingData data{split.train.features,
                              one_hot(split.train.labels, active->n_classes)};
            Rng init_rng(derive_seed(result.seed, kUsualInit));
            const TrainingOutcome outcome = train_bfgs(usual_cfg, data, init_rng);
            result.usual_converged = outcome.converged;
            result.usual_reason = outcome.reason;
            result.accuracy_usual =
                accuracy(outcome.parameters, split.test.features, split.test.labels);
        }

        {
            Rng build_rng(derive_seed(result.seed, kBuild));
            const EncodedDataset train_enc =
                build_contingency_dataset(split.train, cfg.spec, build_rng);

            MlpConfig cont_cfg = cfg.mlp;
            cont_cfg.n_inputs = static_cast<int>(2 * active->nv());
            cont_cfg.n_outputs = active->n_classes;
            TrainingData data{encoded_inputs(train_enc),
                              one_hot(encoded_labels(train_enc), active->n_classes)};
            Rng init_rng(derive_seed(result.seed, kContingencyInit));
            const TrainingOutcome outcome = train_bfgs(cont_cfg, data, init_rng);
            result.contingency_converged = outcome.converged;
            result.contingency_reason = outcome.reason;

            const EncodedDataset test_enc = encode_plain(split.test);
            result.accuracy_contingency = accuracy(
                outcome.parameters, encoded_inputs(test_enc), split.test.labels);
        }
    } catch (const std::exception& err) {
        result.failed = true;
        result.error = err.what();
    }
    return result;
}

SummaryReport run_experiment(const RawDataset& d, const TrialConfig& cfg) {
    if (cfg.n_trials < 1) throw std::invalid_argument("n_trials must be >= 1");
    if (!(cfg.train_fraction > 0.0 && cfg.train_fraction < 1.0))
        throw std::invalid_argument("train fraction must be in (0, 1)");

    SummaryReport report;
    report.trials.resize(static_cast<std::size_t>(cfg.n_trials));

    const int jobs = std::max(1, cfg.jobs);
    if (jobs == 1) {
        for (int i = 0; i < cfg.n_trials; ++i)
            report.trials[static_cast<std::size_t>(i)] = run_trial(d, cfg, i);
    } else {
        std::atomic<int> next{0};
        std::vector<std::thread> workers;
        const int worker_count = std::min(jobs, cfg.n_trials);
        workers.reserve(static_cast<std::size_t>(worker_count));
        for (int w = 0; w < worker_count; ++w) {
            workers.emplace_back([&] {
                while (true) {
                    const int i = next.fetch_add(1);
                    if (i >= cfg.n_trials) break;
                    report.trials[static_cast<std::size_t>(i)] = run_trial(d, cfg, i);
                }
            });
        }
        for (auto& worker : workers) worker.join();
    }

    std::vector<double> usual, contingency;
    for (const auto& trial : report.trials) {
        if (trial.failed) {
            ++report.failed_trials;
            continue;
        }
        usual.push_back(trial.accuracy_usual);
        contingency.push_back(trial.accuracy_contingency);
    }
    if (usual.empty())
        throw std::runtime_error("every trial failed; first error: " +
                                 report.trials.front().error);

    report.usual = summarize(usual);
    report.contingency = summarize(contingency);
    report.median_improvement = report.contingency.median - report.usual.median;
    return report;
}

}  // namespace ctrain
