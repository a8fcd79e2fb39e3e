#include "ctrain/report.hpp"

#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "ctrain/text.hpp"

namespace ctrain {

namespace {

using Json = nlohmann::ordered_json;

Json config_json(const TrialConfig& cfg, const std::string& extra_json) {
    Json config;
    config["dataset_id"] = cfg.dataset_id;
    config["spec"] = format_spec(cfg.spec);
    config["trials"] = cfg.n_trials;
    config["train_fraction"] = cfg.train_fraction;
    config["irrelevant"] = cfg.irrelevant_count;
    config["seed"] = cfg.master_seed;
    config["jobs"] = cfg.jobs;
    config["mlp"] = Json{
        {"hidden", cfg.mlp.n_hidden},
        {"weight_decay", cfg.mlp.weight_decay},
        {"init_range", cfg.mlp.init_range},
        {"max_iterations", cfg.mlp.max_iterations},
        {"loss", to_string(cfg.mlp.loss)},
    };
    const Json extra = Json::parse(extra_json);
    if (!extra.is_object())
        throw std::invalid_argument("extra config JSON must be an object");
    for (const auto& [key, value] : extra.items()) config[key] = value;
    return config;
}

Json summary_json(const FiveNumberSummary& s) {
    return Json{{"min", s.min}, {"q1", s.q1}, {"median", s.median},
                {"q3", s.q3},   {"max", s.max}};
}

}  // namespace

std::string config_to_json(const TrialConfig& cfg, const std::string& extra_json) {
    return config_json(cfg, extra_json).dump(2);
}

std::string report_to_json(const TrialConfig& cfg, const SummaryReport& report,
                           const std::string& extra_config_json) {
    Json doc;
    doc["config"] = config_json(cfg, extra_config_json);

    Json trials = Json::array();
    for (const auto& trial : report.trials) {
        Json row;
        row["index"] = trial.trial_index;
        row["seed"] = trial.seed;
        if (trial.failed) {
            row["failed"] = true;
            row["error"] = trial.error;
        } else {
            row["acc_usual"] = trial.accuracy_usual;
            row["acc_contingency"] = trial.accuracy_contingency;
            row["usual_converged"] = trial.usual_converged;
            row["contingency_converged"] = trial.contingency_converged;
            row["usual_termination"] = to_string(trial.usual_reason);
            row["contingency_termination"] = to_string(trial.contingency_reason);
        }
        trials.push_back(std::move(row));
    }
    doc["trials"] = std::move(trials);

    doc["summary"] = Json{
        {"usual", summary_json(report.usual)},
        {"contingency", summary_json(report.contingency)},
        {"median_improvement", report.median_improvement},
        {"failed_trials", report.failed_trials},
    };
    return doc.dump(2) + "\n";
}

void write_report(const std::filesystem::path& path, const TrialConfig& cfg,
                  const SummaryReport& report, const std::string& extra_config_json) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write report: " + path.string());
    out << report_to_json(cfg, report, extra_config_json);
    if (!out) throw std::runtime_error("report write failed: " + path.string());
}

std::string trials_to_csv(const SummaryReport& report) {
    std::string csv =
        "index,seed,acc_usual,acc_contingency,usual_converged,contingency_converged,failed\n";
    for (const auto& trial : report.trials) {
        csv += std::to_string(trial.trial_index) + ',' + std::to_string(trial.seed) + ',';
        if (trial.failed) {
            csv += ",,,,1\n";
        } else {
            csv += format_double(trial.accuracy_usual) + ',' +
                   format_double(trial.accuracy_contingency) + ',' +
                   (trial.usual_converged ? "1" : "0") + ',' +
                   (trial.contingency_converged ? "1" : "0") + ",0\n";
        }
    }
    return csv;
}

void write_trials_csv(const std::filesystem::path& path, const SummaryReport& report) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write trial CSV: " + path.string());
    out << trials_to_csv(report);
    if (!out) throw std::runtime_error("trial CSV write failed: " + path.string());
}

}  // namespace ctrain
