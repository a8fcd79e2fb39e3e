// Command-line driver: dataset augmentation, paired experiments, and a
// single-model train/predict workflow around the core library.
//
// Exit codes: 0 success, 1 runtime or data failure, 2 argument or grammar
// failure.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "ctrain/augment.hpp"
#include "ctrain/dataset.hpp"
#include "ctrain/experiment.hpp"
#include "ctrain/mlp.hpp"
#include "ctrain/model_io.hpp"
#include "ctrain/report.hpp"
#include "ctrain/text.hpp"
#include "ctrain/version.hpp"

namespace {

using Json = nlohmann::ordered_json;

// Thrown while resolving arguments; maps to exit code 2.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DataArgs {
    std::string path;
    std::string label_col;
    std::string drop_cols;
    bool scale = false;
};

void add_data_flags(CLI::App& cmd, DataArgs& args, bool with_scale = true) {
    cmd.add_option("--data", args.path, "Input CSV file")->required();
    cmd.add_option("--label-col", args.label_col,
                   "Label column, by header name or 0-based index (default: last)");
    cmd.add_option("--drop-cols", args.drop_cols,
                   "Comma-separated columns to remove before loading");
    if (with_scale)
        cmd.add_flag("--scale", args.scale, "Min-max rescale features to [0,1]");
}

ctrain::CsvSchema resolve_schema(const DataArgs& args) {
    auto schema = ctrain::CsvSchema::with_defaults();
    if (!args.label_col.empty()) schema.label = ctrain::ColumnRef::parse(args.label_col);
    if (!args.drop_cols.empty())
        for (const auto& part : ctrain::split(args.drop_cols, ','))
            schema.drop.push_back(ctrain::ColumnRef::parse(part));
    return schema;
}

ctrain::RawDataset load_data(const DataArgs& args) {
    auto d = ctrain::load_csv(args.path, resolve_schema(args));
    if (args.scale) d = ctrain::scale_min_max(d);
    return d;
}

ctrain::AugmentationSpec resolve_spec(const std::string& text,
                                      std::optional<double> prob_override) {
    auto spec = ctrain::parse_spec(text);
    if (prob_override) {
        if (!(*prob_override >= 0.0 && *prob_override <= 1.0))
            throw UsageError("--prob-override must be in [0, 1], got " +
                             ctrain::format_double(*prob_override));
        spec.missing_prob = *prob_override;
    }
    return spec;
}

std::string iso_timestamp() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

Json data_json(const DataArgs& args) {
    return Json{{"data", args.path},
                {"label_col", args.label_col},
                {"drop_cols", args.drop_cols},
                {"scale", args.scale}};
}

// The manifest sidecar carries the resolved configuration plus tool
// version and timestamp; the config object matches what the outputs echo.
void emit_manifest(const std::string& command, const Json& config,
                   const std::string& out_path) {
    Json manifest;
    manifest["command"] = command;
    manifest["version"] = std::string(ctrain::kVersion);
    manifest["timestamp"] = iso_timestamp();
    manifest["config"] = config;
    if (out_path.empty()) {
        std::cerr << manifest.dump(2) << '\n';
        return;
    }
    const std::string path = out_path + ".manifest.json";
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write manifest: " + path);
    out << manifest.dump(2) << '\n';
}

struct AugmentArgs {
    DataArgs data;
    std::string spec_text;
    std::optional<double> prob_override;
    int irrelevant = 0;
    std::uint64_t seed = 0;
    bool seed_given = false;
    std::string out;
};

int run_augment(const AugmentArgs& args) {
    const auto spec = resolve_spec(args.spec_text, args.prob_override);

    auto d = load_data(args.data);
    if (args.irrelevant > 0) {
        ctrain::Rng rng(ctrain::derive_seed(args.seed, 0));
        d = ctrain::inject_irrelevant_variables(
            d, static_cast<std::size_t>(args.irrelevant), rng);
    }
    ctrain::Rng rng(ctrain::derive_seed(args.seed, 1));
    const auto encoded = ctrain::build_contingency_dataset(d, spec, rng);
    ctrain::write_encoded_csv(args.out, encoded);

    Json config = data_json(args.data);
    config["spec"] = ctrain::format_spec(spec);
    config["irrelevant"] = args.irrelevant;
    config["seed"] = args.seed;
    config["out"] = args.out;
    emit_manifest("augment", config, args.out);

    std::cout << "wrote " << args.out << ": " << encoded.rows.size() << " rows, "
              << (2 * encoded.nv + 1) << " columns\n";
    return 0;
}

struct ExperimentArgs {
    DataArgs data;
    std::string spec_text;
    std::optional<double> prob_override;
    int irrelevant = 0;
    int trials = 100;
    double split = 0.75;
    std::uint64_t seed = 0;
    int jobs = 1;
    int hidden = 15;
    double decay = 1e-4;
    long max_iter = 500;
    std::string loss = "sse";
    std::string out;
    std::string csv_out;
};

int run_experiment_cmd(const ExperimentArgs& args) {
    ctrain::TrialConfig cfg;
    cfg.dataset_id = std::filesystem::path(args.data.path).stem().string();
    cfg.spec = resolve_spec(args.spec_text, args.prob_override);
    cfg.n_trials = args.trials;
    cfg.train_fraction = args.split;
    cfg.irrelevant_count = args.irrelevant;
    cfg.master_seed = args.seed;
    cfg.jobs = args.jobs;
    cfg.mlp.n_hidden = args.hidden;
    cfg.mlp.weight_decay = args.decay;
    cfg.mlp.max_iterations = args.max_iter;
    cfg.mlp.loss = ctrain::parse_loss(args.loss);

    const std::string extra = Json{{"source", data_json(args.data)}}.dump();

    const auto d = load_data(args.data);
    const auto report = ctrain::run_experiment(d, cfg);

    if (!args.out.empty()) ctrain::write_report(args.out, cfg, report, extra);
    emit_manifest("experiment", Json::parse(ctrain::config_to_json(cfg, extra)),
                  args.out);
    if (!args.csv_out.empty()) ctrain::write_trials_csv(args.csv_out, report);

    std::cout << "median usual " << ctrain::format_double(report.usual.median)
              << ", median contingency "
              << ctrain::format_double(report.contingency.median)
              << ", median improvement "
              << ctrain::format_double(report.median_improvement) << '\n';
    if (report.failed_trials > 0)
        std::cout << report.failed_trials << " trial(s) failed; see report\n";
    return 0;
}

struct TrainArgs {
    DataArgs data;
    std::string spec_text;
    std::optional<double> prob_override;
    int irrelevant = 0;
    std::uint64_t seed = 0;
    int hidden = 15;
    double decay = 1e-4;
    long max_iter = 500;
    std::string loss = "sse";
    std::string out;
};

int run_train(const TrainArgs& args) {
    std::optional<ctrain::AugmentationSpec> spec;
    if (!args.spec_text.empty()) spec = resolve_spec(args.spec_text, args.prob_override);

    auto d = load_data(args.data);
    if (args.irrelevant > 0) {
        ctrain::Rng rng(ctrain::derive_seed(args.seed, 0));
        d = ctrain::inject_irrelevant_variables(
            d, static_cast<std::size_t>(args.irrelevant), rng);
    }

    ctrain::MlpConfig cfg;
    cfg.n_hidden = args.hidden;
    cfg.n_outputs = d.n_classes;
    cfg.weight_decay = args.decay;
    cfg.max_iterations = args.max_iter;
    cfg.loss = ctrain::parse_loss(args.loss);

    ctrain::TrainingData training;
    if (spec) {
        ctrain::Rng rng(ctrain::derive_seed(args.seed, 1));
        const auto encoded = ctrain::build_contingency_dataset(d, *spec, rng);
        cfg.n_inputs = static_cast<int>(2 * encoded.nv);
        training.inputs = ctrain::encoded_inputs(encoded);
        training.targets = ctrain::one_hot(ctrain::encoded_labels(encoded), d.n_classes);
    } else {
        cfg.n_inputs = static_cast<int>(d.nv());
        training.inputs = d.features;
        training.targets = ctrain::one_hot(d.labels, d.n_classes);
    }

    ctrain::Rng init_rng(ctrain::derive_seed(args.seed, 2));
    const auto outcome = ctrain::train_bfgs(cfg, training, init_rng);
    ctrain::save_model(args.out, {cfg, outcome.parameters});

    Json config = data_json(args.data);
    config["spec"] = spec ? ctrain::format_spec(*spec) : "";
    config["irrelevant"] = args.irrelevant;
    config["seed"] = args.seed;
    config["hidden"] = args.hidden;
    config["decay"] = args.decay;
    config["max_iter"] = args.max_iter;
    config["loss"] = args.loss;
    config["out"] = args.out;
    emit_manifest("train", config, args.out);

    std::cout << "wrote " << args.out << ": objective "
              << ctrain::format_double(outcome.final_objective) << " after "
              << outcome.iterations << " iterations ("
              << ctrain::to_string(outcome.reason) << ")\n";
    return 0;
}

struct PredictArgs {
    DataArgs data;
    std::string model_path;
    bool no_label = false;
    std::string out;
};

// Accepts either raw feature rows (model trained without masks) or raw rows
// for a mask-trained model, which are encoded with all-ones masks. Already
// encoded rows (width 2*nv) pass through unchanged.
int run_predict(const PredictArgs& args) {
    const auto model = ctrain::load_model(args.model_path);

    Eigen::MatrixXd features;
    std::vector<int> labels;
    bool have_labels = false;
    if (args.no_label) {
        // Feature-only file: reuse the loader by treating the first column as
        // a label would corrupt it, so parse manually.
        std::ifstream file(args.data.path);
        if (!file) throw std::runtime_error("cannot open dataset file: " + args.data.path);
        std::vector<std::vector<double>> rows;
        std::string line;
        bool first = true;
        while (std::getline(file, line)) {
            if (ctrain::trim(line).empty()) continue;
            const auto cells = ctrain::split(line, ',');
            std::vector<double> row;
            bool numeric = true;
            for (const auto& cell : cells) {
                const auto value = ctrain::parse_double(cell);
                if (!value) { numeric = false; break; }
                row.push_back(*value);
            }
            if (!numeric) {
                if (first) { first = false; continue; }  // header row
                throw std::runtime_error("non-numeric cell in feature file: " + line);
            }
            first = false;
            rows.push_back(std::move(row));
        }
        if (rows.empty()) throw std::runtime_error("no feature rows in " + args.data.path);
        features.resize(static_cast<Eigen::Index>(rows.size()),
                        static_cast<Eigen::Index>(rows.front().size()));
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (rows[r].size() != rows.front().size())
                throw std::runtime_error("ragged feature row in " + args.data.path);
            for (std::size_t c = 0; c < rows[r].size(); ++c)
                features(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                    rows[r][c];
        }
    } else {
        const auto d = load_data(args.data);
        features = d.features;
        labels = d.labels;
        have_labels = true;
    }

    Eigen::MatrixXd inputs;
    const auto width = features.cols();
    if (width == model.config.n_inputs) {
        inputs = features;
    } else if (2 * width == model.config.n_inputs) {
        inputs.resize(features.rows(), 2 * width);
        inputs.leftCols(width) = features;
        inputs.rightCols(width).setOnes();
    } else {
        throw std::runtime_error(
            "dimension mismatch: model expects " + std::to_string(model.config.n_inputs) +
            " inputs (or " + std::to_string(model.config.n_inputs / 2) +
            " raw features), data has " + std::to_string(width) + " columns");
    }

    std::ostream* sink = &std::cout;
    std::ofstream file;
    if (!args.out.empty()) {
        file.open(args.out, std::ios::binary);
        if (!file) throw std::runtime_error("cannot write predictions: " + args.out);
        sink = &file;
    }
    for (Eigen::Index r = 0; r < inputs.rows(); ++r) {
        const Eigen::VectorXd row = inputs.row(r);
        *sink << ctrain::predict(model.parameters, row) << '\n';
    }
    if (have_labels)
        std::cout << "accuracy "
                  << ctrain::format_double(
                         ctrain::accuracy(model.parameters, inputs, labels))
                  << '\n';

    if (!args.out.empty()) {
        Json config = data_json(args.data);
        config["model"] = args.model_path;
        config["out"] = args.out;
        emit_manifest("predict", config, args.out);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Contingency-style dataset augmentation and MLP experiments"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(ctrain::kVersion));

    AugmentArgs augment_args;
    auto* augment = app.add_subcommand(
        "augment", "Write the augmented, mask-encoded dataset as CSV");
    add_data_flags(*augment, augment_args.data);
    augment->add_option("--spec", augment_args.spec_text,
                        "Augmentation setting, e.g. 10A/0I/0.1")->required();
    double augment_prob = -1.0;
    auto* augment_prob_opt = augment->add_option(
        "--prob-override", augment_prob, "Replace the spec's missing probability");
    augment->add_option("--irrelevant", augment_args.irrelevant,
                        "Inject this many noise columns first")
        ->check(CLI::NonNegativeNumber);
    augment->add_option("--seed", augment_args.seed, "Master RNG seed")->required();
    augment->add_option("--out", augment_args.out, "Output CSV path")->required();

    ExperimentArgs exp_args;
    auto* experiment = app.add_subcommand(
        "experiment", "Paired usual-vs-contingency trials with summary statistics");
    add_data_flags(*experiment, exp_args.data);
    experiment->add_option("--spec", exp_args.spec_text, "Augmentation setting")
        ->required();
    double exp_prob = -1.0;
    auto* exp_prob_opt = experiment->add_option(
        "--prob-override", exp_prob, "Replace the spec's missing probability");
    experiment->add_option("--irrelevant", exp_args.irrelevant,
                           "Noise columns injected per trial")
        ->check(CLI::NonNegativeNumber);
    experiment->add_option("--trials", exp_args.trials, "Number of paired trials");
    experiment->add_option("--split", exp_args.split, "Train fraction (default 0.75)");
    experiment->add_option("--seed", exp_args.seed, "Master RNG seed")->required();
    experiment->add_option("--jobs", exp_args.jobs, "Parallel trial workers")
        ->check(CLI::PositiveNumber);
    experiment->add_option("--hidden", exp_args.hidden, "Hidden nodes (default 15)");
    experiment->add_option("--decay", exp_args.decay, "Weight decay (default 1e-4)");
    experiment->add_option("--max-iter", exp_args.max_iter,
                           "BFGS iteration cap (default 500)");
    experiment->add_option("--loss", exp_args.loss, "Loss kind")
        ->check(CLI::IsMember({"sse", "xent"}));
    experiment->add_option("--out", exp_args.out, "JSON report path");
    experiment->add_option("--csv-out", exp_args.csv_out, "Per-trial CSV path");

    TrainArgs train_args;
    auto* train = app.add_subcommand("train", "Train one model and save it");
    add_data_flags(*train, train_args.data);
    train->add_option("--spec", train_args.spec_text,
                      "Optional: train on the augmented dataset instead");
    double train_prob = -1.0;
    auto* train_prob_opt = train->add_option(
        "--prob-override", train_prob, "Replace the spec's missing probability");
    train->add_option("--irrelevant", train_args.irrelevant,
                      "Inject this many noise columns first")
        ->check(CLI::NonNegativeNumber);
    train->add_option("--seed", train_args.seed, "Master RNG seed")->required();
    train->add_option("--hidden", train_args.hidden, "Hidden nodes (default 15)");
    train->add_option("--decay", train_args.decay, "Weight decay (default 1e-4)");
    train->add_option("--max-iter", train_args.max_iter,
                      "BFGS iteration cap (default 500)");
    train->add_option("--loss", train_args.loss, "Loss kind")
        ->check(CLI::IsMember({"sse", "xent"}));
    train->add_option("--out", train_args.out, "Model file path")->required();

    PredictArgs predict_args;
    auto* predict = app.add_subcommand(
        "predict", "Emit class predictions from a saved model");
    add_data_flags(*predict, predict_args.data, /*with_scale=*/false);
    predict->add_option("--model", predict_args.model_path, "Model file from train")
        ->required();
    predict->add_flag("--no-label", predict_args.no_label,
                      "Input rows are features only, no label column");
    predict->add_option("--out", predict_args.out,
                        "Write predictions here instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << '\n';
        return 2;
    }

    try {
        // Resolve and range-check everything grammar-like before touching
        // any file, so bad arguments consistently exit 2.
        try {
            if (augment->parsed()) {
                if (augment_prob_opt->count()) augment_args.prob_override = augment_prob;
                resolve_spec(augment_args.spec_text, augment_args.prob_override);
            } else if (experiment->parsed()) {
                if (exp_prob_opt->count()) exp_args.prob_override = exp_prob;
                resolve_spec(exp_args.spec_text, exp_args.prob_override);
                if (exp_args.trials < 1) throw UsageError("--trials must be >= 1");
                if (!(exp_args.split > 0.0 && exp_args.split < 1.0))
                    throw UsageError("--split must be in (0, 1)");
            } else if (train->parsed()) {
                if (train_prob_opt->count()) train_args.prob_override = train_prob;
                if (!train_args.spec_text.empty())
                    resolve_spec(train_args.spec_text, train_args.prob_override);
            }
        } catch (const std::invalid_argument& e) {
            throw UsageError(e.what());
        }

        if (augment->parsed()) return run_augment(augment_args);
        if (experiment->parsed()) return run_experiment_cmd(exp_args);
        if (train->parsed()) return run_train(train_args);
        if (predict->parsed()) return run_predict(predict_args);
        return 2;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
