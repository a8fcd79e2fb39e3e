#pragma once

#include <Eigen/Core>

#include <string>
#include <vector>

#include "ctrain/bfgs.hpp"
#include "ctrain/rng.hpp"

namespace ctrain {

enum class Loss {
    SquaredError,  // sum of squared errors over logistic outputs (default)
    CrossEntropy,  // independent per-output logistic cross-entropy
};

std::string to_string(Loss loss);
Loss parse_loss(const std::string& text);

struct MlpConfig {
    int n_inputs = 0;
    int n_hidden = 15;
    int n_outputs = 0;
    double weight_decay = 1e-4;
    double init_range = 0.1;  // weights drawn from Unif(-init_range, init_range)
    long max_iterations = 1000000;
    double relative_tolerance = 1e-8;
    double gradient_tolerance = 1e-6;
    Loss loss = Loss::SquaredError;
};

void validate(const MlpConfig& cfg);

/// Single hidden layer, logistic activations everywhere. The bias sits in
/// the last row of each weight matrix.
struct MlpParameters {
    Eigen::MatrixXd hidden_weights;  // (n_inputs + 1) x n_hidden
    Eigen::MatrixXd output_weights;  // (n_hidden + 1) x n_outputs

    Eigen::Index parameter_count() const {
        return hidden_weights.size() + output_weights.size();
    }
};

Eigen::VectorXd flatten(const MlpParameters& p);
MlpParameters unflatten(const Eigen::VectorXd& flat, const MlpConfig& cfg);

/// All entries drawn independently from Unif(-init_range, init_range),
/// hidden matrix first, row by row.
MlpParameters init_weights(const MlpConfig& cfg, Rng& rng);

/// Inputs paired with one-hot targets.
struct TrainingData {
    Eigen::MatrixXd inputs;   // m x n_inputs
    Eigen::MatrixXd targets;  // m x n_outputs, one-hot rows
};

Eigen::MatrixXd one_hot(const std::vector<int>& labels, int n_classes);

/// Logistic outputs for a single input, each strictly in (0, 1).
Eigen::VectorXd forward(const MlpParameters& p, const Eigen::VectorXd& x);

/// Batched forward pass, one row per sample.
Eigen::MatrixXd forward_batch(const MlpParameters& p, const Eigen::MatrixXd& inputs);

/// Full-batch objective and backpropagated gradient over the flat parameter
/// vector: data loss plus decay * sum of squared parameters (biases
/// included). Throws std::runtime_error on a non-finite result.
double objective_and_gradient(const Eigen::VectorXd& flat, const TrainingData& data,
                              const MlpConfig& cfg, Eigen::VectorXd* gradient);

struct TrainingOutcome {
    MlpParameters parameters;
    double final_objective = 0.0;
    long iterations = 0;
    bool converged = false;
    Termination reason = Termination::MaxIterations;
};

/// Full-batch BFGS from a fresh Unif(-init_range, init_range) start.
TrainingOutcome train_bfgs(const MlpConfig& cfg, const TrainingData& data, Rng& rng);

/// Argmax over the outputs; ties break toward the lowest class index.
int predict(const MlpParameters& p, const Eigen::VectorXd& x);

/// Fraction of rows whose argmax matches the label. Throws on an empty set.
double accuracy(const MlpParameters& p, const Eigen::MatrixXd& inputs,
                const std::vector<int>& labels);

}  // namespace ctrain
