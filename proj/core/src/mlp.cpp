#include "ctrain/mlp.hpp"

#include <cmath>
#include <stdexcept>

namespace ctrain {

namespace {

inline double logistic(double z) { return 1.0 / (1.0 + std::exp(-z)); }

// log(1 + e^z) without overflow.
inline double softplus(double z) {
    return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
}

Eigen::MatrixXd logistic_matrix(Eigen::MatrixXd z) {
    return z.unaryExpr([](double v) { return logistic(v); });
}

// [X 1] * W, where W's last row is the bias.
Eigen::MatrixXd affine(const Eigen::MatrixXd& x, const Eigen::MatrixXd& w) {
    Eigen::MatrixXd z = x * w.topRows(w.rows() - 1);
    z.rowwise() += w.row(w.rows() - 1);
    return z;
}

}  // namespace

std::string to_string(Loss loss) {
    return loss == Loss::SquaredError ? "sse" : "xent";
}

Loss parse_loss(const std::string& text) {
    if (text == "sse") return Loss::SquaredError;
    if (text == "xent") return Loss::CrossEntropy;
    throw std::invalid_argument("unknown loss '" + text + "', expected sse or xent");
}

void validate(const MlpConfig& cfg) {
    if (cfg.n_inputs < 1 || cfg.n_hidden < 1 || cfg.n_outputs < 1)
        throw std::invalid_argument("network layer sizes must be positive");
    if (cfg.weight_decay < 0.0)
        throw std::invalid_argument("weight decay must be nonnegative");
    if (!(cfg.init_range > 0.0))
        throw std::invalid_argument("init range must be positive");
    if (cfg.max_iterations < 1)
        throw std::invalid_argument("max iterations must be positive");
}

Eigen::VectorXd flatten(const MlpParameters& p) {
    Eigen::VectorXd flat(p.parameter_count());
    Eigen::Index k = 0;
    for (Eigen::Index r = 0; r < p.hidden_weights.rows(); ++r)
        for (Eigen::Index c = 0; c < p.hidden_weights.cols(); ++c)
            flat(k++) = p.hidden_weights(r, c);
    for (Eigen::Index r = 0; r < p.output_weights.rows(); ++r)
        for (Eigen::Index c = 0; c < p.output_weights.cols(); ++c)
            flat(k++) = p.output_weights(r, c);
    return flat;
}

MlpParameters unflatten(const Eigen::VectorXd& flat, const MlpConfig& cfg) {
    MlpParameters p;
    p.hidden_weights.resize(cfg.n_inputs + 1, cfg.n_hidden);
    p.output_weights.resize(cfg.n_hidden + 1, cfg.n_outputs);
    if (flat.size() != p.parameter_count())
        throw std::invalid_argument("flat parameter vector has wrong length");
    Eigen::Index k = 0;
    for (Eigen::Index r = 0; r < p.hidden_weights.rows(); ++r)
        for (Eigen::Index c = 0; c < p.hidden_weights.cols(); ++c)
            p.hidden_weights(r, c) = flat(k++);
    for (Eigen::Index r = 0; r < p.output_weights.rows(); ++r)
        for (Eigen::Index c = 0; c < p.output_weights.cols(); ++c)
            p.output_weights(r, c) = flat(k++);
    return p;
}

MlpParameters init_weights(const MlpConfig& cfg, Rng& rng) {
    validate(cfg);
    MlpParameters p;
    p.hidden_weights.resize(cfg.n_inputs + 1, cfg.n_hidden);
    p.output_weights.resize(cfg.n_hidden + 1, cfg.n_outputs);
    for (Eigen::Index r = 0; r < p.hidden_weights.rows(); ++r)
        for (Eigen::Index c = 0; c < p.hidden_weights.cols(); ++c)
            p.hidden_weights(r, c) = rng.uniform(-cfg.init_range, cfg.init_range);
    for (Eigen::Index r = 0; r < p.output_weights.rows(); ++r)
        for (Eigen::Index c = 0; c < p.output_weights.cols(); ++c)
            p.output_weights(r, c) = rng.uniform(-cfg.init_range, cfg.init_range);
    return p;
}

Eigen::MatrixXd one_hot(const std::vector<int>& labels, int n_classes) {
    Eigen::MatrixXd targets =
        Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(labels.size()), n_classes);
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] < 0 || labels[i] >= n_classes)
            throw std::invalid_argument("label out of range for one-hot encoding");
        targets(static_cast<Eigen::Index>(i), labels[i]) = 1.0;
    }
    return targets;
}

Eigen::MatrixXd forward_batch(const MlpParameters& p, const Eigen::MatrixXd& inputs) {
    if (inputs.cols() + 1 != p.hidden_weights.rows())
        throw std::invalid_argument("input width " + std::to_string(inputs.cols()) +
                                    " does not match network with " +
                                    std::to_string(p.hidden_weights.rows() - 1) +
                                    " inputs");
    const Eigen::MatrixXd hidden = logistic_matrix(affine(inputs, p.hidden_weights));
    return logistic_matrix(affine(hidden, p.output_weights));
}

Eigen::VectorXd forward(const MlpParameters& p, const Eigen::VectorXd& x) {
    return forward_batch(p, x.transpose()).row(0);
}

double objective_and_gradient(const Eigen::VectorXd& flat, const TrainingData& data,
                              const MlpConfig& cfg, Eigen::VectorXd* gradient) {
    const MlpParameters p = unflatten(flat, cfg);
    if (data.inputs.cols() != cfg.n_inputs)
        throw std::invalid_argument("training input width does not match n_inputs");
    if (data.targets.cols() != cfg.n_outputs || data.targets.rows() != data.inputs.rows())
        throw std::invalid_argument("target matrix shape does not match");

    const Eigen::MatrixXd z_hidden = affine(data.inputs, p.hidden_weights);
    const Eigen::MatrixXd hidden = logistic_matrix(z_hidden);
    const Eigen::MatrixXd z_out = affine(hidden, p.output_weights);
    const Eigen::MatrixXd outputs = logistic_matrix(z_out);

    double data_loss = 0.0;
    Eigen::MatrixXd delta_out;  // d(loss)/d(z_out)
    if (cfg.loss == Loss::SquaredError) {
        const Eigen::MatrixXd residual = outputs - data.targets;
        data_loss = residual.squaredNorm();
        delta_out = 2.0 * residual.cwiseProduct(outputs).cwiseProduct(
            (1.0 - outputs.array()).matrix());
    } else {
        // Stable form of -[t log o + (1-t) log(1-o)] in terms of z.
        data_loss = (z_out.array().unaryExpr([](double z) { return softplus(z); }) -
                     data.targets.array() * z_out.array())
                        .sum();
        delta_out = outputs - data.targets;
    }

    const double decay = cfg.weight_decay;
    const double objective = data_loss + decay * flat.squaredNorm();
    if (!std::isfinite(objective))
        throw std::runtime_error("objective became non-finite");

    if (gradient) {
        MlpParameters g;
        g.output_weights.resize(cfg.n_hidden + 1, cfg.n_outputs);
        g.output_weights.topRows(cfg.n_hidden).noalias() = hidden.transpose() * delta_out;
        g.output_weights.row(cfg.n_hidden) = delta_out.colwise().sum();
        g.output_weights += 2.0 * decay * p.output_weights;

        Eigen::MatrixXd delta_hidden =
            (delta_out * p.output_weights.topRows(cfg.n_hidden).transpose())
                .cwiseProduct(hidden)
                .cwiseProduct((1.0 - hidden.array()).matrix());

        g.hidden_weights.resize(cfg.n_inputs + 1, cfg.n_hidden);
        g.hidden_weights.topRows(cfg.n_inputs).noalias() =
            data.inputs.transpose() * delta_hidden;
        g.hidden_weights.row(cfg.n_inputs) = delta_hidden.colwise().sum();
        g.hidden_weights += 2.0 * decay * p.hidden_weights;

        *gradient = flatten(g);
        if (!gradient->allFinite())
            throw std::runtime_error("gradient became non-finite");
    }
    return objective;
}

TrainingOutcome train_bfgs(const MlpConfig& cfg, const TrainingData& data, Rng& rng) {
    validate(cfg);
    if (data.inputs.rows() < 1)
        throw std::invalid_argument("training set is empty");

    const MlpParameters start = init_weights(cfg, rng);

    BfgsOptions options;
    options.max_iterations = cfg.max_iterations;
    options.relative_tolerance = cfg.relative_tolerance;
    options.gradient_tolerance = cfg.gradient_tolerance;

    const auto objective = [&](const Eigen::VectorXd& x, Eigen::VectorXd* grad) {
        return objective_and_gradient(x, data, cfg, grad);
    };
    const BfgsResult result = minimize_bfgs(objective, flatten(start), options);

    TrainingOutcome outcome;
    outcome.parameters = unflatten(result.x, cfg);
    outcome.final_objective = result.objective;
    outcome.iterations = result.iterations;
    outcome.converged = result.converged;
    outcome.reason = result.reason;
    return outcome;
}

int predict(const MlpParameters& p, const Eigen::VectorXd& x) {
    const Eigen::VectorXd outputs = forward(p, x);
    int best = 0;
    for (Eigen::Index k = 1; k < outputs.size(); ++k)
        if (outputs(k) > outputs(best)) best = static_cast<int>(k);
    return best;
}

double accuracy(const MlpParameters& p, const Eigen::MatrixXd& inputs,
                const std::vector<int>& labels) {
    if (inputs.rows() == 0) throw std::invalid_argument("empty evaluation set");
    if (inputs.rows() != static_cast<Eigen::Index>(labels.size()))
        throw std::invalid_argument("label count does not match row count");

    const Eigen::MatrixXd outputs = forward_batch(p, inputs);
    long correct = 0;
    for (Eigen::Index r = 0; r < outputs.rows(); ++r) {
        int best = 0;
        for (Eigen::Index k = 1; k < outputs.cols(); ++k)
            if (outputs(r, k) > outputs(r, best)) best = static_cast<int>(k);
        if (best == labels[static_cast<std::size_t>(r)]) ++correct;
    }
    return static_cast<double>(correct) / static_cast<double>(outputs.rows());
}

}  // namespace ctrain
