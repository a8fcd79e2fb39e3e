#pragma once

#include <Eigen/Core>

#include <functional>
#include <string>

namespace ctrain {

enum class Termination {
    GradientNorm,      // infinity norm of the gradient below tolerance
    RelativeDecrease,  // relative objective decrease below tolerance
    MaxIterations,
    LineSearchFailed,  // no sufficient decrease within the backtracking budget
    NonFinite,         // objective or gradient became non-finite at an iterate
};

std::string to_string(Termination reason);

struct BfgsOptions {
    long max_iterations = 1000000;
    double relative_tolerance = 1e-8;  // on the per-iteration objective decrease
    double gradient_tolerance = 1e-6;  // on the gradient infinity norm
    // The relative-decrease stop is honored only once the gradient infinity
    // norm is below this. Plateaus (a near-saddle start is the common case)
    // produce tiny decreases while the gradient is still orders of magnitude
    // from stationary; stopping there returns an untrained model.
    double plateau_gradient_guard = 1e-5;
    double armijo_constant = 1e-4;
    int max_backtracks = 60;
};

struct BfgsResult {
    Eigen::VectorXd x;
    double objective = 0.0;
    long iterations = 0;
    bool converged = false;
    Termination reason = Termination::MaxIterations;
};

/// Objective callback: returns f(x) and, when `gradient` is non-null,
/// fills it with the gradient at x.
using Objective = std::function<double(const Eigen::VectorXd& x, Eigen::VectorXd* gradient)>;

/// Dense BFGS with backtracking line search. The inverse-Hessian update is
/// skipped whenever the curvature condition s'y > 0 fails, so the accepted
/// objective sequence is non-increasing. Throws std::runtime_error if the
/// objective or gradient is non-finite at the starting point.
BfgsResult minimize_bfgs(const Objective& objective, Eigen::VectorXd x0,
                         const BfgsOptions& options);

}  // namespace ctrain
