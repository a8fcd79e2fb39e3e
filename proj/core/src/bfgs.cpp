#include "ctrain/bfgs.hpp"

#include <cmath>
#include <stdexcept>

namespace ctrain {

std::string to_string(Termination reason) {
    switch (reason) {
        case Termination::GradientNorm: return "gradient_norm";
        case Termination::RelativeDecrease: return "relative_decrease";
        case Termination::MaxIterations: return "max_iterations";
        case Termination::LineSearchFailed: return "line_search_failed";
        case Termination::NonFinite: return "non_finite";
    }
    return "unknown";
}

BfgsResult minimize_bfgs(const Objective& objective, Eigen::VectorXd x0,
                         const BfgsOptions& options) {
    const auto dim = x0.size();
    BfgsResult result;
    result.x = std::move(x0);

    Eigen::VectorXd gradient(dim);
    double f = objective(result.x, &gradient);
    if (!std::isfinite(f) || !gradient.allFinite())
        throw std::runtime_error("objective is non-finite at the starting point");

    Eigen::MatrixXd inverse_hessian = Eigen::MatrixXd::Identity(dim, dim);
    bool scale_pending = true;  // rescale H from the first accepted curvature pair

    Eigen::VectorXd direction(dim), trial(dim), next_gradient(dim), s(dim), y(dim);

    if (gradient.lpNorm<Eigen::Infinity>() < options.gradient_tolerance) {
        result.converged = true;
        result.reason = Termination::GradientNorm;
    }

    while (!result.converged && result.iterations < options.max_iterations) {
        direction.noalias() = -(inverse_hessian * gradient);
        double slope = gradient.dot(direction);
        if (!(slope < 0.0)) {
            // H lost positive definiteness to rounding; restart from steepest descent.
            inverse_hessian.setIdentity();
            scale_pending = true;
            direction = -gradient;
            slope = gradient.dot(direction);
        }

        double step = 1.0;
        double f_trial = 0.0;
        bool accepted = false;
        for (int backtrack = 0; backtrack < options.max_backtracks; ++backtrack) {
            trial = result.x + step * direction;
            f_trial = objective(trial, nullptr);
            if (f_trial <= f + options.armijo_constant * step * slope) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) {
            result.reason = Termination::LineSearchFailed;
            break;
        }

        const double f_new = objective(trial, &next_gradient);
        if (!std::isfinite(f_new) || !next_gradient.allFinite()) {
            result.reason = Termination::NonFinite;
            break;
        }

        s = trial - result.x;
        y = next_gradient - gradient;
        const double decrease = f - f_new;

        result.x = trial;
        result.iterations += 1;

        const double curvature = s.dot(y);
        if (curvature > 0.0) {
            if (scale_pending) {
                inverse_hessian *= curvature / y.squaredNorm();
                scale_pending = false;
            }
            const double rho = 1.0 / curvature;
            const Eigen::VectorXd hy = inverse_hessian * y;
            const double yhy = y.dot(hy);
            inverse_hessian.noalias() +=
                (rho * rho * yhy + rho) * (s * s.transpose()) -
                rho * (hy * s.transpose() + s * hy.transpose());
        }

        f = f_new;
        gradient = next_gradient;

        if (gradient.lpNorm<Eigen::Infinity>() < options.gradient_tolerance) {
            result.converged = true;
            result.reason = Termination::GradientNorm;
        } else if (decrease <
                       options.relative_tolerance * std::max(1.0, std::abs(f)) &&
                   gradient.lpNorm<Eigen::Infinity>() <
                       options.plateau_gradient_guard) {
            result.converged = true;
            result.reason = Termination::RelativeDecrease;
        }
    }

    result.objective = f;
    return result;
}

}  // namespace ctrain
