// SPDX-License-Identifier: Apache-2.0
#include "cryomux/fit/levenberg_marquardt.hpp"

#include <cmath>

#include "cryomux/error.hpp"

namespace cryomux::fit {

namespace {

double param_scale(double value, double typical) { return std::max(std::abs(value), typical); }

}  // namespace

LmResult levenberg_marquardt(const ResidualFn& residuals, Eigen::VectorXd initial,
                             const Eigen::VectorXd& scale, Eigen::Index residual_count,
                             const LmOptions& options) {
    const Eigen::Index n = initial.size();
    Eigen::VectorXd p = std::move(initial);
    Eigen::VectorXd r(residual_count);
    if (!residuals(p, r)) {
        throw Error(ErrorCode::InvalidArgument, "initial parameters are outside the model domain");
    }
    double cost = r.squaredNorm();
    double lambda = options.initial_damping;

    Eigen::MatrixXd jac(residual_count, n);
    Eigen::VectorXd r_plus(residual_count);
    Eigen::VectorXd r_minus(residual_count);
    Eigen::VectorXd r_try(residual_count);

    LmResult result;
    for (int iter = 1; iter <= options.max_iterations; ++iter) {
        result.iterations = iter;
        for (Eigen::Index j = 0; j < n; ++j) {
            const double h = options.fd_relative_step * param_scale(p[j], scale[j]);
            Eigen::VectorXd pp = p;
            Eigen::VectorXd pm = p;
            pp[j] += h;
            pm[j] -= h;
            if (!residuals(pp, r_plus) || !residuals(pm, r_minus)) {
                throw Error(ErrorCode::NoConvergence, "finite-difference probe left the model domain");
            }
            jac.col(j) = (r_plus - r_minus) / (2.0 * h);
        }
        const Eigen::MatrixXd jtj = jac.transpose() * jac;
        const Eigen::VectorXd grad = jac.transpose() * r;

        bool accepted = false;
        while (!accepted) {
            Eigen::MatrixXd damped = jtj;
            for (Eigen::Index j = 0; j < n; ++j) {
                damped(j, j) += lambda * std::max(jtj(j, j), 1e-300);
            }
            const Eigen::VectorXd step = damped.ldlt().solve(-grad);
            double rel = 0.0;
            for (Eigen::Index j = 0; j < n; ++j) {
                rel = std::max(rel, std::abs(step[j]) / param_scale(p[j], scale[j]));
            }
            const Eigen::VectorXd trial = p + step;
            const bool valid = step.allFinite() && residuals(trial, r_try);
            const double trial_cost = valid ? r_try.squaredNorm() : INFINITY;
            if (valid && trial_cost <= cost) {
                p = trial;
                r = r_try;
                cost = trial_cost;
                lambda = std::max(lambda / 3.0, 1e-15);
                accepted = true;
            } else {
                lambda *= 4.0;
            }
            if (rel < options.tolerance) {
                result.params = p;
                result.cost = cost;
                result.converged = true;
                return result;
            }
            if (lambda > 1e30) {
                break;
            }
        }
        if (!accepted) {
            break;
        }
    }
    result.params = p;
    result.cost = cost;
    result.converged = false;
    return result;
}

}  // namespace cryomux::fit
