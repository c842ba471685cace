// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>

#include <Eigen/Dense>

namespace cryomux::fit {

struct LmOptions {
    double fd_relative_step = 1e-6;   // central-difference step, relative to param scale
    double tolerance = 1e-9;          // max relative parameter change at convergence
    int max_iterations = 200;
    double initial_damping = 1e-3;
};

struct LmResult {
    Eigen::VectorXd params;
    double cost = 0.0;  // sum of squared residuals
    int iterations = 0;
    bool converged = false;
};

/// Residual callback: fills `r` (already sized) for parameters `p`. Returns
/// false when `p` is outside the admissible domain.
using ResidualFn = std::function<bool(const Eigen::VectorXd& p, Eigen::VectorXd& r)>;

/// Damped least squares with Marquardt diagonal scaling and a
/// central-difference Jacobian. `scale` gives each parameter's typical
/// magnitude, used when the parameter itself is near zero.
LmResult levenberg_marquardt(const ResidualFn& residuals, Eigen::VectorXd initial,
                             const Eigen::VectorXd& scale, Eigen::Index residual_count,
                             const LmOptions& options = {});

}  // namespace cryomux::fit
