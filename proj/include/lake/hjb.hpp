#pragma once

#include "lake/model.hpp"

#include <limits>
#include <string>
#include <utility>
#include <vector>

namespace lake {

// Uniform partition of [0, l] into n cells, nodes x_i = i l / n.
struct Grid {
    double l = 10.0;
    int n = 1000;

    void validate() const;
    double dx() const noexcept { return l / n; }
    double x(int i) const noexcept { return l * i / n; }
};

// Which coefficient multiplies the central second difference.
// `x2` carries the sigma^2 x_i^2 / 2 factor of the continuous equation and
// is the default; `flat` uses the constant sigma^2 / 2 instead.
enum class DiffusionForm { x2, flat };

// Discrete welfare function: node values V_0 > V_1 > ... > V_n with the
// right boundary pinned to asymptotic_value(l).
struct ValueFunction {
    Grid grid;
    std::vector<double> values;

    // Throws config_error if sizes mismatch or values are not strictly
    // decreasing.
    void validate() const;

    // Linear interpolation of node values; x must lie in [0, l].
    double at(double x) const;
};

struct SolveReport {
    int iterations = 0;
    double final_residual = std::numeric_limits<double>::infinity();
    bool converged = false;
    double wall_time = 0.0; // seconds
    std::string diagnostics;
};

struct solve_error : std::runtime_error {
    solve_error(const std::string& msg, SolveReport r)
        : std::runtime_error(msg), report(std::move(r)) {}
    SolveReport report;
};

struct SolveOptions {
    double tol = 1e-10;      // sup-norm bound on per-node equation residuals
    int max_sweeps = 500;    // combined Newton iterations + relaxation sweeps
    DiffusionForm diffusion = DiffusionForm::x2;
};

struct MonotonicityReport {
    bool ok = false;
    double worst_x = 0.0;     // node with the smallest margin
    double worst_margin = 0.0; // diffusion bound minus advection term; >= 0 is ok
};

// Residual of the scheme at one node, scaled by (dx)^2:
//
//   g = (dx)^2 [ w - (1/rho) f(x) (w - dL)/dx
//                + (1/rho) (c x^2 + 1 + ln((w - cR)/dx))
//                - D(x) (cR + dL - 2w)/dx^2 ]
//
// with f(x) = x^2/(x^2+1) - b x and D(x) = sigma^2 x^2 / (2 rho)  (x2 form)
// or D = sigma^2/(2 rho) (flat form, reduced to D = 0 at x = 0 where the
// continuous diffusion vanishes).  w, cR, dL stand for the candidate value
// and its right/left neighbours.  Requires cR < w so the log is defined.
double scheme_residual(double x, double w, double cR, double dL, double dx,
                       const LakeParams& p,
                       DiffusionForm form = DiffusionForm::x2);

// Checks, node by node, the condition under which the scheme residual is
// non-increasing in the neighbouring values:
//   dx f(x) <= sigma^2 x^2 / 2  (x2 form)   or   dx f(x) <= sigma^2 / 2 (flat).
// Trivially true when b >= 0.5 (f <= 0 on x >= 0) or when dx <= sigma^2/2
// (since f(x) <= min(x^2, 1)).
MonotonicityReport monotonicity_check(const LakeParams& p, const Grid& grid,
                                      DiffusionForm form = DiffusionForm::x2);

// Solves the nonlinear system g(x_i, V_i, V_{i+1}, V_{i-1}) = 0 for
// i = 0..n-1 with V_n = asymptotic_value(l).  The equation is imposed at
// i = 0 as well; there every V_{-1} coefficient vanishes, so no ghost node
// is needed.  Requires feasible parameters, c == 1 (the boundary datum is
// only available there), and a grid passing monotonicity_check.
//
// Throws solve_error (carrying the report) on non-convergence.
std::pair<ValueFunction, SolveReport> solve(const LakeParams& p, const Grid& grid,
                                            const SolveOptions& opts = {});

// Node gradients: central differences inside, one-sided at the ends.
// Strict decrease of the values makes every entry negative.
std::vector<double> gradient(const ValueFunction& v);

} // namespace lake
