#include "lake/hjb.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <string>
#include <vector>

namespace lake {

namespace {

double advection(double x, const LakeParams& p) noexcept {
    return recycling(x) - p.b * x;
}

double diffusion_coef(double x, const LakeParams& p, DiffusionForm form) noexcept {
    if (form == DiffusionForm::x2) return 0.5 * p.sigma * p.sigma * x * x / p.rho;
    // Flat form: the printed scheme keeps sigma^2/2 on the second difference
    // for interior nodes; at x = 0 the continuous diffusion vanishes, so the
    // node-0 equation is reduced the same way as in the x2 form.
    return x == 0.0 ? 0.0 : 0.5 * p.sigma * p.sigma / p.rho;
}

// Per-node equation residual (scheme_residual / dx^2).
double node_equation(double x, double w, double cR, double dL, double dx,
                     const LakeParams& p, DiffusionForm form) {
    const double f = advection(x, p);
    const double D = diffusion_coef(x, p, form);
    return w - f / p.rho * (w - dL) / dx +
           (p.c * x * x + 1.0 + std::log((w - cR) / dx)) / p.rho -
           D * (cR + dL - 2.0 * w) / (dx * dx);
}

struct Workspace {
    std::vector<double> x, f, D;    // node locations and frozen coefficients
    double dx = 0.0;

    void init(const LakeParams& p, const Grid& g, DiffusionForm form) {
        dx = g.dx();
        const int n = g.n;
        x.resize(n + 1);
        f.resize(n + 1);
        D.resize(n + 1);
        for (int i = 0; i <= n; ++i) {
            x[i] = g.x(i);
            f[i] = advection(x[i], p);
            D[i] = diffusion_coef(x[i], p, form);
        }
    }
};

// Residual vector over i = 0..n-1 and its sup norm.
double residual_vector(const std::vector<double>& V, const Workspace& ws,
                       const LakeParams& p, std::vector<double>& out) {
    const int n = static_cast<int>(V.size()) - 1;
    const double dx = ws.dx;
    out.resize(n);
    double sup = 0.0;
    for (int i = 0; i < n; ++i) {
        const double dL = i > 0 ? V[i - 1] : 0.0;
        const double e = V[i] - ws.f[i] / p.rho * (V[i] - dL) / dx +
                         (p.c * ws.x[i] * ws.x[i] + 1.0 +
                          std::log((V[i] - V[i + 1]) / dx)) / p.rho -
                         ws.D[i] * (V[i + 1] + dL - 2.0 * V[i]) / (dx * dx);
        out[i] = e;
        sup = std::max(sup, std::abs(e));
    }
    return sup;
}

// One damped Newton step on the tridiagonal system; returns the achieved
// sup residual, or a negative value when no feasible reduction was found.
double newton_step(std::vector<double>& V, const Workspace& ws, const LakeParams& p,
                   const std::vector<double>& eq, double current_sup,
                   std::vector<double>& scratch_eq) {
    const int n = static_cast<int>(V.size()) - 1;
    const double dx = ws.dx;

    std::vector<double> lo(n), di(n), up(n), rhs(n);
    for (int i = 0; i < n; ++i) {
        const double diff = V[i] - V[i + 1];
        di[i] = 1.0 - ws.f[i] / p.rho / dx + 1.0 / (p.rho * diff) +
                2.0 * ws.D[i] / (dx * dx);
        up[i] = -1.0 / (p.rho * diff) - ws.D[i] / (dx * dx); // d/dV_{i+1}, unused at i=n-1
        lo[i] = ws.f[i] / p.rho / dx - ws.D[i] / (dx * dx);  // d/dV_{i-1}, unused at i=0
        rhs[i] = -eq[i];
    }

    // Thomas elimination.
    for (int i = 1; i < n; ++i) {
        const double m = lo[i] / di[i - 1];
        di[i] -= m * up[i - 1];
        rhs[i] -= m * rhs[i - 1];
    }
    std::vector<double> dV(n);
    dV[n - 1] = rhs[n - 1] / di[n - 1];
    for (int i = n - 2; i >= 0; --i) dV[i] = (rhs[i] - up[i] * dV[i + 1]) / di[i];

    // Largest step keeping V strictly decreasing (including against the
    // pinned V_n, whose increment is zero).
    double lam = 1.0;
    for (int i = 0; i < n; ++i) {
        const double diff = V[i] - V[i + 1];
        const double ddiff = dV[i] - (i + 1 < n ? dV[i + 1] : 0.0);
        if (ddiff < 0.0) lam = std::min(lam, -0.95 * diff / ddiff);
    }

    std::vector<double> trial(V);
    for (int back = 0; back < 40; ++back) {
        for (int i = 0; i < n; ++i) trial[i] = V[i] + lam * dV[i];
        bool decreasing = true;
        for (int i = 0; i <= n - 1 && decreasing; ++i)
            decreasing = trial[i] > trial[i + 1];
        if (decreasing) {
            const double sup = residual_vector(trial, ws, p, scratch_eq);
            if (sup < current_sup) {
                V.swap(trial);
                return sup;
            }
        }
        lam *= 0.5;
    }
    return -1.0;
}

// One right-to-left relaxation sweep, each node solved exactly in
// z = ln((w - cR)/dx).  Used as a fallback when a Newton step stalls.
void relaxation_sweep(std::vector<double>& V, const Workspace& ws, const LakeParams& p) {
    const int n = static_cast<int>(V.size()) - 1;
    const double dx = ws.dx;
    for (int i = n - 1; i >= 0; --i) {
        const double cR = V[i + 1];
        const double dL = i > 0 ? V[i - 1] : 0.0;
        const double a = 1.0 - ws.f[i] / p.rho / dx + 2.0 * ws.D[i] / (dx * dx);
        const double rest = ws.f[i] / p.rho * dL / dx +
                            (p.c * ws.x[i] * ws.x[i] + 1.0) / p.rho -
                            ws.D[i] * (cR + dL) / (dx * dx);
        double z = V[i] > cR ? std::log((V[i] - cR) / dx) : 0.0;
        for (int it = 0; it < 100; ++it) {
            const double ez = std::exp(std::min(z, 700.0));
            const double g = a * (cR + dx * ez) + z / p.rho + rest;
            const double gp = a * dx * ez + 1.0 / p.rho;
            const double zn = z - g / gp;
            if (std::abs(zn - z) < 1e-15 * (1.0 + std::abs(z))) {
                z = zn;
                break;
            }
            z = zn;
        }
        V[i] = cR + dx * std::exp(std::min(z, 700.0));
    }
}

} // namespace

void Grid::validate() const {
    if (!(l > 0.0)) throw config_error("grid: l must be > 0");
    if (n < 2) throw config_error("grid: n must be >= 2");
}

void ValueFunction::validate() const {
    grid.validate();
    if (values.size() != static_cast<std::size_t>(grid.n) + 1)
        throw config_error("value function: expected " + std::to_string(grid.n + 1) +
                           " node values, got " + std::to_string(values.size()));
    for (std::size_t i = 0; i + 1 < values.size(); ++i)
        if (!(values[i] > values[i + 1]))
            throw config_error("value function: node values must be strictly decreasing"
                               " (violated at node " + std::to_string(i) + ")");
}

double ValueFunction::at(double x) const {
    if (x < 0.0 || x > grid.l) throw std::domain_error("ValueFunction::at: x outside [0, l]");
    const double dx = grid.dx();
    const int j = std::min(static_cast<int>(x / dx), grid.n - 1);
    const double w = (x - grid.x(j)) / dx;
    return (1.0 - w) * values[j] + w * values[j + 1];
}

double scheme_residual(double x, double w, double cR, double dL, double dx,
                       const LakeParams& p, DiffusionForm form) {
    p.require_feasible();
    if (!(dx > 0.0)) throw config_error("scheme_residual: dx must be > 0");
    if (!(cR < w))
        throw monotone_violation("scheme_residual requires V_{i+1} < V_i "
                                 "(the forward difference enters a logarithm)");
    return dx * dx * node_equation(x, w, cR, dL, dx, p, form);
}

MonotonicityReport monotonicity_check(const LakeParams& p, const Grid& grid,
                                      DiffusionForm form) {
    p.validate();
    grid.validate();
    const double dx = grid.dx();
    MonotonicityReport rep;
    rep.ok = true;
    rep.worst_margin = std::numeric_limits<double>::infinity();
    // f(x) = x^2/(x^2+1) - b x <= 0 for every x >= 0 once b >= 1/2, and
    // f(x) <= min(x^2, 1) makes dx <= sigma^2/2 sufficient for both forms.
    if (p.b >= 0.5 || dx <= 0.5 * p.sigma * p.sigma) return rep;
    for (int i = 0; i <= grid.n; ++i) {
        const double x = grid.x(i);
        const double bound = form == DiffusionForm::x2 ? 0.5 * p.sigma * p.sigma * x * x
                                                       : 0.5 * p.sigma * p.sigma;
        const double margin = bound - dx * advection(x, p);
        if (margin < rep.worst_margin) {
            rep.worst_margin = margin;
            rep.worst_x = x;
        }
    }
    rep.ok = rep.worst_margin >= 0.0;
    return rep;
}

std::pair<ValueFunction, SolveReport> solve(const LakeParams& p, const Grid& grid,
                                            const SolveOptions& opts) {
    const auto t0 = std::chrono::steady_clock::now();
    p.require_feasible();
    p.require_unit_c("solve (the right boundary datum)");
    grid.validate();
    if (!(opts.tol > 0.0)) throw config_error("solve: tol must be > 0");
    const auto mono = monotonicity_check(p, grid, opts.diffusion);
    if (!mono.ok)
        throw config_error("solve: monotonicity condition violated at x = " +
                           std::to_string(mono.worst_x) + " (margin " +
                           std::to_string(mono.worst_margin) +
                           "); reduce dx below sigma^2/2 or use b >= 0.5");

    SolveReport rep;
    if (grid.l < 5.0)
        rep.diagnostics += "l < 5: the asymptotic boundary datum may be inaccurate; ";

    Workspace ws;
    ws.init(p, grid, opts.diffusion);

    std::vector<double> V(grid.n + 1);
    for (int i = 0; i <= grid.n; ++i) V[i] = asymptotic_value(ws.x[i], p);

    std::vector<double> eq, scratch;
    double sup = residual_vector(V, ws, p, eq);
    double best = sup;
    int stall_rounds = 0;
    int iters = 0;

    while (sup > opts.tol && iters < opts.max_sweeps) {
        double achieved = newton_step(V, ws, p, eq, sup, scratch);
        ++iters;
        if (achieved < 0.0) {
            // Newton could not reduce the residual; relax and retry.
            for (int k = 0; k < 3 && iters < opts.max_sweeps; ++k, ++iters)
                relaxation_sweep(V, ws, p);
            achieved = residual_vector(V, ws, p, eq);
        } else {
            residual_vector(V, ws, p, eq);
        }
        sup = achieved;
        if (sup < 0.99 * best) {
            best = sup;
            stall_rounds = 0;
        } else if (++stall_rounds >= 8) {
            break;
        }
    }

    rep.iterations = iters;
    rep.final_residual = sup;
    rep.converged = sup <= opts.tol;
    rep.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    if (!rep.converged) {
        std::string msg = "solver did not converge: sup residual " +
                          std::to_string(sup) + " > tol " + std::to_string(opts.tol) +
                          " after " + std::to_string(iters) + " iterations";
        const double datum = asymptotic_value(grid.l, p);
        const double bound = v0_upper_bound(p);
        if (datum > bound) {
            msg += "; the boundary datum asymptotic_value(l) = " + std::to_string(datum) +
                   " exceeds the provable bound V(0) <= " + std::to_string(bound) +
                   " while V must decrease, so the expansion's o(1) term is not "
                   "negligible at these parameters (rho far below b); no discrete "
                   "solution consistent with the data exists";
        }
        rep.diagnostics += msg;
        throw solve_error(msg, rep);
    }

    ValueFunction vf{grid, std::move(V)};
    vf.validate();
    return {std::move(vf), std::move(rep)};
}

std::vector<double> gradient(const ValueFunction& v) {
    v.validate();
    const int n = v.grid.n;
    const double dx = v.grid.dx();
    std::vector<double> g(n + 1);
    g[0] = (v.values[1] - v.values[0]) / dx;
    g[n] = (v.values[n] - v.values[n - 1]) / dx;
    for (int i = 1; i < n; ++i) g[i] = (v.values[i + 1] - v.values[i - 1]) / (2.0 * dx);
    return g;
}

} // namespace lake
