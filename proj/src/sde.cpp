#include "lake/sde.hpp"

#include "lake/rng.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>
#include <vector>

namespace lake {

namespace {

int pick_threads(int requested, long n_paths) {
    if (requested > 0) return requested;
    unsigned hw = std::thread::hardware_concurrency();
    if (hw == 0) hw = 1;
    const long cap = std::max(1L, n_paths / 1000);
    return static_cast<int>(std::min<long>(std::min<unsigned>(hw, 8), cap));
}

// Neumaier-compensated sum in fixed index order.
double stable_sum(const std::vector<double>& v) {
    double s = 0.0, comp = 0.0;
    for (double x : v) {
        const double t = s + x;
        comp += std::abs(s) >= std::abs(x) ? (s - t) + x : (x - t) + s;
        s = t;
    }
    return s + comp;
}

struct PathAccumulator {
    double payoff = 0.0;
    double max_abs_log_u = 0.0;
    double max_x = 0.0;
    long clamped = 0;
};

// Runs one path without materialising it, accumulating the discounted
// payoff by the trapezoidal rule.
PathAccumulator run_path(double x0, const Policy& policy, const PathConfig& cfg,
                         const LakeParams& p, std::uint64_t path_index) {
    RngStream rng = path_stream(cfg.seed, path_index);
    const long steps = cfg.steps();
    const double dt = cfg.dt;
    const double sqdt = std::sqrt(dt);
    const double disc_step = std::exp(-p.rho * dt);
    const bool kernel = cfg.integrator == Integrator::kernel_quadrature;
    const bool noisy = p.sigma > 0.0;

    PathAccumulator acc;
    double x = x0;
    double lnZ = 0.0;   // kernel quadrature state
    double S = x0;      // x_k = Z_k * S_k
    double disc = 1.0;

    double u = policy.control(x);
    double f_prev = std::log(u) - p.c * x * x;
    acc.max_abs_log_u = std::abs(std::log(u));
    acc.max_x = x;

    for (long k = 0; k < steps; ++k) {
        if (kernel) {
            S += (u + recycling(x)) * std::exp(-lnZ) * dt;
            lnZ += -(p.b + 0.5 * p.sigma * p.sigma) * dt;
            if (noisy) lnZ += p.sigma * sqdt * rng.normal();
            x = std::exp(lnZ) * S;
        } else {
            double xn = x + drift(x, u, p) * dt;
            if (noisy) xn += p.sigma * x * sqdt * rng.normal();
            if (xn < 0.0) {
                xn = 0.0;
                ++acc.clamped;
            }
            x = xn;
        }
        u = policy.control(x);
        const double lu = std::log(u);
        const double f_new = lu - p.c * x * x;
        acc.payoff += 0.5 * dt * (disc * f_prev + disc * disc_step * f_new);
        disc *= disc_step;
        f_prev = f_new;
        acc.max_abs_log_u = std::max(acc.max_abs_log_u, std::abs(lu));
        acc.max_x = std::max(acc.max_x, x);
    }
    return acc;
}

} // namespace

Policy Policy::constant(double u0) {
    if (!(u0 > 0.0))
        throw config_error("constant policy requires u0 > 0: controls take values in (0, inf)");
    Policy pol;
    pol.kind_ = Kind::constant;
    pol.u0_ = u0;
    pol.name_ = "constant:" + std::to_string(u0);
    return pol;
}

Policy Policy::benchmark() {
    Policy pol;
    pol.kind_ = Kind::benchmark;
    pol.name_ = "benchmark";
    return pol;
}

Policy Policy::feedback(const ValueFunction& v, const LakeParams& p) {
    v.validate();
    p.require_feasible();
    Policy pol;
    pol.kind_ = Kind::feedback;
    pol.name_ = "feedback";
    auto data = std::make_shared<FeedbackData>();
    data->grid = v.grid;
    data->grad = gradient(v);
    data->params = p;
    pol.fb_ = std::move(data);
    return pol;
}

double Policy::control(double x) const {
    switch (kind_) {
    case Kind::constant:
        return u0_;
    case Kind::benchmark:
        return (1.0 + x) / (1.0 + x * x);
    case Kind::feedback: {
        const auto& d = *fb_;
        if (x > d.grid.l) return optimal_control(asymptotic_gradient(x, d.params));
        const double dx = d.grid.dx();
        const int j = std::min(static_cast<int>(x / dx), d.grid.n - 1);
        const double w = (x - d.grid.x(j)) / dx;
        const double g = (1.0 - w) * d.grad[j] + w * d.grad[j + 1];
        return optimal_control(g);
    }
    }
    throw std::logic_error("unreachable policy kind");
}

void PathConfig::validate() const {
    if (!(dt > 0.0)) throw config_error("path config: dt must be > 0");
    if (!(dt <= t_max)) throw config_error("path config: dt must not exceed t_max");
}

Path simulate_path(double x0, const Policy& policy, const PathConfig& cfg,
                   const LakeParams& p) {
    if (!(x0 >= 0.0)) throw std::domain_error("simulate_path requires x0 >= 0");
    p.require_feasible();
    cfg.validate();

    RngStream rng = path_stream(cfg.seed, 0);
    const long steps = cfg.steps();
    const double dt = cfg.dt;
    const double sqdt = std::sqrt(dt);
    const bool kernel = cfg.integrator == Integrator::kernel_quadrature;
    const bool noisy = p.sigma > 0.0;

    Path path;
    path.t.reserve(steps + 1);
    path.x.reserve(steps + 1);
    path.u.reserve(steps + 1);

    double x = x0;
    double lnZ = 0.0;
    double S = x0;
    for (long k = 0; k <= steps; ++k) {
        const double u = policy.control(x);
        path.t.push_back(k * dt);
        path.x.push_back(x);
        path.u.push_back(u);
        if (k == steps) break;
        if (kernel) {
            S += (u + recycling(x)) * std::exp(-lnZ) * dt;
            lnZ += -(p.b + 0.5 * p.sigma * p.sigma) * dt;
            if (noisy) lnZ += p.sigma * sqdt * rng.normal();
            x = std::exp(lnZ) * S;
        } else {
            double xn = x + drift(x, u, p) * dt;
            if (noisy) xn += p.sigma * x * sqdt * rng.normal();
            if (xn < 0.0) {
                xn = 0.0;
                ++path.clamped_steps;
            }
            x = xn;
        }
    }
    return path;
}

std::vector<double> simulate_kernel(std::span<const double> t_grid, std::uint64_t seed,
                                    const LakeParams& p) {
    p.validate();
    if (t_grid.empty() || t_grid[0] != 0.0)
        throw config_error("simulate_kernel: t_grid must start at 0");
    for (std::size_t k = 1; k < t_grid.size(); ++k)
        if (!(t_grid[k] > t_grid[k - 1]))
            throw config_error("simulate_kernel: t_grid must be strictly increasing");

    RngStream rng = path_stream(seed, 0);
    std::vector<double> Z(t_grid.size());
    double lnZ = 0.0;
    Z[0] = 1.0;
    for (std::size_t k = 1; k < t_grid.size(); ++k) {
        const double dt = t_grid[k] - t_grid[k - 1];
        lnZ += -(p.b + 0.5 * p.sigma * p.sigma) * dt;
        if (p.sigma > 0.0) lnZ += p.sigma * std::sqrt(dt) * rng.normal();
        Z[k] = std::exp(lnZ);
    }
    return Z;
}

McEstimate mc_payoff(double x0, const Policy& policy, const PathConfig& cfg,
                     long n_paths, const LakeParams& p, int threads) {
    if (!(x0 >= 0.0)) throw std::domain_error("mc_payoff requires x0 >= 0");
    if (n_paths < 2) throw config_error("mc_payoff requires at least 2 paths");
    p.require_feasible();
    cfg.validate();

    const int nt = pick_threads(threads, n_paths);
    std::vector<double> payoffs(n_paths);
    std::vector<double> worker_log_env(nt, 0.0);
    std::vector<double> worker_x_env(nt, 0.0);
    std::vector<long> worker_clamped(nt, 0);

    auto work = [&](int w) {
        const long lo = n_paths * w / nt;
        const long hi = n_paths * (w + 1) / nt;
        for (long i = lo; i < hi; ++i) {
            const auto acc = run_path(x0, policy, cfg, p, static_cast<std::uint64_t>(i));
            payoffs[i] = acc.payoff;
            worker_log_env[w] = std::max(worker_log_env[w], acc.max_abs_log_u);
            worker_x_env[w] = std::max(worker_x_env[w], acc.max_x);
            worker_clamped[w] += acc.clamped;
        }
    };

    if (nt == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(nt);
        for (int w = 0; w < nt; ++w) pool.emplace_back(work, w);
        for (auto& th : pool) th.join();
    }

    McEstimate est;
    est.n_paths = n_paths;
    est.mean = stable_sum(payoffs) / static_cast<double>(n_paths);
    double ss = 0.0;
    for (double v : payoffs) ss += (v - est.mean) * (v - est.mean);
    est.std_error = std::sqrt(ss / (static_cast<double>(n_paths) - 1.0) /
                              static_cast<double>(n_paths));
    est.tail_factor = std::exp(-p.rho * cfg.t_max);

    double log_env = 0.0, x_env = 0.0;
    long clamped = 0;
    for (int w = 0; w < nt; ++w) {
        log_env = std::max(log_env, worker_log_env[w]);
        x_env = std::max(x_env, worker_x_env[w]);
        clamped += worker_clamped[w];
    }
    // Envelope of the payoff rate past the horizon, from the realised
    // ensemble with a factor-2 safety margin.
    est.tail_bound = 2.0 * est.tail_factor * (log_env + p.c * x_env * x_env) / p.rho;
    est.clamped_fraction = static_cast<double>(clamped) /
                           (static_cast<double>(n_paths) * cfg.steps());
    return est;
}

double feedback_control(const ValueFunction& v, const LakeParams& p, double x) {
    if (!(x >= 0.0)) throw std::domain_error("feedback_control requires x >= 0");
    return Policy::feedback(v, p).control(x);
}

} // namespace lake
