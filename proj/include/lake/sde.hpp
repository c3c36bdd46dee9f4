#pragma once

#include "lake/hjb.hpp"
#include "lake/model.hpp"

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace lake {

enum class Integrator { kernel_quadrature, euler_maruyama };

// Control rules the simulator knows how to run.  Every variant emits a
// strictly positive control for every x >= 0.
class Policy {
public:
    // u == u0 for all states; u0 must be > 0.
    static Policy constant(double u0);

    // u(x) = (1 + x) / (1 + x^2).
    static Policy benchmark();

    // u(x) = -1/V'(x) from a solved value function; V' is interpolated
    // linearly between nodes and extended by asymptotic_gradient past l.
    static Policy feedback(const ValueFunction& v, const LakeParams& p);

    double control(double x) const;
    const std::string& name() const noexcept { return name_; }

private:
    Policy() = default;

    enum class Kind { constant, benchmark, feedback } kind_ = Kind::benchmark;
    double u0_ = 1.0;
    std::string name_ = "benchmark";

    struct FeedbackData {
        Grid grid;
        std::vector<double> grad;
        LakeParams params;
    };
    std::shared_ptr<const FeedbackData> fb_;
};

struct PathConfig {
    double t_max = 200.0;
    double dt = 0.01;
    Integrator integrator = Integrator::kernel_quadrature;
    std::uint64_t seed = 0;

    void validate() const; // 0 < dt <= t_max
    long steps() const noexcept { return static_cast<long>(t_max / dt + 0.5); }
};

struct Path {
    std::vector<double> t;
    std::vector<double> x;
    std::vector<double> u;
    long clamped_steps = 0; // Euler-Maruyama zero-crossings clamped to 0
};

struct McEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    long n_paths = 0;
    double tail_bound = 0.0;    // bound on the bias from truncating at t_max
    double tail_factor = 0.0;   // e^{-rho t_max}, reported with every estimate
    double clamped_fraction = 0.0;
};

// One path of the state SDE under the given policy.  Kernel quadrature
// advances x through the fundamental kernel
//   Z_t = exp(sigma W_t - (b + sigma^2/2) t),
//   x_k = Z_k (x0 + sum_{j<k} (u_j + x_j^2/(x_j^2+1)) / Z_j dt),
// which keeps every x_k >= 0 by construction.  Euler-Maruyama clamps
// negative excursions at 0 and counts them.
Path simulate_path(double x0, const Policy& policy, const PathConfig& cfg,
                   const LakeParams& p);

// Samples Z_t on the given increasing grid (t_grid[0] == 0) using exact
// Brownian increments: ln Z_t ~ Normal(-(b + sigma^2/2) t, sigma^2 t).
std::vector<double> simulate_kernel(std::span<const double> t_grid,
                                    std::uint64_t seed, const LakeParams& p);

// Monte Carlo estimate of the discounted payoff
//   int_0^{t_max} e^{-rho t} (ln u - c x^2) dt
// averaged over n_paths independent paths (trapezoidal in t).
// Deterministic given (seed, cfg, policy, params), including under
// threading: path i always uses path_stream(seed, i) and the reduction is
// done in fixed path order.  threads == 0 picks a default.
McEstimate mc_payoff(double x0, const Policy& policy, const PathConfig& cfg,
                     long n_paths, const LakeParams& p, int threads = 0);

// -1/V'(x) with interpolation below l and the asymptotic gradient above.
double feedback_control(const ValueFunction& v, const LakeParams& p, double x);

} // namespace lake
