#include "lake/model.hpp"

#include <cmath>
#include <string>

namespace lake {

void LakeParams::validate() const {
    if (!(rho > 0.0)) throw config_error("rho must be > 0, got " + std::to_string(rho));
    if (!(b > 0.0)) throw config_error("b must be > 0, got " + std::to_string(b));
    if (!(c > 0.0)) throw config_error("c must be > 0, got " + std::to_string(c));
    if (!(sigma >= 0.0)) throw config_error("sigma must be >= 0, got " + std::to_string(sigma));
}

void LakeParams::require_feasible() const {
    validate();
    if (!feasible())
        throw infeasible_error("sigma^2 = " + std::to_string(sigma * sigma) +
                               " >= rho + 2b = " + std::to_string(rho + 2.0 * b) +
                               ": the welfare function is identically -infinity");
}

void LakeParams::require_unit_c(const char* what) const {
    if (c != 1.0)
        throw unsupported_error(std::string(what) +
                                " is only established for c = 1 (got c = " +
                                std::to_string(c) + ")");
}

AsymptoticExpansion asymptotic_constants(const LakeParams& p) {
    p.require_feasible();
    p.require_unit_c("the asymptotic expansion");
    const double A = 1.0 / (p.rho + 2.0 * p.b - p.sigma * p.sigma);
    const double shift = 1.0 / (p.b + p.rho);
    const double K = ((2.0 * p.b + p.sigma * p.sigma) / (2.0 * p.rho) -
                      A * (p.rho + 2.0 * p.b) * shift * shift - 1.0) /
                     p.rho;
    return {A, K, shift};
}

double drift(double x, double u, const LakeParams& p) {
    return u - p.b * x + recycling(x);
}

double running_payoff(double x, double u, const LakeParams& p) {
    if (!(u > 0.0)) throw std::domain_error("running_payoff requires u > 0");
    return std::log(u) - p.c * x * x;
}

double hamiltonian(double x, double p, double P, const LakeParams& params) {
    if (!(p < 0.0))
        throw unbounded_hamiltonian("hamiltonian is +infinity for gradient p >= 0");
    return (recycling(x) - params.b * x) * p -
           (std::log(-p) + params.c * x * x + 1.0) +
           0.5 * params.sigma * params.sigma * x * x * P;
}

double optimal_control(double p) {
    if (!(p < 0.0)) throw std::domain_error("optimal_control requires p < 0");
    return -1.0 / p;
}

double asymptotic_value(double x, const LakeParams& p) {
    const auto e = asymptotic_constants(p);
    const double y = x + e.shift;
    if (!(y > 0.0)) throw std::domain_error("asymptotic_value requires x + shift > 0");
    return -e.A * y * y - std::log(2.0 * e.A * y) / p.rho + e.K;
}

double asymptotic_gradient(double x, const LakeParams& p) {
    const auto e = asymptotic_constants(p);
    const double y = x + e.shift;
    return -2.0 * e.A * y - 1.0 / (p.rho * y);
}

double v0_upper_bound(const LakeParams& p) {
    p.require_feasible();
    p.require_unit_c("the bound for V(0)");
    return std::log((p.b + p.rho) / std::sqrt(2.0 * std::exp(1.0))) / p.rho;
}

} // namespace lake
