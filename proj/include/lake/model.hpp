#pragma once

#include "lake/errors.hpp"

namespace lake {

// Model parameters of the stochastic shallow lake problem.
//
//   dx = (u - b x + x^2/(x^2+1)) dt + sigma x dW,
//   J(x;u) = E int_0^inf e^{-rho t} (ln u - c x^2) dt,
//   V(x)   = sup_u J(x;u).
struct LakeParams {
    double rho = 1.0;    // discount rate, > 0
    double b = 0.65;     // phosphorus loss rate, > 0
    double c = 1.0;      // weight of the ecological cost, > 0
    double sigma = 0.1;  // diffusion strength, >= 0

    // Throws config_error unless rho, b, c > 0 and sigma >= 0.
    void validate() const;

    // The problem has a finite welfare function iff sigma^2 < rho + 2b.
    bool feasible() const noexcept { return sigma * sigma < rho + 2.0 * b; }

    void require_feasible() const;

    // Several closed forms below are only established for c == 1.
    void require_unit_c(const char* what) const;
};

// Constants of the quadratic-log expansion of V at infinity,
//   V(x) = -A (x + shift)^2 - (1/rho) ln(2A (x + shift)) + K + o(1),
// with A = 1/(rho + 2b - sigma^2) and shift = 1/(b + rho).
// Established for c == 1 only; pure function of the parameters.
struct AsymptoticExpansion {
    double A;
    double K;
    double shift;
};

AsymptoticExpansion asymptotic_constants(const LakeParams& p);

// Sigmoid recycling rate x^2/(x^2+1).
inline double recycling(double x) noexcept { return x * x / (x * x + 1.0); }

// Drift of the state: u - b x + x^2/(x^2+1).
double drift(double x, double u, const LakeParams& p);

// Instantaneous payoff ln u - c x^2; throws std::domain_error for u <= 0.
double running_payoff(double x, double u, const LakeParams& p);

// Optimized Hamiltonian
//   H(x,p,P) = (x^2/(x^2+1) - b x) p - (ln(-p) + c x^2 + 1) + (sigma^2 x^2 / 2) P
// for p < 0; throws unbounded_hamiltonian for p >= 0.
double hamiltonian(double x, double p, double P, const LakeParams& params);

// Maximizer of ln u + p u over u > 0, i.e. -1/p; requires p < 0.
double optimal_control(double p);

// The expansion above with the o(1) term dropped.  Used as the right
// boundary datum of the finite-difference scheme and as a tail reference.
double asymptotic_value(double x, const LakeParams& p);

// d/dx of asymptotic_value: -2A(x+shift) - 1/(rho (x+shift)); always < 0.
double asymptotic_gradient(double x, const LakeParams& p);

// Upper bound for the welfare function at the clean state,
//   V(0) <= (1/rho) ln((b+rho)/sqrt(2e)).   (c == 1 only.)
double v0_upper_bound(const LakeParams& p);

} // namespace lake
