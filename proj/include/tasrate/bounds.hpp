#pragma once

#include <optional>

#include "tasrate/link_sim.hpp"
#include "tasrate/weibull_sum.hpp"

// Closed-form and quadrature-based ergodic-rate expressions: the selection
// lower bound for multi-antenna receivers, the single-receive-antenna closed
// forms, and the single-link upper bound and exact rate.
namespace tasrate::bounds {

enum class BoundKind { LowerBound, Approximation, UpperBound, Exact };

struct IntegralDiagnostics {
    double z_g = 0.0; // Int z G(z) dz
    double g = 0.0;   // Int G(z) dz
    double g_q = 0.0; // Int G_q(z) dz (0 when alpha = 1)
};

struct BoundResult {
    double value = 0.0; // bits/s/Hz
    BoundKind kind = BoundKind::Approximation;
    std::optional<IntegralDiagnostics> integrals;
};

// Quadrature lower bound for selection over n_tx antennas with an n_rx-antenna
// MRC receiver:
//   log2(1 + rho*alpha*Int z G / Int (G + rho*(1-alpha) G_q))
//   G(z)   = e^-z z^N_r (P(N_r,z))^(N_t-1)
//   G_q(z) = 2 Gamma(N_r+1)/Gamma(mu+1/k) e^-z z^(mu+1/k-1) (P(mu,z))^(N_t-1)
// with (k, mu) from the moment-matched generalized-Gamma fit.
BoundResult tas_lower_bound(const sim::SystemConfig& config, const weibull::WeibullSumFit& fit,
                            const specfun::QuadratureSpec& spec = {});

// Closed-form selection rate for a single receive antenna:
//   log2(1 + rho*alpha*H_Nt / (1 + rho*(1-alpha)*H_Nt)), H the harmonic number.
BoundResult tas_rate_nr1(int n_tx, double rho, double alpha);

// Large-array form of the above with H_Nt replaced by ln(N_t) + euler_gamma.
BoundResult tas_rate_nr1_asymptotic(int n_tx, double rho, double alpha);

// Upper bound for the single-antenna link: log2(1 + rho*alpha/(1 + rho*(1-alpha))).
BoundResult siso_upper_bound(double rho, double alpha);

// Exact single-antenna ergodic rate,
//   (e^(1/rho) Gamma(0,1/rho) - e^(1/(rho*beta)) Gamma(0,1/(rho*beta))) / ln 2,
// evaluated through the scaled exponential integral; the second term vanishes
// continuously at alpha = 1.
BoundResult siso_exact_rate(double rho, double alpha);

} // namespace tasrate::bounds
