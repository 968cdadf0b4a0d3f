#pragma once

#include <array>
#include <functional>

#include "tasrate/errors.hpp"

// Special functions, semi-infinite quadrature and 2-D root finding shared by
// the analytical rate expressions.  All routines are pure and reentrant.
namespace tasrate::specfun {

inline constexpr double euler_gamma = 0.577215664901532861;
inline constexpr double pi = 3.14159265358979324;

// ln Gamma(x) for x > 0, relative error below 1e-13.
double ln_gamma(double x);

// Regularized lower incomplete gamma P(a,z) = gamma(a,z)/Gamma(a), a > 0, z >= 0.
double reg_lower_gamma(double a, double z);

// Regularized upper incomplete gamma Q(a,z) = Gamma(a,z)/Gamma(a) for a > 0.
// For a = 0 returns the unregularized Gamma(0,z) = E1(z); a = 0, z = 0 diverges.
double reg_upper_gamma(double a, double z);

// e^z * E1(z) for z > 0, evaluated without overflow up to z ~ 1e6.
double exp_scaled_e1(double z);

// Partial harmonic sum 1 + 1/2 + ... + 1/n, n >= 1.
double harmonic(int n);

struct QuadratureSpec {
    double relative_tolerance = 1e-10;
    double absolute_tolerance = 1e-12;
    int max_subdivisions = 2000;
};

// Integral of f over (0, inf) for a continuous, eventually exponentially
// decaying integrand.  The finite window [0, z_cut] is grown geometrically
// until a local decay-rate estimate certifies that the remaining tail is
// below absolute_tolerance; the window is then refined adaptively with
// Gauss-Kronrod 7/15 panels.  Throws ConvergenceError (carrying the best
// estimate) if max_subdivisions is exhausted.
double integrate_semi_infinite(const std::function<double(double)>& f,
                               const QuadratureSpec& spec = {});

// Search box for the (k, mu) moment-matching system.
struct SearchBox {
    double k_min = 0.05;
    double k_max = 2.0;
    double mu_min = 0.25;
    double mu_max = 8.0;
};

struct MomentSolution {
    double k = 0.0;
    double mu = 0.0;
    double r1 = 0.0; // residuals at the solution
    double r2 = 0.0;
    int iterations = 0;
};

using ResidualPair = std::function<std::array<double, 2>(double k, double mu)>;

// Solves residuals(k, mu) = (0, 0) inside the box: damped Newton with a
// finite-difference Jacobian, falling back to a nested bisection that solves
// the first residual for k at fixed mu and scans mu for a sign change of the
// second.  Residuals are expected to be normalized (LHS/RHS - 1).  Throws
// SearchFailureError with a residual trace when no root is found.
MomentSolution solve_moment_system(const ResidualPair& residuals, const SearchBox& box,
                                   double tol, double k_init, double mu_init);

} // namespace tasrate::specfun
