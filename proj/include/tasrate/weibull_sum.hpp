#pragma once

#include "tasrate/specfun.hpp"

// Exact moments of X = sum_j |h_j|^4 over a receive array, the moment-matched
// generalized-Gamma approximation of its distribution, and the mean of the
// maximum of such sums over the transmit antennas.
namespace tasrate::weibull {

// A Weibull-distributed channel statistic; the defaults encode |h|^4 for a
// unit-variance complex Gaussian h (scale 1, shape 1/2).
struct WeibullComponent {
    double scale = 1.0;
    double shape = 0.5;
};

// E[W^n] = scale^(n/shape) * Gamma(1 + n/shape).
double component_moment(const WeibullComponent& c, int n);

// Exact E[X^order] for X the sum of n_terms IID default components, via the
// binomial convolution recursion.  order > 20 overflows and is rejected.
double sum_moment(int n_terms, int order);

// Fitted generalized-Gamma parameters: pdf(x) ~ x^(k*mu - 1) exp(-mu x^k / omega).
struct WeibullSumFit {
    int n_terms = 1;
    double k = 0.5;
    double mu = 1.0;
    double omega = 1.0;
    double residual_norm = 0.0; // worst normalized moment-equation residual
};

// Matches the 1st, 2nd and 4th moments of the sum; normalized residuals of
// both moment equations come out below 1e-8.
WeibullSumFit fit(int n_terms);

double approx_pdf(const WeibullSumFit& f, double x);
double approx_cdf(const WeibullSumFit& f, double x);

// E[max of n_select IID copies of X] under the fitted approximation,
// evaluated by quadrature of the order-statistic density.
double max_mean(const WeibullSumFit& f, int n_select, const specfun::QuadratureSpec& spec = {});

} // namespace tasrate::weibull
