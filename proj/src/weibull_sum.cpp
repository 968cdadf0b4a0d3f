#include "tasrate/weibull_sum.hpp"

#include <cmath>
#include <vector>

namespace tasrate::weibull {

using specfun::ln_gamma;

double component_moment(const WeibullComponent& c, int n) {
    if (c.scale <= 0.0 || c.shape <= 0.0)
        throw std::domain_error("component_moment: scale and shape must be positive");
    if (n < 0) throw std::domain_error("component_moment: requires n >= 0");
    if (n == 0) return 1.0;
    return std::pow(c.scale, n / c.shape) * std::exp(ln_gamma(1.0 + n / c.shape));
}

double sum_moment(int n_terms, int order) {
    if (n_terms < 1) throw std::domain_error("sum_moment: requires n_terms >= 1");
    if (order < 1) throw std::domain_error("sum_moment: requires order >= 1");
    if (order > 20) throw std::range_error("sum_moment: order > 20 overflows double moments");

    const WeibullComponent w{};
    std::vector<double> wm(order + 1);
    for (int n = 0; n <= order; n++) wm[n] = component_moment(w, n);

    // Pascal rows up to order 20 are exact in double.
    std::vector<std::vector<double>> choose(order + 1);
    for (int n = 0; n <= order; n++) {
        choose[n].resize(n + 1, 1.0);
        for (int j = 1; j < n; j++) choose[n][j] = choose[n - 1][j - 1] + choose[n - 1][j];
    }

    // E[(S + W)^n] = sum_j C(n,j) E[S^(n-j)] E[W^j], one component at a time.
    std::vector<double> cur = wm;
    for (int m = 2; m <= n_terms; m++) {
        std::vector<double> next(order + 1);
        for (int n = 0; n <= order; n++) {
            double s = 0.0;
            for (int j = 0; j <= n; j++) s += choose[n][j] * cur[n - j] * wm[j];
            next[n] = s;
        }
        cur = std::move(next);
    }
    return cur[order];
}

WeibullSumFit fit(int n_terms) {
    if (n_terms < 1) throw std::domain_error("fit: requires n_terms >= 1");

    const double ex1 = sum_moment(n_terms, 1);
    const double ex2 = sum_moment(n_terms, 2);
    const double ex4 = sum_moment(n_terms, 4);
    const double ln_ex1 = std::log(ex1), ln_ex2 = std::log(ex2), ln_ex4 = std::log(ex4);

    // Both moment equations as LHS/RHS - 1, assembled in log space:
    //   Gamma^2(mu+1/k) E[X^2] = Gamma(mu) Gamma(mu+2/k) E^2[X]
    //   Gamma^2(mu+2/k) E[X^4] = Gamma(mu) Gamma(mu+4/k) E^2[X^2]
    auto residuals = [&](double k, double mu) -> std::array<double, 2> {
        double lg = ln_gamma(mu);
        double l1 = ln_gamma(mu + 1.0 / k);
        double l2 = ln_gamma(mu + 2.0 / k);
        double l4 = ln_gamma(mu + 4.0 / k);
        double r1 = std::expm1(2.0 * l1 + ln_ex2 - lg - l2 - 2.0 * ln_ex1);
        double r2 = std::expm1(2.0 * l2 + ln_ex4 - lg - l4 - 2.0 * ln_ex2);
        return {r1, r2};
    };

    // The documented default box (mu up to 8*N_r) brackets fits only for small
    // arrays; mu grows roughly quadratically with N_r, so widen on failure.
    specfun::SearchBox box{0.05, 2.0, 0.25, 8.0 * n_terms};
    const double tol = 1e-8;
    specfun::MomentSolution sol;
    for (int attempt = 0;; attempt++) {
        try {
            sol = specfun::solve_moment_system(residuals, box, tol, 0.5, std::min(double(n_terms), box.mu_max));
            break;
        } catch (const SearchFailureError&) {
            if (attempt >= 2) throw;
            box.k_min *= 0.5;
            box.mu_max *= 8.0;
        }
    }

    // Omega from the closed form Omega^(1/k) = mu^(1/k) Gamma(mu) E[X] / Gamma(mu+1/k).
    double ln_omega =
        std::log(sol.mu) + sol.k * (ln_gamma(sol.mu) + ln_ex1 - ln_gamma(sol.mu + 1.0 / sol.k));
    return {n_terms, sol.k, sol.mu, std::exp(ln_omega),
            std::max(std::fabs(sol.r1), std::fabs(sol.r2))};
}

double approx_pdf(const WeibullSumFit& f, double x) {
    if (x < 0.0 || !std::isfinite(x)) throw std::domain_error("approx_pdf: requires x >= 0");
    const double km = f.k * f.mu;
    if (x == 0.0) {
        if (km > 1.0) return 0.0;
        if (km < 1.0) return std::numeric_limits<double>::infinity();
        return f.k * std::pow(f.mu, f.mu) / (std::pow(f.omega, f.mu) * std::exp(ln_gamma(f.mu)));
    }
    double ln_pdf = std::log(f.k) + f.mu * std::log(f.mu) + (km - 1.0) * std::log(x) -
                    f.mu * std::pow(x, f.k) / f.omega - f.mu * std::log(f.omega) - ln_gamma(f.mu);
    return std::exp(ln_pdf);
}

double approx_cdf(const WeibullSumFit& f, double x) {
    if (x < 0.0 || !std::isfinite(x)) throw std::domain_error("approx_cdf: requires x >= 0");
    if (x == 0.0) return 0.0;
    return specfun::reg_lower_gamma(f.mu, f.mu * std::pow(x, f.k) / f.omega);
}

double max_mean(const WeibullSumFit& f, int n_select, const specfun::QuadratureSpec& spec) {
    if (n_select < 1) throw std::domain_error("max_mean: requires n_select >= 1");

    // E[Z] = n (omega/mu)^(1/k) / Gamma(mu) * Int P(mu,y)^(n-1) y^(mu+1/k-1) e^-y dy.
    // The power term is normalized by its log-peak so the integrand stays
    // representable for large mu.
    const double p = f.mu + 1.0 / f.k - 1.0;
    const double peak = p > 0.0 ? p * (std::log(p) - 1.0) : 0.0;
    auto integrand = [&](double y) {
        double ln_val = p * std::log(y) - y - peak;
        if (n_select > 1) {
            double P = specfun::reg_lower_gamma(f.mu, y);
            if (P <= 0.0) return 0.0;
            ln_val += (n_select - 1) * std::log(P);
        }
        return std::exp(ln_val);
    };
    double integral = specfun::integrate_semi_infinite(integrand, spec);
    double ln_scale = (std::log(f.omega) - std::log(f.mu)) / f.k - ln_gamma(f.mu) + peak;
    return n_select * std::exp(ln_scale + std::log(integral));
}

} // namespace tasrate::weibull
