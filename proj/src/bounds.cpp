#include "tasrate/bounds.hpp"

#include <cmath>

namespace tasrate::bounds {

using specfun::ln_gamma;

namespace {

void check_rho_alpha(double rho, double alpha) {
    if (!(rho > 0.0) || !std::isfinite(rho))
        throw std::domain_error("bounds: rho must be positive and finite");
    if (!(alpha > 0.0) || alpha > 1.0)
        throw std::domain_error("bounds: alpha must lie in (0, 1]");
}

// ln of Int_0^inf (P(a,z))^(n_sel-1) z^p e^-z dz, with the power-exponential
// factor normalized by its log-peak so large p stays representable.
double ln_order_stat_integral(double a, double p, int n_sel, const specfun::QuadratureSpec& spec) {
    const double peak = p > 0.0 ? p * (std::log(p) - 1.0) : 0.0;
    auto integrand = [&](double z) {
        double ln_val = p * std::log(z) - z - peak;
        if (n_sel > 1) {
            double reg = specfun::reg_lower_gamma(a, z);
            if (reg <= 0.0) return 0.0;
            ln_val += (n_sel - 1) * std::log(reg);
        }
        return std::exp(ln_val);
    };
    return std::log(specfun::integrate_semi_infinite(integrand, spec)) + peak;
}

} // namespace

BoundResult tas_lower_bound(const sim::SystemConfig& config, const weibull::WeibullSumFit& fit,
                            const specfun::QuadratureSpec& spec) {
    if (fit.n_terms != config.n_rx)
        throw std::domain_error("tas_lower_bound: fit was computed for a different n_rx");
    check_rho_alpha(config.rho, config.quant.alpha());

    const int n_tx = config.n_tx;
    const double n_rx = config.n_rx;
    const double rho = config.rho;
    const double alpha = config.quant.alpha();

    double ln_zg = ln_order_stat_integral(n_rx, n_rx + 1.0, n_tx, spec);
    double ln_g = ln_order_stat_integral(n_rx, n_rx, n_tx, spec);

    IntegralDiagnostics diag;
    diag.z_g = std::exp(ln_zg);
    diag.g = std::exp(ln_g);

    // Denominator assembled as Int G * (1 + rho*(1-alpha)*Int G_q / Int G) so
    // only ratios of the (potentially huge) integrals are ever formed.
    double quant_term = 0.0;
    if (alpha < 1.0) {
        double ln_gq_pref = std::log(2.0) + ln_gamma(n_rx + 1.0) - ln_gamma(fit.mu + 1.0 / fit.k);
        double ln_gq = ln_gq_pref +
                       ln_order_stat_integral(fit.mu, fit.mu + 1.0 / fit.k - 1.0, n_tx, spec);
        diag.g_q = std::exp(ln_gq);
        quant_term = rho * (1.0 - alpha) * std::exp(ln_gq - ln_g);
    }
    double sinr = rho * alpha * std::exp(ln_zg - ln_g) / (1.0 + quant_term);
    return {std::log2(1.0 + sinr), BoundKind::LowerBound, diag};
}

BoundResult tas_rate_nr1(int n_tx, double rho, double alpha) {
    check_rho_alpha(rho, alpha);
    double h = specfun::harmonic(n_tx);
    double sinr = rho * alpha * h / (1.0 + rho * (1.0 - alpha) * h);
    return {std::log2(1.0 + sinr), BoundKind::Approximation, std::nullopt};
}

BoundResult tas_rate_nr1_asymptotic(int n_tx, double rho, double alpha) {
    if (n_tx < 2) throw std::domain_error("tas_rate_nr1_asymptotic: requires n_tx >= 2");
    check_rho_alpha(rho, alpha);
    double h = std::log(static_cast<double>(n_tx)) + specfun::euler_gamma;
    double sinr = rho * alpha * h / (1.0 + rho * (1.0 - alpha) * h);
    return {std::log2(1.0 + sinr), BoundKind::Approximation, std::nullopt};
}

BoundResult siso_upper_bound(double rho, double alpha) {
    check_rho_alpha(rho, alpha);
    double sinr = rho * alpha / (1.0 + rho * (1.0 - alpha));
    return {std::log2(1.0 + sinr), BoundKind::UpperBound, std::nullopt};
}

BoundResult siso_exact_rate(double rho, double alpha) {
    check_rho_alpha(rho, alpha);
    const double beta = 1.0 - alpha;
    const double ln2 = std::log(2.0);
    double first = specfun::exp_scaled_e1(1.0 / rho);
    if (beta == 0.0) return {first / ln2, BoundKind::Exact, std::nullopt};
    double second = specfun::exp_scaled_e1(1.0 / (rho * beta));
    return {(first - second) / ln2, BoundKind::Exact, std::nullopt};
}

} // namespace tasrate::bounds
