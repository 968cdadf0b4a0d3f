#include "tasrate/quantization.hpp"

#include <cmath>
#include <limits>

#include "tasrate/specfun.hpp"

namespace tasrate::quant {

namespace {

// Max (1960) distortion table for the scalar MMSE quantizer, b = 1..5.
// The test suite re-derives these with lloyd_max_design rather than trusting
// the transcription.
constexpr double beta_table[5] = {0.3634, 0.1175, 0.03454, 0.009497, 0.002499};

double std_normal_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * specfun::pi); }
double std_normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

} // namespace

double aqnm_beta(int bits) {
    if (bits < 1) throw std::domain_error("aqnm_beta: requires bits >= 1");
    if (bits <= 5) return beta_table[bits - 1];
    return specfun::pi * std::sqrt(3.0) / 2.0 * std::pow(2.0, -2.0 * bits);
}

QuantizationModel QuantizationModel::from_bits(int bits) {
    return QuantizationModel(bits, aqnm_beta(bits));
}

QuantizationModel QuantizationModel::infinite() { return QuantizationModel(std::nullopt, 0.0); }

int QuantizationModel::bits() const {
    if (!bits_) throw std::logic_error("QuantizationModel: infinite resolution has no bit count");
    return *bits_;
}

ScalarQuantizer lloyd_max_design(int bits, double tol, int max_iter) {
    if (bits < 1 || bits > 8) throw std::domain_error("lloyd_max_design: requires 1 <= bits <= 8");
    if (tol <= 0.0) throw std::domain_error("lloyd_max_design: tol must be positive");

    const int n = 1 << bits;
    std::vector<double> levels(n), thresholds(n - 1);
    for (int i = 0; i < n; i++) levels[i] = -3.0 + 6.0 * i / (n - 1);

    // Partial moments of the cell [lo, hi) under the standard normal.
    auto cell_mass = [](double lo, double hi) { return std_normal_cdf(hi) - std_normal_cdf(lo); };
    auto cell_mean = [](double lo, double hi) {
        double plo = std::isinf(lo) ? 0.0 : std_normal_pdf(lo);
        double phi = std::isinf(hi) ? 0.0 : std_normal_pdf(hi);
        return plo - phi;
    };
    const double inf = std::numeric_limits<double>::infinity();

    int it = 0;
    for (;; it++) {
        if (it >= max_iter)
            throw ConvergenceError("lloyd_max_design: centroid iteration did not converge", 0.0);
        for (int i = 0; i + 1 < n; i++) thresholds[i] = 0.5 * (levels[i] + levels[i + 1]);
        double moved = 0.0;
        for (int i = 0; i < n; i++) {
            double lo = i == 0 ? -inf : thresholds[i - 1];
            double hi = i == n - 1 ? inf : thresholds[i];
            double centroid = cell_mean(lo, hi) / cell_mass(lo, hi);
            moved = std::max(moved, std::fabs(centroid - levels[i]));
            levels[i] = centroid;
        }
        if (moved < tol) break;
    }
    for (int i = 0; i + 1 < n; i++) thresholds[i] = 0.5 * (levels[i] + levels[i + 1]);

    // E[(Y - Q(Y))^2] = 1 - 2 sum c_i m_i + sum c_i^2 P_i for the unit Gaussian.
    double mse = 1.0;
    for (int i = 0; i < n; i++) {
        double lo = i == 0 ? -inf : thresholds[i - 1];
        double hi = i == n - 1 ? inf : thresholds[i];
        mse += -2.0 * levels[i] * cell_mean(lo, hi) + levels[i] * levels[i] * cell_mass(lo, hi);
    }
    return {std::move(levels), std::move(thresholds), mse, it + 1};
}

double quantization_noise_power(const QuantizationModel& model, double per_antenna_gain,
                                double rho) {
    if (!(per_antenna_gain >= 0.0) || !(rho >= 0.0) || !std::isfinite(per_antenna_gain) ||
        !std::isfinite(rho))
        throw std::domain_error("quantization_noise_power: requires finite nonnegative inputs");
    return model.alpha() * model.beta() * (rho * per_antenna_gain + 1.0);
}

} // namespace tasrate::quant
