#pragma once

#include <optional>
#include <vector>

#include "tasrate/errors.hpp"

// Additive-quantization-noise distortion model and the Lloyd-Max scalar MMSE
// quantizer used as its independent oracle.
namespace tasrate::quant {

// Normalized distortion beta(b) of a scalar MMSE quantizer for a unit-variance
// Gaussian input: tabulated for b <= 5, (pi*sqrt(3)/2) * 2^(-2b) for b > 5.
double aqnm_beta(int bits);

// Distortion model for a given ADC resolution; alpha = 1 - beta is the
// quantization gain.  Infinite resolution means beta = 0.
class QuantizationModel {
  public:
    static QuantizationModel from_bits(int bits);
    static QuantizationModel infinite();

    bool is_infinite() const noexcept { return !bits_.has_value(); }
    int bits() const; // throws if infinite
    double beta() const noexcept { return beta_; }
    double alpha() const noexcept { return 1.0 - beta_; }

  private:
    QuantizationModel(std::optional<int> bits, double beta) : bits_(bits), beta_(beta) {}
    std::optional<int> bits_;
    double beta_;
};

struct ScalarQuantizer {
    std::vector<double> levels;     // 2^b reproduction points, odd-symmetric
    std::vector<double> thresholds; // 2^b - 1 cell boundaries
    double mse = 0.0;               // normalized distortion for the unit Gaussian
    int iterations = 0;
};

// Lloyd-Max fixed point for the zero-mean unit-variance Gaussian source:
// alternate centroid and midpoint updates until the levels move less than tol.
// Cell means use the closed-form normal pdf/cdf expressions.
ScalarQuantizer lloyd_max_design(int bits, double tol = 1e-12, int max_iter = 20000);

// Per-receive-antenna quantization noise power normalized by the AWGN
// variance: alpha*(1-alpha)*(rho*|h_j|^2 + 1), the diagonal entry of the
// AQNM noise covariance.
double quantization_noise_power(const QuantizationModel& model, double per_antenna_gain,
                                double rho);

} // namespace tasrate::quant
