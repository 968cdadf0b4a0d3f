#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "tasrate/quantization.hpp"

// Rayleigh channel generation, antenna selection and seeded Monte Carlo
// estimation of the ergodic quantized rate.
namespace tasrate::sim {

struct SystemConfig {
    int n_tx = 1;
    int n_rx = 1;
    double rho = 1.0; // linear transmit SNR; dB conversion happens at the CLI
    quant::QuantizationModel quant = quant::QuantizationModel::infinite();
};

// Counter-based generator: every draw is a pure function of (seed, trial,
// substream, counter), so Monte Carlo trials can be partitioned across any
// number of workers without changing the stream.
class TrialRng {
  public:
    TrialRng(std::uint64_t seed, std::uint64_t trial);

    // Independent child stream, used to give every transmit antenna its own
    // substream (a channel matrix is then a prefix-stable function of n_tx).
    TrialRng substream(std::uint64_t idx) const;

    std::uint64_t next_u64();
    double next_uniform(); // in (0, 1]

  private:
    explicit TrialRng(std::uint64_t base) : base_(base) {}
    std::uint64_t base_;
    std::uint64_t ctr_ = 0;
};

// Column-major N_r x N_t matrix of complex channel gains.
class ChannelMatrix {
  public:
    ChannelMatrix(int n_rx, int n_tx)
        : n_rx_(n_rx), n_tx_(n_tx), entries_(static_cast<size_t>(n_rx) * n_tx) {}

    int n_rx() const noexcept { return n_rx_; }
    int n_tx() const noexcept { return n_tx_; }
    std::complex<double>& entry(int rx, int tx) { return entries_[size_t(tx) * n_rx_ + rx]; }
    const std::complex<double>& entry(int rx, int tx) const {
        return entries_[size_t(tx) * n_rx_ + rx];
    }
    std::span<const std::complex<double>> column(int tx) const {
        return {entries_.data() + size_t(tx) * n_rx_, size_t(n_rx_)};
    }

  private:
    int n_rx_, n_tx_;
    std::vector<std::complex<double>> entries_;
};

// IID CN(0,1) entries, deterministic given the generator state.
ChannelMatrix draw_channel(const TrialRng& rng, int n_tx, int n_rx);

struct SelectionRule {
    enum class Kind { ExactRateMax, NormMax, QuarticMax, Fixed };
    Kind kind = Kind::ExactRateMax;
    int fixed_index = 0; // 0-based, used when kind == Fixed

    static SelectionRule exact_rate_max() { return {Kind::ExactRateMax, 0}; }
    static SelectionRule norm_max() { return {Kind::NormMax, 0}; }
    static SelectionRule quartic_max() { return {Kind::QuarticMax, 0}; }
    static SelectionRule fixed(int index) { return {Kind::Fixed, index}; }
};

// log2(1 + rho*alpha*|h|^4 / (|h|^2 + rho*(1-alpha)*sum_j |h_j|^4)), the
// post-combining rate with the AQNM noise term; 0 for the all-zero column.
double instantaneous_rate(std::span<const std::complex<double>> column, double rho, double alpha);

// 0-based selected column under the rule; ties break to the lowest index.
int select_antenna(const ChannelMatrix& h, double rho, double alpha, SelectionRule rule);

struct MonteCarloEstimate {
    double mean = 0.0;      // bits/s/Hz
    double std_error = 0.0; // sample std / sqrt(trials)
    long long trials = 0;
    std::uint64_t seed = 0;
};

// Sample mean of the selected antenna's instantaneous rate over independent
// channel draws.  Bit-identical for a fixed (config, rule, trials, seed)
// regardless of the worker count: trial t depends only on (seed, t) and the
// per-block partial sums are merged in a fixed order.  workers = 0 picks the
// hardware concurrency.
MonteCarloEstimate estimate_ergodic_rate(const SystemConfig& config, SelectionRule rule,
                                         long long trials, std::uint64_t seed, int workers = 0);

} // namespace tasrate::sim
