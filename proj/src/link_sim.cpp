#include "tasrate/link_sim.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "tasrate/specfun.hpp"

namespace tasrate::sim {

namespace {

constexpr std::uint64_t golden = 0x9E3779B97F4A7C15ull;

// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t z) {
    z += golden;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

} // namespace

TrialRng::TrialRng(std::uint64_t seed, std::uint64_t trial)
    : base_(mix64(seed ^ mix64(trial * 0xA24BAED4963EE407ull))) {}

TrialRng TrialRng::substream(std::uint64_t idx) const {
    return TrialRng(mix64(base_ ^ mix64((idx + 1) * 0xD6E8FEB86659FD93ull)));
}

std::uint64_t TrialRng::next_u64() {
    ctr_ += golden;
    return mix64(base_ ^ ctr_);
}

double TrialRng::next_uniform() {
    return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1p-53;
}

ChannelMatrix draw_channel(const TrialRng& rng, int n_tx, int n_rx) {
    if (n_tx < 1 || n_rx < 1) throw std::domain_error("draw_channel: antenna counts must be >= 1");
    ChannelMatrix h(n_rx, n_tx);
    for (int i = 0; i < n_tx; i++) {
        TrialRng col = rng.substream(static_cast<std::uint64_t>(i));
        for (int j = 0; j < n_rx; j++) {
            // Polar form: |h|^2 is exactly Exp(1), phase uniform.
            double u1 = col.next_uniform();
            double u2 = col.next_uniform();
            double r = std::sqrt(-std::log(u1));
            double phi = 2.0 * specfun::pi * u2;
            h.entry(j, i) = {r * std::cos(phi), r * std::sin(phi)};
        }
    }
    return h;
}

double instantaneous_rate(std::span<const std::complex<double>> column, double rho, double alpha) {
    double norm2 = 0.0, quartic = 0.0;
    for (const auto& hj : column) {
        double g = std::norm(hj);
        if (!std::isfinite(g)) throw std::domain_error("instantaneous_rate: non-finite channel entry");
        norm2 += g;
        quartic += g * g;
    }
    if (norm2 == 0.0) return 0.0;
    double sinr = rho * alpha * norm2 * norm2 / (norm2 + rho * (1.0 - alpha) * quartic);
    return std::log2(1.0 + sinr);
}

int select_antenna(const ChannelMatrix& h, double rho, double alpha, SelectionRule rule) {
    switch (rule.kind) {
    case SelectionRule::Kind::Fixed:
        if (rule.fixed_index < 0 || rule.fixed_index >= h.n_tx())
            throw std::domain_error("select_antenna: fixed index out of range");
        return rule.fixed_index;
    case SelectionRule::Kind::ExactRateMax: {
        int best = 0;
        double best_rate = instantaneous_rate(h.column(0), rho, alpha);
        for (int i = 1; i < h.n_tx(); i++) {
            double r = instantaneous_rate(h.column(i), rho, alpha);
            if (r > best_rate) { best = i; best_rate = r; }
        }
        return best;
    }
    case SelectionRule::Kind::NormMax:
    case SelectionRule::Kind::QuarticMax: {
        const bool quartic = rule.kind == SelectionRule::Kind::QuarticMax;
        int best = 0;
        double best_metric = -1.0;
        for (int i = 0; i < h.n_tx(); i++) {
            double metric = 0.0;
            for (const auto& hj : h.column(i)) {
                double g = std::norm(hj);
                metric += quartic ? g * g : g;
            }
            if (metric > best_metric) { best = i; best_metric = metric; }
        }
        return best;
    }
    }
    throw std::logic_error("select_antenna: unknown rule");
}

MonteCarloEstimate estimate_ergodic_rate(const SystemConfig& config, SelectionRule rule,
                                         long long trials, std::uint64_t seed, int workers) {
    if (config.n_tx < 1 || config.n_rx < 1)
        throw std::domain_error("estimate_ergodic_rate: antenna counts must be >= 1");
    if (config.rho <= 0.0) throw std::domain_error("estimate_ergodic_rate: rho must be positive");
    if (trials < 1) throw std::domain_error("estimate_ergodic_rate: trials must be >= 1");
    if (workers <= 0) workers = std::max(1u, std::thread::hardware_concurrency());

    const double rho = config.rho;
    const double alpha = config.quant.alpha();

    // Fixed-size blocks of trials; each block's (sum, sum of squares) pair is
    // independent of who computes it, and blocks merge in index order, so the
    // result does not depend on the partitioning.
    constexpr long long block_size = 4096;
    const long long n_blocks = (trials + block_size - 1) / block_size;
    std::vector<double> block_sum(n_blocks), block_sum2(n_blocks);

    auto run_block = [&](long long blk) {
        long long lo = blk * block_size;
        long long hi = std::min(trials, lo + block_size);
        double s = 0.0, s2 = 0.0;
        for (long long t = lo; t < hi; t++) {
            TrialRng rng(seed, static_cast<std::uint64_t>(t));
            ChannelMatrix h = draw_channel(rng, config.n_tx, config.n_rx);
            int idx = select_antenna(h, rho, alpha, rule);
            double r = instantaneous_rate(h.column(idx), rho, alpha);
            s += r;
            s2 += r * r;
        }
        block_sum[blk] = s;
        block_sum2[blk] = s2;
    };

    int n_workers = static_cast<int>(std::min<long long>(workers, n_blocks));
    if (n_workers <= 1) {
        for (long long blk = 0; blk < n_blocks; blk++) run_block(blk);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(n_workers);
        for (int w = 0; w < n_workers; w++) {
            pool.emplace_back([&, w] {
                for (long long blk = w; blk < n_blocks; blk += n_workers) run_block(blk);
            });
        }
        for (auto& th : pool) th.join();
    }

    double sum = 0.0, sum2 = 0.0;
    for (long long blk = 0; blk < n_blocks; blk++) {
        sum += block_sum[blk];
        sum2 += block_sum2[blk];
    }
    double mean = sum / trials;
    double std_error = 0.0;
    if (trials > 1) {
        double var = (sum2 - sum * sum / trials) / (trials - 1);
        std_error = std::sqrt(std::max(0.0, var) / trials);
    }
    return {mean, std_error, trials, seed};
}

} // namespace tasrate::sim
