#pragma once

#include <filesystem>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "tasrate/bounds.hpp"
#include "tasrate/link_sim.hpp"

// Parameter sweeps, CSV/SVG emission and the figure-reproduction presets that
// drive the simulation study.
namespace tasrate::sweep {

enum class Axis { SnrDb, NumTx, NumRx, Bits };

enum class Series { Cor1, Cor2, ExactSiso, LbThm1, McExact, McNorm, UbThm2 };

const char* axis_name(Axis axis);
const char* series_name(Series series);

struct SweepSpec {
    Axis axis = Axis::SnrDb;
    // Axis values; for the bits axis an infinity stands for unquantized.
    std::vector<double> values;
    sim::SystemConfig base; // fixed fields; the axis overrides one of them
    long long trials = 100000;
    std::uint64_t seed = 1;
    std::vector<Series> outputs;
};

struct SweepRow {
    double axis_value = 0.0;
    std::string series;               // label, e.g. "mc_exact" or "lb_thm1_b3"
    double rate = 0.0;                // bits/s/Hz
    double std_error = -1.0;          // < 0 means analytic (empty in the CSV)
    long long trials = 0;             // 0 for analytic series
    std::uint64_t seed = 0;
};

struct SweepResult {
    std::vector<SweepRow> rows; // ordered by (axis value, series label)
    std::vector<std::string> errors;
};

// Validates the spec (throws std::invalid_argument before any computation on
// an incompatible output/config combination), then evaluates every requested
// series at every axis value.  Per-cell computation failures are collected in
// errors rather than aborting the sweep.  Deterministic for a fixed spec.
SweepResult run_sweep(const SweepSpec& spec, const std::string& series_suffix = "");

// CSV schema: one comment line with the fully resolved configuration, then
//   axis,value,series,rate_bits,std_err,trials,seed
void write_csv(std::ostream& os, Axis axis, const std::string& config_comment,
               const std::vector<SweepRow>& rows);

std::string describe_config(const SweepSpec& spec);

// Minimal static SVG line chart: one polyline per series, linear axes, legend.
void write_svg(const std::filesystem::path& path, const std::string& title,
               const std::string& x_label, const std::string& y_label,
               const std::vector<SweepRow>& rows);

struct FitReport {
    weibull::WeibullSumFit fit;
    double ks_distance = 0.0;
    long long draws = 0;
    std::uint64_t seed = 0;
};

// Fits the receive-array quartic-sum distribution and measures the
// Kolmogorov-Smirnov distance against a fresh simulated empirical CDF.
FitReport fit_report(int n_rx, long long draws = 1000000, std::uint64_t seed = 1);

enum class Figure { Fig2a, Fig2b, Fig3a, Fig3b };

struct FigureFiles {
    std::filesystem::path csv;
    std::filesystem::path svg;
    std::vector<std::string> errors;
};

// Runs the preset sweeps behind one of the four study figures and writes
// <name>.csv and <name>.svg under out_dir.  trials_override > 0 replaces the
// preset trial count (the presets default to 1e6 per point).
FigureFiles reproduce(Figure figure, const std::filesystem::path& out_dir,
                      long long trials_override = 0, std::uint64_t seed = 1, int workers = 0);

} // namespace tasrate::sweep
