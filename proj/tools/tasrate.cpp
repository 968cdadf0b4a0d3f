// Command-line front end: analytic bounds, Monte Carlo estimates, parameter
// sweeps with CSV/SVG output, distribution-fit reports, quantizer design and
// figure-reproduction presets.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "tasrate/bounds.hpp"
#include "tasrate/link_sim.hpp"
#include "tasrate/quantization.hpp"
#include "tasrate/sweep.hpp"

namespace {

using namespace tasrate;

double parse_bits_token(const std::string& tok) {
    if (tok == "inf") return std::numeric_limits<double>::infinity();
    size_t pos = 0;
    int b = std::stoi(tok, &pos);
    if (pos != tok.size() || b < 1) throw CLI::ValidationError("--bits", "expected integer >= 1 or 'inf'");
    return b;
}

std::vector<double> parse_list(const std::string& text, bool bits) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        out.push_back(bits ? parse_bits_token(tok) : std::stod(tok));
    }
    if (out.empty()) throw CLI::ValidationError("list", "no values in '" + text + "'");
    return out;
}

// "v", "a,b,c" or "from:to:step".
std::vector<double> parse_values(const std::string& text, bool bits) {
    if (text.find(':') == std::string::npos) return parse_list(text, bits);
    std::stringstream ss(text);
    std::string tok;
    std::vector<double> parts;
    while (std::getline(ss, tok, ':')) parts.push_back(std::stod(tok));
    if (parts.size() != 3 || parts[2] <= 0.0)
        throw CLI::ValidationError("range", "expected from:to:step with step > 0");
    std::vector<double> out;
    for (double v = parts[0]; v <= parts[1] + 1e-9; v += parts[2]) out.push_back(v);
    return out;
}

quant::QuantizationModel model_from(double bits_value) {
    return std::isinf(bits_value) ? quant::QuantizationModel::infinite()
                                  : quant::QuantizationModel::from_bits(int(bits_value));
}

sim::SelectionRule parse_rule(const std::string& text) {
    if (text == "exact") return sim::SelectionRule::exact_rate_max();
    if (text == "norm") return sim::SelectionRule::norm_max();
    if (text == "quartic") return sim::SelectionRule::quartic_max();
    if (text.rfind("fixed:", 0) == 0) {
        int idx = std::stoi(text.substr(6));
        if (idx < 1) throw CLI::ValidationError("--rule", "fixed index is 1-based");
        return sim::SelectionRule::fixed(idx - 1);
    }
    throw CLI::ValidationError("--rule", "expected exact|norm|quartic|fixed:<i>");
}

sweep::Series parse_series(const std::string& name) {
    using sweep::Series;
    for (Series s : {Series::Cor1, Series::Cor2, Series::ExactSiso, Series::LbThm1,
                     Series::McExact, Series::McNorm, Series::UbThm2})
        if (name == sweep::series_name(s)) return s;
    throw CLI::ValidationError("--outputs", "unknown series '" + name + "'");
}

struct CommonOpts {
    std::string nt = "1";
    std::string nr = "1";
    std::string bits = "inf";
    std::string snr_db = "10";
    std::string rule = "exact";
    long long trials = 100000;
    std::uint64_t seed = 1;
    std::string out;
    std::string svg;
    double tol = 0.0; // 0 keeps the quadrature defaults
};

void add_config_flags(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--nt", o.nt, "Transmit antennas (comma list where a sweep axis)");
    cmd->add_option("--nr", o.nr, "Receive antennas (comma list where a sweep axis)");
    cmd->add_option("--bits", o.bits, "ADC bits, integer or 'inf' (comma list allowed)");
    cmd->add_option("--snr-db", o.snr_db, "Transmit SNR in dB, value or from:to:step");
}

double single(const std::vector<double>& v, const char* what) {
    if (v.size() != 1) throw CLI::ValidationError(what, "expected a single value here");
    return v[0];
}

int report_errors(const std::vector<std::string>& errors) {
    if (errors.empty()) return 0;
    std::cerr << errors.size() << " series failed:\n";
    for (const auto& e : errors) std::cerr << "  " << e << "\n";
    return 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Ergodic-rate analysis of transmit antenna selection under "
                 "low-resolution ADC quantization"};
    app.require_subcommand(1);

    CommonOpts o;

    auto* bound = app.add_subcommand("bound", "Evaluate the analytic rate expressions");
    add_config_flags(bound, o);
    bound->add_option("--tol", o.tol, "Quadrature relative tolerance");
    bound->add_option("--out", o.out, "Write the results as CSV");

    auto* simulate = app.add_subcommand("simulate", "Monte Carlo ergodic-rate estimate");
    add_config_flags(simulate, o);
    simulate->add_option("--rule", o.rule, "Selection rule: exact|norm|quartic|fixed:<i>");
    simulate->add_option("--trials", o.trials, "Monte Carlo trials");
    simulate->add_option("--seed", o.seed, "RNG seed");
    int workers = 0;
    simulate->add_option("--workers", workers, "Worker threads (0 = hardware)");

    auto* sweep_cmd = app.add_subcommand("sweep", "Parameter sweep with CSV/SVG output");
    std::string axis_text = "snr_db", outputs_text;
    add_config_flags(sweep_cmd, o);
    sweep_cmd->add_option("--axis", axis_text, "Sweep axis: snr_db|nt|nr|bits");
    sweep_cmd->add_option("--outputs", outputs_text, "Comma list of series")->required();
    sweep_cmd->add_option("--trials", o.trials, "Monte Carlo trials per point");
    sweep_cmd->add_option("--seed", o.seed, "RNG seed");
    sweep_cmd->add_option("--out", o.out, "CSV output path");
    sweep_cmd->add_option("--svg", o.svg, "SVG chart output path");

    auto* fit_cmd = app.add_subcommand("fit", "Fit the receive-array quartic-sum distribution");
    int fit_nr = 0;
    long long fit_draws = 1000000;
    fit_cmd->add_option("--nr", fit_nr, "Receive antennas")->required();
    fit_cmd->add_option("--trials", fit_draws, "Empirical-CDF sample size");
    fit_cmd->add_option("--seed", o.seed, "RNG seed");
    fit_cmd->add_option("--out", o.out, "Write the report as CSV");

    auto* quantizer = app.add_subcommand("quantizer", "Design the Lloyd-Max MMSE quantizer");
    int q_bits = 0;
    double q_tol = 1e-12;
    quantizer->add_option("--bits", q_bits, "Quantizer resolution (1..8)")->required();
    quantizer->add_option("--tol", q_tol, "Fixed-point tolerance");

    auto* repro = app.add_subcommand("reproduce", "Run a figure-reproduction preset");
    std::string figure_text;
    std::string out_dir = ".";
    long long repro_trials = 0;
    repro->add_option("--figure", figure_text, "fig2a|fig2b|fig3a|fig3b")->required();
    repro->add_option("--out", out_dir, "Output directory");
    repro->add_option("--trials", repro_trials, "Override the preset trial count");
    repro->add_option("--seed", o.seed, "RNG seed");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*bound) {
            sim::SystemConfig cfg;
            cfg.n_tx = int(single(parse_values(o.nt, false), "--nt"));
            cfg.n_rx = int(single(parse_values(o.nr, false), "--nr"));
            cfg.quant = model_from(single(parse_values(o.bits, true), "--bits"));
            double snr_db = single(parse_values(o.snr_db, false), "--snr-db");
            cfg.rho = std::pow(10.0, snr_db / 10.0);
            specfun::QuadratureSpec quad;
            if (o.tol > 0.0) quad.relative_tolerance = o.tol;

            std::vector<std::pair<std::string, double>> results;
            results.emplace_back("lb_thm1",
                                 bounds::tas_lower_bound(cfg, weibull::fit(cfg.n_rx), quad).value);
            if (cfg.n_rx == 1) {
                results.emplace_back("cor1",
                                     bounds::tas_rate_nr1(cfg.n_tx, cfg.rho, cfg.quant.alpha()).value);
                if (cfg.n_tx >= 2)
                    results.emplace_back(
                        "cor2",
                        bounds::tas_rate_nr1_asymptotic(cfg.n_tx, cfg.rho, cfg.quant.alpha()).value);
            }
            if (cfg.n_tx == 1 && cfg.n_rx == 1) {
                results.emplace_back("ub_thm2",
                                     bounds::siso_upper_bound(cfg.rho, cfg.quant.alpha()).value);
                results.emplace_back("exact_siso",
                                     bounds::siso_exact_rate(cfg.rho, cfg.quant.alpha()).value);
            }
            for (const auto& [name, value] : results) std::printf("%-11s %.10g\n", name.c_str(), value);
            if (!o.out.empty()) {
                std::ofstream os(o.out);
                if (!os) throw std::runtime_error("cannot open " + o.out);
                std::vector<sweep::SweepRow> rows;
                for (const auto& [name, value] : results)
                    rows.push_back({snr_db, name, value, -1.0, 0, 0});
                std::ostringstream cc;
                cc << "bound n_t=" << cfg.n_tx << " n_r=" << cfg.n_rx << " bits=" << o.bits
                   << " snr_db=" << snr_db;
                sweep::write_csv(os, sweep::Axis::SnrDb, cc.str(), rows);
            }
            return 0;
        }

        if (*simulate) {
            sim::SystemConfig cfg;
            cfg.n_tx = int(single(parse_values(o.nt, false), "--nt"));
            cfg.n_rx = int(single(parse_values(o.nr, false), "--nr"));
            cfg.quant = model_from(single(parse_values(o.bits, true), "--bits"));
            cfg.rho = std::pow(10.0, single(parse_values(o.snr_db, false), "--snr-db") / 10.0);
            auto est = sim::estimate_ergodic_rate(cfg, parse_rule(o.rule), o.trials, o.seed, workers);
            std::printf("rate_bits  %.10g\nstd_err    %.4g\ntrials     %lld\nseed       %llu\n",
                        est.mean, est.std_error, est.trials,
                        static_cast<unsigned long long>(est.seed));
            return 0;
        }

        if (*sweep_cmd) {
            sweep::Axis axis;
            if (axis_text == "snr_db") axis = sweep::Axis::SnrDb;
            else if (axis_text == "nt") axis = sweep::Axis::NumTx;
            else if (axis_text == "nr") axis = sweep::Axis::NumRx;
            else if (axis_text == "bits") axis = sweep::Axis::Bits;
            else throw CLI::ValidationError("--axis", "expected snr_db|nt|nr|bits");

            std::vector<sweep::Series> outputs;
            for (const auto& tok : [&] {
                     std::vector<std::string> names;
                     std::stringstream ss(outputs_text);
                     std::string t;
                     while (std::getline(ss, t, ',')) names.push_back(t);
                     return names;
                 }())
                outputs.push_back(parse_series(tok));

            sweep::SweepSpec spec;
            spec.axis = axis;
            spec.trials = o.trials;
            spec.seed = o.seed;
            spec.outputs = outputs;

            std::vector<double> bits_list = parse_values(o.bits, true);
            spec.base.n_tx = axis == sweep::Axis::NumTx
                                 ? 1
                                 : int(single(parse_values(o.nt, false), "--nt"));
            spec.base.n_rx = axis == sweep::Axis::NumRx
                                 ? 1
                                 : int(single(parse_values(o.nr, false), "--nr"));
            if (axis != sweep::Axis::SnrDb)
                spec.base.rho =
                    std::pow(10.0, single(parse_values(o.snr_db, false), "--snr-db") / 10.0);

            switch (axis) {
            case sweep::Axis::SnrDb: spec.values = parse_values(o.snr_db, false); break;
            case sweep::Axis::NumTx: spec.values = parse_values(o.nt, false); break;
            case sweep::Axis::NumRx: spec.values = parse_values(o.nr, false); break;
            case sweep::Axis::Bits: spec.values = bits_list; break;
            }

            std::vector<sweep::SweepRow> rows;
            std::vector<std::string> errors;
            std::ostringstream comment;
            if (axis != sweep::Axis::Bits && bits_list.size() > 1) {
                for (double b : bits_list) {
                    spec.base.quant = model_from(b);
                    std::string tag = std::isinf(b) ? "_binf" : "_b" + std::to_string(int(b));
                    auto r = sweep::run_sweep(spec, tag);
                    rows.insert(rows.end(), r.rows.begin(), r.rows.end());
                    errors.insert(errors.end(), r.errors.begin(), r.errors.end());
                }
                std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
                    return a.axis_value != b.axis_value ? a.axis_value < b.axis_value
                                                        : a.series < b.series;
                });
            } else {
                if (axis != sweep::Axis::Bits) spec.base.quant = model_from(bits_list[0]);
                auto r = sweep::run_sweep(spec);
                rows = std::move(r.rows);
                errors = std::move(r.errors);
            }
            comment << sweep::describe_config(spec) << " bits_list=" << o.bits;

            if (!o.out.empty()) {
                std::ofstream os(o.out);
                if (!os) throw std::runtime_error("cannot open " + o.out);
                sweep::write_csv(os, axis, comment.str(), rows);
            } else {
                sweep::write_csv(std::cout, axis, comment.str(), rows);
            }
            if (!o.svg.empty())
                sweep::write_svg(o.svg, "Parameter sweep", axis_text, "Ergodic rate (bits/s/Hz)",
                                 rows);
            return report_errors(errors);
        }

        if (*fit_cmd) {
            auto report = sweep::fit_report(fit_nr, fit_draws, o.seed);
            std::printf("n_r        %d\nk          %.10g\nmu         %.10g\nomega      %.10g\n"
                        "residual   %.3g\nks         %.5g\ndraws      %lld\nseed       %llu\n",
                        report.fit.n_terms, report.fit.k, report.fit.mu, report.fit.omega,
                        report.fit.residual_norm, report.ks_distance, report.draws,
                        static_cast<unsigned long long>(report.seed));
            if (!o.out.empty()) {
                std::ofstream os(o.out);
                if (!os) throw std::runtime_error("cannot open " + o.out);
                os << "n_r,k,mu,omega,residual,ks,draws,seed\n";
                char buf[256];
                std::snprintf(buf, sizeof buf, "%d,%.12g,%.12g,%.12g,%.3g,%.5g,%lld,%llu\n",
                              report.fit.n_terms, report.fit.k, report.fit.mu, report.fit.omega,
                              report.fit.residual_norm, report.ks_distance, report.draws,
                              static_cast<unsigned long long>(report.seed));
                os << buf;
            }
            return 0;
        }

        if (*quantizer) {
            auto q = quant::lloyd_max_design(q_bits, q_tol);
            std::printf("bits       %d\nmse(beta)  %.8g\n", q_bits, q.mse);
            if (q_bits <= 8) std::printf("aqnm_beta  %.8g\n", quant::aqnm_beta(q_bits));
            std::printf("levels    ");
            for (double l : q.levels) std::printf(" %.8g", l);
            std::printf("\nthresholds");
            for (double t : q.thresholds) std::printf(" %.8g", t);
            std::printf("\niterations %d\n", q.iterations);
            return 0;
        }

        if (*repro) {
            sweep::Figure fig;
            if (figure_text == "fig2a") fig = sweep::Figure::Fig2a;
            else if (figure_text == "fig2b") fig = sweep::Figure::Fig2b;
            else if (figure_text == "fig3a") fig = sweep::Figure::Fig3a;
            else if (figure_text == "fig3b") fig = sweep::Figure::Fig3b;
            else throw CLI::ValidationError("--figure", "expected fig2a|fig2b|fig3a|fig3b");
            auto files = sweep::reproduce(fig, out_dir, repro_trials, o.seed);
            std::printf("wrote %s\nwrote %s\n", files.csv.c_str(), files.svg.c_str());
            return report_errors(files.errors);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
