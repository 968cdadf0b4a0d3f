#include "tasrate/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace tasrate::sweep {

const char* axis_name(Axis axis) {
    switch (axis) {
    case Axis::SnrDb: return "snr_db";
    case Axis::NumTx: return "n_t";
    case Axis::NumRx: return "n_r";
    case Axis::Bits: return "bits";
    }
    return "?";
}

const char* series_name(Series series) {
    switch (series) {
    case Series::Cor1: return "cor1";
    case Series::Cor2: return "cor2";
    case Series::ExactSiso: return "exact_siso";
    case Series::LbThm1: return "lb_thm1";
    case Series::McExact: return "mc_exact";
    case Series::McNorm: return "mc_norm";
    case Series::UbThm2: return "ub_thm2";
    }
    return "?";
}

namespace {

bool is_positive_integer(double v) { return v >= 1.0 && v == std::floor(v) && v < 1e9; }

void validate(const SweepSpec& spec) {
    if (spec.values.empty()) throw std::invalid_argument("sweep: axis values must be nonempty");
    if (spec.outputs.empty()) throw std::invalid_argument("sweep: outputs must be nonempty");
    if (spec.trials < 1) throw std::invalid_argument("sweep: trials must be >= 1");
    std::set<Series> seen;
    for (Series s : spec.outputs)
        if (!seen.insert(s).second)
            throw std::invalid_argument(std::string("sweep: duplicate output ") + series_name(s));

    for (double v : spec.values) {
        bool ok = true;
        switch (spec.axis) {
        case Axis::SnrDb: ok = std::isfinite(v); break;
        case Axis::NumTx:
        case Axis::NumRx: ok = is_positive_integer(v); break;
        case Axis::Bits: ok = std::isinf(v) || is_positive_integer(v); break;
        }
        if (!ok)
            throw std::invalid_argument("sweep: invalid value for axis " +
                                        std::string(axis_name(spec.axis)));
    }

    auto has = [&](Series s) { return seen.count(s) > 0; };
    if ((has(Series::Cor1) || has(Series::Cor2))) {
        if (spec.axis == Axis::NumRx)
            throw std::invalid_argument("sweep: cor1/cor2 require n_r = 1, not an n_r sweep");
        if (spec.base.n_rx != 1)
            throw std::invalid_argument("sweep: cor1/cor2 require n_r = 1");
    }
    if (has(Series::Cor2)) {
        int min_tx = spec.axis == Axis::NumTx
                         ? static_cast<int>(*std::min_element(spec.values.begin(), spec.values.end()))
                         : spec.base.n_tx;
        if (min_tx < 2) throw std::invalid_argument("sweep: cor2 requires n_t >= 2");
    }
    if (has(Series::UbThm2) || has(Series::ExactSiso)) {
        if (spec.axis == Axis::NumTx || spec.axis == Axis::NumRx || spec.base.n_tx != 1 ||
            spec.base.n_rx != 1)
            throw std::invalid_argument("sweep: ub_thm2/exact_siso require n_t = n_r = 1");
    }
}

sim::SystemConfig config_at(const SweepSpec& spec, double value) {
    sim::SystemConfig cfg = spec.base;
    switch (spec.axis) {
    case Axis::SnrDb: cfg.rho = std::pow(10.0, value / 10.0); break;
    case Axis::NumTx: cfg.n_tx = static_cast<int>(value); break;
    case Axis::NumRx: cfg.n_rx = static_cast<int>(value); break;
    case Axis::Bits:
        cfg.quant = std::isinf(value) ? quant::QuantizationModel::infinite()
                                      : quant::QuantizationModel::from_bits(static_cast<int>(value));
        break;
    }
    return cfg;
}

} // namespace

SweepResult run_sweep(const SweepSpec& spec, const std::string& series_suffix) {
    validate(spec);

    std::vector<double> values = spec.values;
    std::sort(values.begin(), values.end());
    std::vector<Series> outputs = spec.outputs;
    std::sort(outputs.begin(), outputs.end(), [](Series a, Series b) {
        return std::string(series_name(a)) < series_name(b);
    });

    SweepResult result;
    std::map<int, weibull::WeibullSumFit> fit_cache;
    auto fit_for = [&](int n_rx) -> const weibull::WeibullSumFit& {
        auto it = fit_cache.find(n_rx);
        if (it == fit_cache.end()) it = fit_cache.emplace(n_rx, weibull::fit(n_rx)).first;
        return it->second;
    };

    for (double value : values) {
        sim::SystemConfig cfg = config_at(spec, value);
        for (Series s : outputs) {
            std::string label = std::string(series_name(s)) + series_suffix;
            try {
                SweepRow row{value, label, 0.0, -1.0, 0, 0};
                switch (s) {
                case Series::McExact:
                case Series::McNorm: {
                    auto rule = s == Series::McExact ? sim::SelectionRule::exact_rate_max()
                                                     : sim::SelectionRule::norm_max();
                    auto est = sim::estimate_ergodic_rate(cfg, rule, spec.trials, spec.seed);
                    row.rate = est.mean;
                    row.std_error = est.std_error;
                    row.trials = est.trials;
                    row.seed = est.seed;
                    break;
                }
                case Series::LbThm1:
                    row.rate = bounds::tas_lower_bound(cfg, fit_for(cfg.n_rx)).value;
                    break;
                case Series::Cor1:
                    row.rate = bounds::tas_rate_nr1(cfg.n_tx, cfg.rho, cfg.quant.alpha()).value;
                    break;
                case Series::Cor2:
                    row.rate =
                        bounds::tas_rate_nr1_asymptotic(cfg.n_tx, cfg.rho, cfg.quant.alpha()).value;
                    break;
                case Series::UbThm2:
                    row.rate = bounds::siso_upper_bound(cfg.rho, cfg.quant.alpha()).value;
                    break;
                case Series::ExactSiso:
                    row.rate = bounds::siso_exact_rate(cfg.rho, cfg.quant.alpha()).value;
                    break;
                }
                result.rows.push_back(std::move(row));
            } catch (const std::exception& e) {
                std::ostringstream os;
                os << label << " at " << axis_name(spec.axis) << "=" << value << ": " << e.what();
                result.errors.push_back(os.str());
            }
        }
    }
    return result;
}

std::string describe_config(const SweepSpec& spec) {
    std::ostringstream os;
    os << "axis=" << axis_name(spec.axis) << " n_t=" << spec.base.n_tx
       << " n_r=" << spec.base.n_rx << " bits=";
    if (spec.base.quant.is_infinite()) os << "inf";
    else os << spec.base.quant.bits();
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", 10.0 * std::log10(spec.base.rho));
    os << " snr_db=" << buf << " trials=" << spec.trials << " seed=" << spec.seed << " outputs=";
    for (size_t i = 0; i < spec.outputs.size(); i++)
        os << (i ? "," : "") << series_name(spec.outputs[i]);
    return os.str();
}

void write_csv(std::ostream& os, Axis axis, const std::string& config_comment,
               const std::vector<SweepRow>& rows) {
    os << "# " << config_comment << "\n";
    os << "axis,value,series,rate_bits,std_err,trials,seed\n";
    char buf[128];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof buf, "%.10g", r.axis_value);
        os << axis_name(axis) << "," << buf << "," << r.series << ",";
        std::snprintf(buf, sizeof buf, "%.12g", r.rate);
        os << buf << ",";
        if (r.std_error >= 0.0) {
            std::snprintf(buf, sizeof buf, "%.6g", r.std_error);
            os << buf << "," << r.trials << "," << r.seed;
        } else {
            os << ",,";
        }
        os << "\n";
    }
}

namespace {

// Spacing of roughly `target` ticks over [lo, hi], snapped to 1/2/5 * 10^k.
double nice_tick(double lo, double hi, int target) {
    double raw = (hi - lo) / std::max(1, target);
    double mag = std::pow(10.0, std::floor(std::log10(raw)));
    for (double m : {1.0, 2.0, 5.0, 10.0})
        if (raw <= m * mag) return m * mag;
    return 10.0 * mag;
}

const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
                         "#8c564b", "#17becf", "#7f7f7f", "#bcbd22", "#e377c2"};

} // namespace

void write_svg(const std::filesystem::path& path, const std::string& title,
               const std::string& x_label, const std::string& y_label,
               const std::vector<SweepRow>& rows) {
    std::map<std::string, std::vector<std::pair<double, double>>> series;
    double x_lo = 1e300, x_hi = -1e300, y_lo = 1e300, y_hi = -1e300;
    for (const auto& r : rows) {
        series[r.series].emplace_back(r.axis_value, r.rate);
        x_lo = std::min(x_lo, r.axis_value);
        x_hi = std::max(x_hi, r.axis_value);
        y_lo = std::min(y_lo, r.rate);
        y_hi = std::max(y_hi, r.rate);
    }
    if (series.empty()) throw std::invalid_argument("write_svg: no rows");
    if (x_hi <= x_lo) x_hi = x_lo + 1.0;
    y_lo = std::min(0.0, y_lo);
    y_hi = y_hi + 0.05 * (y_hi - y_lo) + 1e-9;

    const double w = 840, h = 560, ml = 70, mr = 20, mt = 40, mb = 55;
    auto px = [&](double x) { return ml + (x - x_lo) / (x_hi - x_lo) * (w - ml - mr); };
    auto py = [&](double y) { return h - mb - (y - y_lo) / (y_hi - y_lo) * (h - mt - mb); };

    std::ofstream os(path);
    if (!os) throw std::runtime_error("write_svg: cannot open " + path.string());
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h
       << "\" viewBox=\"0 0 " << w << " " << h << "\" font-family=\"sans-serif\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << w / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" << title
       << "</text>\n";

    // axes and ticks
    os << "<line x1=\"" << ml << "\" y1=\"" << h - mb << "\" x2=\"" << w - mr << "\" y2=\""
       << h - mb << "\" stroke=\"black\"/>\n";
    os << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\"" << h - mb
       << "\" stroke=\"black\"/>\n";
    char buf[64];
    double xt = nice_tick(x_lo, x_hi, 8);
    for (double x = std::ceil(x_lo / xt) * xt; x <= x_hi + 1e-9; x += xt) {
        os << "<line x1=\"" << px(x) << "\" y1=\"" << h - mb << "\" x2=\"" << px(x) << "\" y2=\""
           << h - mb + 5 << "\" stroke=\"black\"/>\n";
        std::snprintf(buf, sizeof buf, "%g", x);
        os << "<text x=\"" << px(x) << "\" y=\"" << h - mb + 20
           << "\" text-anchor=\"middle\" font-size=\"12\">" << buf << "</text>\n";
    }
    double yt = nice_tick(y_lo, y_hi, 8);
    for (double y = std::ceil(y_lo / yt) * yt; y <= y_hi + 1e-9; y += yt) {
        os << "<line x1=\"" << ml - 5 << "\" y1=\"" << py(y) << "\" x2=\"" << ml << "\" y2=\""
           << py(y) << "\" stroke=\"black\"/>\n";
        std::snprintf(buf, sizeof buf, "%g", y);
        os << "<text x=\"" << ml - 9 << "\" y=\"" << py(y) + 4
           << "\" text-anchor=\"end\" font-size=\"12\">" << buf << "</text>\n";
        os << "<line x1=\"" << ml << "\" y1=\"" << py(y) << "\" x2=\"" << w - mr << "\" y2=\""
           << py(y) << "\" stroke=\"#dddddd\"/>\n";
    }
    os << "<text x=\"" << (ml + w - mr) / 2 << "\" y=\"" << h - 12
       << "\" text-anchor=\"middle\" font-size=\"13\">" << x_label << "</text>\n";
    os << "<text x=\"16\" y=\"" << (mt + h - mb) / 2
       << "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 16 "
       << (mt + h - mb) / 2 << ")\">" << y_label << "</text>\n";

    int idx = 0;
    double ly = mt + 14;
    for (const auto& [name, pts] : series) {
        const char* color = palette[idx % 10];
        os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        for (const auto& [x, y] : pts) os << px(x) << "," << py(y) << " ";
        os << "\"/>\n";
        os << "<line x1=\"" << ml + 12 << "\" y1=\"" << ly - 4 << "\" x2=\"" << ml + 36
           << "\" y2=\"" << ly - 4 << "\" stroke=\"" << color << "\" stroke-width=\"1.5\"/>\n";
        os << "<text x=\"" << ml + 42 << "\" y=\"" << ly << "\" font-size=\"11\">" << name
           << "</text>\n";
        ly += 15;
        idx++;
    }
    os << "</svg>\n";
}

FitReport fit_report(int n_rx, long long draws, std::uint64_t seed) {
    if (n_rx < 1) throw std::domain_error("fit_report: requires n_rx >= 1");
    if (draws < 1) throw std::domain_error("fit_report: requires draws >= 1");
    weibull::WeibullSumFit f = weibull::fit(n_rx);

    std::vector<double> xs(static_cast<size_t>(draws));
    for (long long i = 0; i < draws; i++) {
        sim::TrialRng rng(seed, static_cast<std::uint64_t>(i));
        double x = 0.0;
        for (int j = 0; j < n_rx; j++) {
            double e = -std::log(rng.next_uniform());
            x += e * e;
        }
        xs[static_cast<size_t>(i)] = x;
    }
    std::sort(xs.begin(), xs.end());
    double ks = 0.0;
    for (long long i = 0; i < draws; i++) {
        double cdf = weibull::approx_cdf(f, xs[static_cast<size_t>(i)]);
        ks = std::max(ks, std::fabs(cdf - double(i + 1) / draws));
        ks = std::max(ks, std::fabs(cdf - double(i) / draws));
    }
    return {f, ks, draws, seed};
}

namespace {

std::vector<double> snr_grid() {
    std::vector<double> v;
    for (int i = 0; i <= 16; i++) v.push_back(-10.0 + 2.5 * i);
    return v;
}

std::vector<double> range_grid(int lo, int hi) {
    std::vector<double> v;
    for (int i = lo; i <= hi; i++) v.push_back(i);
    return v;
}

std::string bits_tag(double b) {
    if (std::isinf(b)) return "_binf";
    return "_b" + std::to_string(static_cast<int>(b));
}

} // namespace

FigureFiles reproduce(Figure figure, const std::filesystem::path& out_dir, long long trials_override,
                      std::uint64_t seed, int workers) {
    (void)workers; // Monte Carlo already saturates the machine per estimate
    const long long trials = trials_override > 0 ? trials_override : 1000000;
    std::filesystem::create_directories(out_dir);

    std::string name, title, x_label = "Transmit SNR (dB)";
    const std::string y_label = "Ergodic rate (bits/s/Hz)";
    Axis axis = Axis::SnrDb;
    std::vector<SweepRow> rows;
    std::vector<std::string> errors;
    std::ostringstream comment;

    auto run_part = [&](SweepSpec spec, const std::string& suffix) {
        SweepResult r = run_sweep(spec, suffix);
        rows.insert(rows.end(), r.rows.begin(), r.rows.end());
        errors.insert(errors.end(), r.errors.begin(), r.errors.end());
    };

    switch (figure) {
    case Figure::Fig2a: {
        name = "fig2a";
        title = "Selection rate vs transmit SNR (Nt=32, Nr=8)";
        for (double b : {1.0, 2.0, 3.0, 4.0, std::numeric_limits<double>::infinity()}) {
            SweepSpec spec;
            spec.axis = Axis::SnrDb;
            spec.values = snr_grid();
            spec.base.n_tx = 32;
            spec.base.n_rx = 8;
            spec.base.quant = std::isinf(b) ? quant::QuantizationModel::infinite()
                                            : quant::QuantizationModel::from_bits(int(b));
            spec.trials = trials;
            spec.seed = seed;
            spec.outputs = {Series::McExact, Series::LbThm1};
            run_part(spec, bits_tag(b));
        }
        comment << "preset=fig2a n_t=32 n_r=8 bits=1,2,3,4,inf trials=" << trials
                << " seed=" << seed;
        break;
    }
    case Figure::Fig2b: {
        name = "fig2b";
        title = "Selection rate vs receive antennas (Nt=32, 10 dB)";
        x_label = "Number of receive antennas";
        axis = Axis::NumRx;
        for (double b : {2.0, 3.0, 4.0}) {
            SweepSpec spec;
            spec.axis = Axis::NumRx;
            spec.values = range_grid(1, 16);
            spec.base.n_tx = 32;
            spec.base.rho = std::pow(10.0, 1.0);
            spec.base.quant = quant::QuantizationModel::from_bits(int(b));
            spec.trials = trials;
            spec.seed = seed;
            spec.outputs = {Series::McExact, Series::LbThm1};
            run_part(spec, bits_tag(b));
        }
        comment << "preset=fig2b n_t=32 snr_db=10 bits=2,3,4 trials=" << trials << " seed=" << seed;
        break;
    }
    case Figure::Fig3a: {
        name = "fig3a";
        title = "Single-receive-antenna selection rate vs transmit SNR (b=3)";
        for (int nt : {4, 16, 64}) {
            SweepSpec spec;
            spec.axis = Axis::SnrDb;
            spec.values = snr_grid();
            spec.base.n_tx = nt;
            spec.base.n_rx = 1;
            spec.base.quant = quant::QuantizationModel::from_bits(3);
            spec.trials = trials;
            spec.seed = seed;
            spec.outputs = {Series::McExact, Series::Cor1, Series::Cor2};
            run_part(spec, "_nt" + std::to_string(nt));
        }
        SweepSpec siso;
        siso.axis = Axis::SnrDb;
        siso.values = snr_grid();
        siso.base.n_tx = 1;
        siso.base.n_rx = 1;
        siso.base.quant = quant::QuantizationModel::from_bits(3);
        siso.trials = trials;
        siso.seed = seed;
        siso.outputs = {Series::McExact, Series::UbThm2, Series::ExactSiso};
        run_part(siso, "_nt1");
        comment << "preset=fig3a n_r=1 bits=3 n_t=1,4,16,64 trials=" << trials << " seed=" << seed;
        break;
    }
    case Figure::Fig3b: {
        name = "fig3b";
        title = "Single-receive-antenna selection rate vs transmit antennas (5 dB)";
        x_label = "Number of transmit antennas";
        axis = Axis::NumTx;
        std::vector<double> nts = range_grid(1, 16);
        for (int v : {20, 24, 32, 40, 48, 56, 64}) nts.push_back(v);
        for (double b : {2.0, 3.0, 4.0}) {
            SweepSpec spec;
            spec.axis = Axis::NumTx;
            spec.values = nts;
            spec.base.n_rx = 1;
            spec.base.rho = std::pow(10.0, 0.5);
            spec.base.quant = quant::QuantizationModel::from_bits(int(b));
            spec.trials = trials;
            spec.seed = seed;
            spec.outputs = {Series::McExact, Series::Cor1};
            run_part(spec, bits_tag(b));

            SweepSpec asym = spec;
            asym.values.clear();
            for (double v : nts)
                if (v >= 2) asym.values.push_back(v);
            asym.outputs = {Series::Cor2};
            run_part(asym, bits_tag(b));
        }
        comment << "preset=fig3b n_r=1 snr_db=5 bits=2,3,4 trials=" << trials << " seed=" << seed;
        break;
    }
    }

    std::sort(rows.begin(), rows.end(), [](const SweepRow& a, const SweepRow& b) {
        if (a.axis_value != b.axis_value) return a.axis_value < b.axis_value;
        return a.series < b.series;
    });

    FigureFiles files;
    files.csv = out_dir / (name + ".csv");
    files.svg = out_dir / (name + ".svg");
    files.errors = errors;
    std::ofstream csv(files.csv);
    if (!csv) throw std::runtime_error("reproduce: cannot open " + files.csv.string());
    write_csv(csv, axis, comment.str(), rows);
    write_svg(files.svg, title, x_label, y_label, rows);
    return files;
}

} // namespace tasrate::sweep
