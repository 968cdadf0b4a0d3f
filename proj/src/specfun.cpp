#include "tasrate/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <queue>
#include <sstream>
#include <vector>

namespace tasrate::specfun {

namespace {

constexpr double dbl_eps = std::numeric_limits<double>::epsilon();

void require_finite(double x, const char* name) {
    if (!std::isfinite(x)) throw std::domain_error(std::string(name) + ": non-finite argument");
}

} // namespace

// Lanczos-type approximation, coefficients from Press et al., 3rd ed.
double ln_gamma(double x) {
    static const double cof[14] = {
        57.1562356658629235,     -59.5979603554754912,    14.1360979747417471,
        -0.491913816097620199,   0.339946499848118887e-4, 0.465236289270485756e-4,
        -0.983744753048795646e-4, 0.158088703224912494e-3, -0.210264441724104883e-3,
        0.217439618115212643e-3, -0.164318106536763890e-3, 0.844182239838527433e-4,
        -0.261908384015814087e-4, 0.368991826595316234e-5};
    require_finite(x, "ln_gamma");
    if (x <= 0.0) throw std::domain_error("ln_gamma: requires x > 0");
    double y = x;
    double tmp = x + 5.24218750000000000;
    tmp = (x + 0.5) * std::log(tmp) - tmp;
    double ser = 0.999999999999997092;
    for (int j = 0; j < 14; j++) ser += cof[j] / ++y;
    return tmp + std::log(2.5066282746310005 * ser / x);
}

namespace {

// P(a,z) by its power series, for z < a + 1.
double gamma_p_series(double a, double z) {
    if (z == 0.0) return 0.0;
    double ap = a;
    double sum = 1.0 / a;
    double del = sum;
    for (int n = 0; n < 10000; n++) {
        ap += 1.0;
        del *= z / ap;
        sum += del;
        if (std::fabs(del) < std::fabs(sum) * dbl_eps)
            return sum * std::exp(-z + a * std::log(z) - ln_gamma(a));
    }
    throw ConvergenceError("incomplete gamma series did not converge", sum);
}

// Q(a,z) by continued fraction (modified Lentz), for z >= a + 1.
double gamma_q_cf(double a, double z) {
    const double fpmin = std::numeric_limits<double>::min() / dbl_eps;
    double b = z + 1.0 - a;
    double c = 1.0 / fpmin;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 10000; i++) {
        double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < fpmin) d = fpmin;
        c = b + an / c;
        if (std::fabs(c) < fpmin) c = fpmin;
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) <= dbl_eps)
            return h * std::exp(-z + a * std::log(z) - ln_gamma(a));
    }
    throw ConvergenceError("incomplete gamma continued fraction did not converge", h);
}

// E1(z) by its alternating series, for 0 < z <= 1.
double e1_series(double z) {
    double sum = -euler_gamma - std::log(z);
    double term = 1.0;
    for (int n = 1; n <= 100; n++) {
        term *= -z / n;
        double del = -term / n;
        sum += del;
        if (std::fabs(del) < std::fabs(sum) * dbl_eps) break;
    }
    return sum;
}

// e^z E1(z) by continued fraction, for z > 1.  The scaled form is what the
// fraction produces natively, so no overflow occurs for large z.
double e1_cf_scaled(double z) {
    const double big = std::numeric_limits<double>::max() * dbl_eps;
    double b = z + 1.0;
    double c = big;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 200; i++) {
        double a = -static_cast<double>(i) * i;
        b += 2.0;
        d = 1.0 / (a * d + b);
        c = b + a / c;
        double del = c * d;
        h *= del;
        if (std::fabs(del - 1.0) <= dbl_eps) return h;
    }
    throw ConvergenceError("E1 continued fraction did not converge", h);
}

} // namespace

double reg_lower_gamma(double a, double z) {
    require_finite(a, "reg_lower_gamma");
    require_finite(z, "reg_lower_gamma");
    if (a <= 0.0) throw std::domain_error("reg_lower_gamma: requires a > 0");
    if (z < 0.0) throw std::domain_error("reg_lower_gamma: requires z >= 0");
    return z < a + 1.0 ? gamma_p_series(a, z) : 1.0 - gamma_q_cf(a, z);
}

double reg_upper_gamma(double a, double z) {
    require_finite(a, "reg_upper_gamma");
    require_finite(z, "reg_upper_gamma");
    if (a < 0.0 || z < 0.0) throw std::domain_error("reg_upper_gamma: requires a, z >= 0");
    if (a == 0.0) {
        // Gamma(0,z) = E1(z), unregularized.
        if (z == 0.0) throw std::domain_error("reg_upper_gamma: Gamma(0,0) diverges");
        return z <= 1.0 ? e1_series(z) : e1_cf_scaled(z) * std::exp(-z);
    }
    return z < a + 1.0 ? 1.0 - gamma_p_series(a, z) : gamma_q_cf(a, z);
}

double exp_scaled_e1(double z) {
    require_finite(z, "exp_scaled_e1");
    if (z <= 0.0) throw std::domain_error("exp_scaled_e1: requires z > 0");
    return z <= 1.0 ? std::exp(z) * e1_series(z) : e1_cf_scaled(z);
}

double harmonic(int n) {
    if (n < 1) throw std::domain_error("harmonic: requires n >= 1");
    double sum = 0.0;
    for (int k = n; k >= 1; k--) sum += 1.0 / k; // smallest terms first
    return sum;
}

namespace {

// Gauss 7 / Kronrod 15 nodes and weights on [-1, 1]: {node, G weight, K weight}.
constexpr double gk_nodes[8][3] = {
    {0.000000000000000, 0.417959183673469, 0.209482141084728},
    {0.405845151377397, 0.381830050505119, 0.190350578064785},
    {0.741531185599394, 0.279705391489277, 0.140653259715525},
    {0.949107912342759, 0.129484966168870, 0.063092092629979},
    {0.207784955007898, 0.0, 0.204432940075298},
    {0.586087235467691, 0.0, 0.169004726639267},
    {0.864864423359769, 0.0, 0.104790010322250},
    {0.991455371120813, 0.0, 0.022935322010529}};

struct Panel {
    double a, b;
    double value;
    double error;
    bool operator<(const Panel& o) const { return error < o.error; }
};

Panel gk15(const std::function<double(double)>& f, double a, double b) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double f0 = f(mid);
    double g7 = gk_nodes[0][1] * f0;
    double k15 = gk_nodes[0][2] * f0;
    for (int i = 1; i < 8; i++) {
        double dx = half * gk_nodes[i][0];
        double fi = f(mid + dx) + f(mid - dx);
        g7 += gk_nodes[i][1] * fi;
        k15 += gk_nodes[i][2] * fi;
    }
    g7 *= half;
    k15 *= half;
    double raw = std::fabs(k15 - g7);
    double err = std::min(raw, std::pow(200.0 * raw, 1.5));
    return {a, b, k15, err};
}

} // namespace

double integrate_semi_infinite(const std::function<double(double)>& f, const QuadratureSpec& spec) {
    if (spec.relative_tolerance <= 0.0 || spec.absolute_tolerance <= 0.0)
        throw std::domain_error("integrate_semi_infinite: tolerances must be positive");
    if (spec.max_subdivisions < 1)
        throw std::domain_error("integrate_semi_infinite: max_subdivisions must be >= 1");

    // Grow the window until the local decay rate certifies a negligible tail.
    // A zero sample is only trusted as "past the mass" if mass was seen before;
    // sharply sigmoidal integrands are zero on a long prefix as well.
    double cut = 16.0;
    bool mass_seen = false;
    while (true) {
        for (int i = 1; i <= 4; i++) {
            if (f(cut * (0.5 + 0.125 * i)) > 0.0) mass_seen = true;
        }
        double f0 = f(cut - 0.5);
        double f1 = f(cut);
        if (f1 > 0.0) mass_seen = true;
        if (mass_seen) {
            if (f1 == 0.0 && f0 == 0.0) break; // underflowed past the mass
            if (f1 > 0.0 && f1 < f0) {
                double lambda = std::log(f0 / f1) / 0.5;
                if (lambda > 1e-3 && 2.0 * f1 / lambda < spec.absolute_tolerance) break;
            }
        }
        cut *= 2.0;
        if (cut > 0x1p40) {
            if (!mass_seen) { cut = 16.0; break; } // numerically zero integrand
            throw ConvergenceError("integrate_semi_infinite: no certified tail cutoff", 0.0);
        }
    }

    // Adaptive refinement: split the worst panel until the summed error
    // estimate meets the tolerances.  Start from several panels so a bump
    // hiding between the coarse nodes is not missed.
    std::priority_queue<Panel> heap;
    double total = 0.0, total_err = 0.0;
    const int initial = 16;
    for (int i = 0; i < initial; i++) {
        Panel p = gk15(f, cut * i / initial, cut * (i + 1) / initial);

        total += p.value;
        total_err += p.error;
        heap.push(p);
    }
    int splits = initial;
    while (total_err > std::max(spec.absolute_tolerance, spec.relative_tolerance * std::fabs(total))) {
        if (splits >= spec.max_subdivisions)
            throw ConvergenceError("integrate_semi_infinite: subdivision limit reached", total);
        Panel worst = heap.top();
        heap.pop();
        double mid = 0.5 * (worst.a + worst.b);
        Panel left = gk15(f, worst.a, mid);
        Panel right = gk15(f, mid, worst.b);
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        splits++;
    }
    return total;
}

namespace {

double residual_norm(const std::array<double, 2>& r) {
    return std::max(std::fabs(r[0]), std::fabs(r[1]));
}

struct TraceEntry {
    double k, mu, r1, r2;
};

std::string format_trace(const std::vector<TraceEntry>& trace) {
    std::ostringstream os;
    os.precision(6);
    size_t start = trace.size() > 12 ? trace.size() - 12 : 0;
    for (size_t i = start; i < trace.size(); i++) {
        const auto& t = trace[i];
        os << "\n  k=" << t.k << " mu=" << t.mu << " r=(" << t.r1 << ", " << t.r2 << ")";
    }
    return os.str();
}

} // namespace

MomentSolution solve_moment_system(const ResidualPair& residuals, const SearchBox& box,
                                   double tol, double k_init, double mu_init) {
    if (!(box.k_min > 0.0 && box.k_min < box.k_max && box.mu_min > 0.0 && box.mu_min < box.mu_max))
        throw std::domain_error("solve_moment_system: malformed search box");
    if (tol <= 0.0) throw std::domain_error("solve_moment_system: tol must be positive");

    std::vector<TraceEntry> trace;
    auto eval = [&](double k, double mu) {
        auto r = residuals(k, mu);
        trace.push_back({k, mu, r[0], r[1]});
        return r;
    };
    auto clamp_k = [&](double k) { return std::clamp(k, box.k_min, box.k_max); };
    auto clamp_mu = [&](double mu) { return std::clamp(mu, box.mu_min, box.mu_max); };

    double k = clamp_k(k_init);
    double mu = clamp_mu(mu_init);
    auto r = eval(k, mu);
    int iterations = 0;

    // Damped Newton with a central-difference Jacobian, steps clamped to the box.
    for (int it = 0; it < 80; it++) {
        iterations++;
        if (residual_norm(r) < tol) return {k, mu, r[0], r[1], iterations};
        double hk = 1e-6 * std::max(std::fabs(k), 0.05);
        double hm = 1e-6 * std::max(std::fabs(mu), 0.05);
        auto rpk = residuals(std::min(k + hk, box.k_max), mu);
        auto rmk = residuals(std::max(k - hk, box.k_min), mu);
        auto rpm = residuals(k, std::min(mu + hm, box.mu_max));
        auto rmm = residuals(k, std::max(mu - hm, box.mu_min));
        double dkk = std::min(k + hk, box.k_max) - std::max(k - hk, box.k_min);
        double dmm = std::min(mu + hm, box.mu_max) - std::max(mu - hm, box.mu_min);
        double j11 = (rpk[0] - rmk[0]) / dkk, j12 = (rpm[0] - rmm[0]) / dmm;
        double j21 = (rpk[1] - rmk[1]) / dkk, j22 = (rpm[1] - rmm[1]) / dmm;
        double det = j11 * j22 - j12 * j21;
        if (!std::isfinite(det) || std::fabs(det) < 1e-300) break;
        double dk = -(r[0] * j22 - r[1] * j12) / det;
        double dmu = -(j11 * r[1] - j21 * r[0]) / det;
        double lambda = 1.0;
        bool improved = false;
        while (lambda >= 1e-4) {
            double kn = clamp_k(k + lambda * dk);
            double mun = clamp_mu(mu + lambda * dmu);
            auto rn = eval(kn, mun);
            if (residual_norm(rn) < residual_norm(r)) {
                k = kn;
                mu = mun;
                r = rn;
                improved = true;
                break;
            }
            lambda *= 0.5;
        }
        if (!improved) break;
    }
    if (residual_norm(r) < tol) return {k, mu, r[0], r[1], iterations};

    // Fallback: solve r1 = 0 for k at fixed mu by bisection, then scan mu for
    // a sign change of r2(k(mu), mu).
    auto k_of_mu = [&](double m) -> double {
        const int grid = 48;
        double prev_k = box.k_min;
        double prev_r = residuals(prev_k, m)[0];
        for (int i = 1; i <= grid; i++) {
            double kk = box.k_min * std::pow(box.k_max / box.k_min, double(i) / grid);
            double rr = residuals(kk, m)[0];
            if (prev_r == 0.0) return prev_k;
            if (prev_r * rr <= 0.0 && std::isfinite(rr)) {
                double lo = prev_k, hi = kk, rlo = prev_r;
                for (int b = 0; b < 200; b++) {
                    double mid = 0.5 * (lo + hi);
                    double rm = residuals(mid, m)[0];
                    if (rlo * rm <= 0.0) hi = mid;
                    else { lo = mid; rlo = rm; }
                    if (hi - lo < 1e-15 * hi) break;
                }
                return 0.5 * (lo + hi);
            }
            prev_k = kk;
            prev_r = rr;
        }
        return std::numeric_limits<double>::quiet_NaN();
    };

    const int mu_grid = 96;
    double prev_mu = std::numeric_limits<double>::quiet_NaN();
    double prev_g = std::numeric_limits<double>::quiet_NaN();
    for (int i = 0; i <= mu_grid; i++) {
        double m = box.mu_min * std::pow(box.mu_max / box.mu_min, double(i) / mu_grid);
        double kk = k_of_mu(m);
        if (std::isnan(kk)) continue;
        double g = eval(kk, m)[1];
        iterations++;
        if (!std::isnan(prev_g) && prev_g * g <= 0.0) {
            double lo = prev_mu, hi = m, glo = prev_g;
            double kmid = kk;
            for (int b = 0; b < 200; b++) {
                double mid = 0.5 * (lo + hi);
                kmid = k_of_mu(mid);
                if (std::isnan(kmid)) break;
                double gm = eval(kmid, mid)[1];
                iterations++;
                if (glo * gm <= 0.0) hi = mid;
                else { lo = mid; glo = gm; }
                if (hi - lo < 1e-15 * hi) break;
            }
            double msol = 0.5 * (lo + hi);
            double ksol = k_of_mu(msol);
            if (!std::isnan(ksol)) {
                auto rs = eval(ksol, msol);
                if (residual_norm(rs) < tol) return {ksol, msol, rs[0], rs[1], iterations};
            }
        }
        prev_mu = m;
        prev_g = g;
    }
    throw SearchFailureError("solve_moment_system: no root in search box; trace:" + format_trace(trace));
}

} // namespace tasrate::specfun
