#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "tasrate/weibull_sum.hpp"

using namespace tasrate;
using namespace tasrate::weibull;

TEST_CASE("component moments") {
    WeibullComponent def{};
    CHECK(component_moment(def, 0) == doctest::Approx(1.0));
    CHECK(component_moment(def, 1) == doctest::Approx(2.0).epsilon(1e-13));   // Gamma(3)
    CHECK(component_moment(def, 4) == doctest::Approx(40320.0).epsilon(1e-12)); // Gamma(9)
    CHECK(component_moment({2.0, 1.0}, 1) == doctest::Approx(2.0).epsilon(1e-13));
    CHECK_THROWS_AS(component_moment(def, -1), std::domain_error);
    CHECK_THROWS_AS(component_moment({-1.0, 0.5}, 1), std::domain_error);
}

TEST_CASE("sum moments by binomial convolution") {
    CHECK(sum_moment(1, 2) == doctest::Approx(24.0).epsilon(1e-13));
    CHECK(sum_moment(2, 2) == doctest::Approx(56.0).epsilon(1e-13));
    CHECK(sum_moment(2, 4) == doctest::Approx(95616.0).epsilon(1e-12));
    for (int n = 1; n <= 64; n *= 2) CHECK(sum_moment(n, 1) == doctest::Approx(2.0 * n).epsilon(1e-13));
    CHECK_THROWS_AS(sum_moment(0, 1), std::domain_error);
    CHECK_THROWS_AS(sum_moment(2, 21), std::range_error);
}

TEST_CASE("single-component fit is exact") {
    auto f = fit(1);
    CHECK(f.k == doctest::Approx(0.5).epsilon(1e-8));
    CHECK(f.mu == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(f.omega == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(f.residual_norm < 1e-8);

    // the approximation collapses to the plain Weibull CDF 1 - exp(-sqrt(x))
    for (double x = 0.0; x <= 100.0; x += 2.5)
        CHECK(approx_cdf(f, x) == doctest::Approx(1.0 - std::exp(-std::sqrt(x))).epsilon(1e-10));
    CHECK(approx_cdf(f, 4.0) == doctest::Approx(0.8646647167633873).epsilon(1e-10));
}

TEST_CASE("fit residuals vanish for larger arrays") {
    for (int n : {2, 4, 8, 16}) {
        auto f = fit(n);
        CHECK(f.residual_norm < 1e-8);
        // plug (k, mu) back into both moment equations
        double l1 = specfun::ln_gamma(f.mu + 1.0 / f.k);
        double l2 = specfun::ln_gamma(f.mu + 2.0 / f.k);
        double l4 = specfun::ln_gamma(f.mu + 4.0 / f.k);
        double lg = specfun::ln_gamma(f.mu);
        double lhs1 = 2.0 * l1 + std::log(sum_moment(n, 2));
        double rhs1 = lg + l2 + 2.0 * std::log(sum_moment(n, 1));
        double lhs2 = 2.0 * l2 + std::log(sum_moment(n, 4));
        double rhs2 = lg + l4 + 2.0 * std::log(sum_moment(n, 2));
        CHECK(std::fabs(std::expm1(lhs1 - rhs1)) < 1e-8);
        CHECK(std::fabs(std::expm1(lhs2 - rhs2)) < 1e-8);
    }
}

TEST_CASE("approximate density and distribution") {
    auto f2 = fit(2);
    CHECK(approx_cdf(f2, 0.0) == 0.0);
    CHECK_THROWS_AS(approx_cdf(f2, -1.0), std::domain_error);
    CHECK_THROWS_AS(approx_pdf(f2, -1.0), std::domain_error);

    // density integrates to one
    double mass = specfun::integrate_semi_infinite([&](double x) { return approx_pdf(f2, x); });
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-8));

    // CDF is nondecreasing with the right limits
    double prev = 0.0;
    for (double x = 0.0; x < 400.0; x += 0.5) {
        double c = approx_cdf(f2, x);
        CHECK(c >= prev - 1e-15);
        CHECK(c <= 1.0);
        prev = c;
    }
    CHECK(approx_cdf(f2, 2000.0) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("fit matches the simulated distribution") {
    // Kolmogorov-Smirnov distance against an independent empirical CDF
    for (int n : {2, 8}) {
        auto f = fit(n);
        const int draws = 200000;
        std::mt19937_64 gen(99 + n);
        std::uniform_real_distribution<double> unif(0.0, 1.0);
        std::vector<double> xs(draws);
        for (auto& x : xs) {
            x = 0.0;
            for (int j = 0; j < n; j++) {
                double e = -std::log1p(-unif(gen));
                x += e * e;
            }
        }
        std::sort(xs.begin(), xs.end());
        double ks = 0.0;
        for (int i = 0; i < draws; i++) {
            double c = approx_cdf(f, xs[i]);
            ks = std::max(ks, std::fabs(c - double(i + 1) / draws));
            ks = std::max(ks, std::fabs(c - double(i) / draws));
        }
        CHECK(ks <= 0.01);
    }
}

TEST_CASE("mean of the selected maximum") {
    auto f1 = fit(1);
    CHECK(max_mean(f1, 1) == doctest::Approx(2.0).epsilon(1e-9)); // E[X] = 2 N_r
    auto f4 = fit(4);
    CHECK(max_mean(f4, 1) == doctest::Approx(8.0).epsilon(1e-8));

    // two-antenna selection over single-receive sums: exact order statistics
    // give E[max] = 2 E[W] - E[min] = 4 - 1/2
    CHECK(max_mean(f1, 2) == doctest::Approx(3.5).epsilon(0.02));

    // nondecreasing in the selection count
    double prev = 0.0;
    for (int n_sel : {1, 2, 4, 8, 16, 32, 64}) {
        double m = max_mean(f4, n_sel);
        CHECK(m >= prev - 1e-12);
        prev = m;
    }

    // matches simulation for a larger array
    auto f8 = fit(8);
    double mc = oracle::mc_max_quartic_sum_mean(8, 32, 200000, 2024);
    CHECK(max_mean(f8, 32) == doctest::Approx(mc).epsilon(0.02));

    CHECK_THROWS_AS(max_mean(f1, 0), std::domain_error);
}
