#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "ihc/corr.hpp"
#include "ihc/spectral.hpp"
#include "oracles.hpp"

using namespace ihc;

TEST_CASE("fourier_coeff recovers trig polynomial coefficients") {
    auto flat = trig_poly_density({1.0});
    CHECK_THAT(fourier_coeff(flat, 0), Catch::Matchers::WithinAbs(1.0, 1e-12));
    CHECK_THAT(fourier_coeff(flat, 1), Catch::Matchers::WithinAbs(0.0, 1e-12));
    CHECK_THAT(fourier_coeff(flat, 5), Catch::Matchers::WithinAbs(0.0, 1e-12));

    auto tri = trig_poly_density({1.0, 0.4}); // 1 + 0.8 cos(theta)
    CHECK_THAT(fourier_coeff(tri, 1), Catch::Matchers::WithinAbs(0.4, 1e-12));
    CHECK_THAT(fourier_coeff(tri, 2), Catch::Matchers::WithinAbs(0.0, 1e-12));

    // 1 + 0.5 cos(theta) + 0.6 cos(2 theta): a_1 = 0.25, a_2 = 0.3.
    auto b = trig_poly_density({1.0, 0.25, 0.3});
    CHECK_THAT(fourier_coeff(b, 0), Catch::Matchers::WithinAbs(1.0, 1e-12));
    CHECK_THAT(fourier_coeff(b, 1), Catch::Matchers::WithinAbs(0.25, 1e-12));
    CHECK_THAT(fourier_coeff(b, 2), Catch::Matchers::WithinAbs(0.3, 1e-12));

    CHECK_THROWS_AS(fourier_coeff(tri, 1, 100), std::invalid_argument);
    CHECK_THROWS_AS(fourier_coeff(tri, 1, 300), std::invalid_argument); // not a power of two
}

TEST_CASE("fourier_coeff flags an asymmetric density posing as symmetric") {
    SpectralDensity skew{[](double t) { return 1.0 + 0.5 * std::sin(t); }, true, std::nullopt};
    CHECK_THROWS_AS(fourier_coeff(skew, 1), NonSymmetricImaginaryResidue);
}

TEST_CASE("wiener_rate closed forms") {
    CHECK_THAT(wiener_rate(trig_poly_density({1.0})), Catch::Matchers::WithinAbs(1.0, 1e-12));

    // C(1 + 2 rho cos) = 1/sqrt(1 - 4 rho^2).
    for (double rho : {-0.45, -0.25, 0.05, 0.25, 0.45}) {
        const double expected = 1.0 / std::sqrt(1.0 - 4.0 * rho * rho);
        const double got = wiener_rate(trig_poly_density({1.0, rho}));
        CHECK_THAT(got, Catch::Matchers::WithinAbs(expected, 1e-6));
        const double ref =
            oracle::wiener_rate([rho](double t) { return 1.0 + 2.0 * rho * std::cos(t); });
        CHECK_THAT(got, Catch::Matchers::WithinAbs(ref, 1e-8));
    }

    SpectralDensity zeroed{[](double t) { return std::cos(t); }, true, std::nullopt};
    CHECK_THROWS_AS(wiener_rate(zeroed), NonPositiveDensity);
}

TEST_CASE("wiener_rate is at least one and grid-stable") {
    for (auto coeffs : std::vector<std::vector<double>>{
             {1.0, 0.3}, {1.0, 0.25, 0.3}, {1.0, -0.2, 0.1}}) {
        const double v4 = wiener_rate(trig_poly_density(coeffs), 4096);
        const double v8 = wiener_rate(trig_poly_density(coeffs), 8192);
        CHECK(v4 >= 1.0 - 1e-9);
        CHECK(std::fabs(v4 - v8) < 1e-8);
    }
    CHECK(std::fabs(wiener_rate(trig_poly_density({1.0})) - 1.0) < 1e-9);
}

TEST_CASE("cluster_rate reductions and oracle agreement") {
    auto f = trig_poly_density({1.0, 0.4});
    TrigPolynomial unit{{1.0}};
    CHECK_THAT(cluster_rate(f, unit), Catch::Matchers::WithinAbs(wiener_rate(f), 1e-12));

    TrigPolynomial diff{{1.0, -1.0}};
    CHECK_THAT(cluster_rate(trig_poly_density({1.0}), diff),
               Catch::Matchers::WithinAbs(2.0, 1e-10));

    const double got = cluster_rate(f, diff);
    const double ref = oracle::simpson(
                           [](double t) {
                               return (2.0 - 2.0 * std::cos(t)) / (1.0 + 0.8 * std::cos(t));
                           },
                           -kPi, kPi, 65536) /
                       (2.0 * kPi);
    CHECK_THAT(got, Catch::Matchers::WithinAbs(ref, 1e-6));
}

TEST_CASE("f_alpha domain checks and positivity") {
    CHECK_THROWS_AS(f_alpha(0.0, 1.0, 100000), AlphaOutOfRange);
    CHECK_THROWS_AS(f_alpha(0.0, 0.0, 100000), AlphaOutOfRange);
    CHECK_THROWS_AS(f_alpha(0.0, 0.3, 100), std::invalid_argument);
    CHECK_THROWS_AS(f_alpha(4.0, 0.3, 100000), std::invalid_argument);

    FAlphaDensity f(0.3, 100000);
    double mn = 1e300;
    for (std::size_t j = 0; j < 4096; ++j) {
        const double theta = -kPi + 2.0 * kPi * static_cast<double>(j) / 4096.0;
        mn = std::min(mn, f(theta));
    }
    CHECK(mn > 0.0);
    CHECK(f.tail_bound() > 0.0);
    CHECK(f.tail_bound() < 1e-3);
}

TEST_CASE("f_alpha at zero telescopes toward two") {
    // The coefficient partial sums telescope: f_alpha(0) = 2 - ((K+1)^a - K^a).
    const double got = f_alpha(0.0, 0.3, 100000);
    const double kd = 100000.0;
    const double expected = 2.0 - (std::pow(kd + 1.0, 0.3) - std::pow(kd, 0.3));
    CHECK_THAT(got, Catch::Matchers::WithinAbs(expected, 1e-9));
    // Refinement oracle: a 10x truncation moves the value by less than the
    // coarse run's tail bound.
    const double fine = f_alpha(0.0, 0.3, 1000000);
    CHECK(std::fabs(fine - got) <= FAlphaDensity(0.3, 100000).tail_bound());
}

TEST_CASE("strong_dependence_rate consistency and stability") {
    CHECK_THROWS_AS(strong_dependence_rate(0.6), AlphaOutOfRange);

    // |1 - e^{-i theta}|^2 = 2 (1 - cos theta), so the (1/pi) and (1/2pi)
    // prefactors cancel and the two routes coincide.
    const double direct = strong_dependence_rate(0.25, 4096, 100000);
    const double via_cluster = cluster_rate(FAlphaDensity(0.25, 100000).density(),
                                            TrigPolynomial{{1.0, -1.0}}, 4096);
    CHECK_THAT(direct, Catch::Matchers::WithinAbs(via_cluster, 1e-6));

    const double refined = strong_dependence_rate(0.25, 4096, 200000);
    CHECK(std::fabs(refined - direct) < 1e-4);
}

TEST_CASE("strong_dependence_rate decreases in alpha") {
    double prev = 1e300;
    for (double a : {0.05, 0.15, 0.25, 0.35, 0.45}) {
        const double v = strong_dependence_rate(a, 4096, 100000);
        CHECK(v > 0.0);
        CHECK(v < prev);
        prev = v;
    }
}

TEST_CASE("Toeplitz interior inverse diagonal approaches the Wiener rate") {
    std::vector<double> coeffs = {1.0, 0.25, 0.3};
    auto f = trig_poly_density(coeffs);
    std::vector<double> a(300, 0.0);
    CHECK_THAT(fourier_coeff(f, 0), Catch::Matchers::WithinAbs(1.0, 1e-12));
    a[0] = 1.0; // the constructor requires an exact unit diagonal
    for (std::size_t k = 1; k < 3; ++k) a[k] = fourier_coeff(f, k);
    auto sigma = toeplitz_from_coeffs(a, 300);
    const Vec d = inverse_diagonal(cholesky_inverse(sigma));
    const double cf = wiener_rate(f);
    CHECK_THAT(d[150], Catch::Matchers::WithinRel(cf, 0.02));
}
