#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "ihc/corr.hpp"
#include "ihc/hc.hpp"
#include "ihc/rng.hpp"
#include "oracles.hpp"

using namespace ihc;

namespace {

CorrelationMatrix random_correlation(std::size_t n, SplitMix64& rng) {
    // A A' is PD almost surely; rescale to unit diagonal.
    Matrix a(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) a(i, j) = rng.normal();
        a(i, i) += static_cast<double>(n); // diagonal dominance keeps it well conditioned
    }
    Matrix s = a * a.transpose();
    Matrix c(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) c(i, j) = s(i, j) / std::sqrt(s(i, i) * s(j, j));
    for (std::size_t i = 0; i < n; ++i) c(i, i) = 1.0;
    // Exact symmetry despite rounding.
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) c(j, i) = c(i, j);
    return CorrelationMatrix::from_dense(std::move(c));
}

} // namespace

TEST_CASE("toeplitz_from_coeffs builds the expected entries") {
    const double white[] = {1.0};
    auto id = toeplitz_from_coeffs(white, 4);
    CHECK(id.is_identity());

    const double tri[] = {1.0, 0.4};
    auto m = toeplitz_from_coeffs(tri, 100);
    CHECK(m(0, 0) == 1.0);
    CHECK(m(3, 4) == 0.4);
    CHECK(m(4, 3) == 0.4);
    CHECK(m(2, 7) == 0.0);
}

TEST_CASE("toeplitz_from_coeffs rejects bad inputs") {
    const double bad_diag[] = {0.9, 0.1};
    CHECK_THROWS_AS(toeplitz_from_coeffs(bad_diag, 4), BadDiagonal);

    // f = 1 + 1.2 cos(theta) takes negative values, so the matrix loses
    // positive definiteness.
    const double not_pd[] = {1.0, 0.6};
    CHECK_THROWS_AS(toeplitz_from_coeffs(not_pd, 10), NotPositiveDefinite);
#ifdef IHC_HAVE_EIGEN
    Matrix raw(10, 10);
    for (std::size_t i = 0; i < 10; ++i)
        for (std::size_t j = 0; j < 10; ++j) {
            const std::size_t d = i > j ? i - j : j - i;
            raw(i, j) = d == 0 ? 1.0 : d == 1 ? 0.6 : 0.0;
        }
    CHECK(oracle::smallest_eigenvalue(raw) <= pd_tolerance(10));
#endif
}

TEST_CASE("strong_dependence_matrix formula and definiteness") {
    auto m2 = strong_dependence_matrix(2, 0.7, 0.5);
    CHECK_THAT(m2(0, 1), Catch::Matchers::WithinAbs(1.0 - std::pow(2.0, -0.5), 1e-15));

    CHECK_NOTHROW(strong_dependence_matrix(300, 1.0, 0.5));
    CHECK_NOTHROW(strong_dependence_matrix(100, 0.4, 0.4));
    CHECK_THROWS_AS(strong_dependence_matrix(200, 3.0, 3.0), NotPositiveDefinite);

#ifdef IHC_HAVE_EIGEN
    {
        Matrix raw(200, 200);
        for (std::size_t j = 0; j < 200; ++j)
            for (std::size_t k = 0; k < 200; ++k) {
                const double d = std::fabs(static_cast<double>(j) - static_cast<double>(k));
                raw(j, k) = std::max(0.0, 1.0 - std::pow(d, 3.0) * std::pow(200.0, -3.0));
            }
        CHECK(oracle::smallest_eigenvalue(raw) <= pd_tolerance(200));
        const Matrix ok = strong_dependence_matrix(300, 1.0, 0.5).matrix();
        CHECK(oracle::smallest_eigenvalue(ok) > pd_tolerance(300));
    }
#endif

    CHECK_THROWS_AS(strong_dependence_matrix(10, 0.4, 0.6), AlphaOutOfRange);
}

TEST_CASE("backward_shift_toeplitz placement") {
    const double one[] = {1.0};
    Matrix id = backward_shift_toeplitz(one, 5);
    CHECK((id - Matrix::identity(5)).max_abs() == 0.0);

    const double diff[] = {1.0, -1.0};
    Matrix d = backward_shift_toeplitz(diff, 4);
    CHECK(d(0, 0) == 1.0);
    CHECK(d(1, 0) == -1.0);
    CHECK(d(1, 1) == 1.0);
    CHECK(d(0, 1) == 0.0);
    CHECK(d(3, 2) == -1.0);

    const double g[] = {2.0, 1.0};
    Matrix m = backward_shift_toeplitz(g, 3);
    CHECK(m(0, 0) == 2.0);
    CHECK(m(1, 0) == 1.0);
    CHECK(m(1, 1) == 2.0);
    CHECK(m(2, 1) == 1.0);
    CHECK(m(2, 2) == 2.0);
    CHECK(m(2, 0) == 0.0);
}

TEST_CASE("cholesky_inverse closed forms") {
    const double white[] = {1.0};
    auto idpair = cholesky_inverse(toeplitz_from_coeffs(white, 6));
    CHECK((idpair.factor.m - Matrix::identity(6)).max_abs() == 0.0);
    CHECK((idpair.whitener.m - Matrix::identity(6)).max_abs() == 0.0);
    CHECK(idpair.whitener.identity);

    // 2x2 with off-diagonal rho.
    const double rho = 0.3;
    Matrix two(2, 2);
    two(0, 0) = two(1, 1) = 1.0;
    two(0, 1) = two(1, 0) = rho;
    auto pair = cholesky_inverse(CorrelationMatrix::from_dense(std::move(two)));
    const double s = std::sqrt(1.0 - rho * rho);
    CHECK_THAT(pair.whitener(0, 0), Catch::Matchers::WithinAbs(1.0, 1e-14));
    CHECK_THAT(pair.whitener(1, 1), Catch::Matchers::WithinAbs(1.0 / s, 1e-14));
    CHECK_THAT(pair.whitener(1, 0), Catch::Matchers::WithinAbs(-rho / s, 1e-14));
}

TEST_CASE("tridiagonal whitener approaches the spectral factorization") {
    // f = 1 + 0.8 cos(theta) = 0.8 |1 + 0.5 e^{i theta}|^2, so the interior
    // diagonal of U converges to 1/sqrt(0.8).
    const double tri[] = {1.0, 0.4};
    auto pair = cholesky_inverse(toeplitz_from_coeffs(tri, 100));
    CHECK_THAT(pair.whitener(49, 49), Catch::Matchers::WithinAbs(1.0 / std::sqrt(0.8), 1e-6));
}

TEST_CASE("whitening identity and unit-diagonal lower bound on random matrices") {
    SplitMix64 rng(2024);
    for (std::size_t n : {16, 48}) {
        for (int trial = 0; trial < 5; ++trial) {
            auto sigma = random_correlation(n, rng);
            auto pair = cholesky_inverse(sigma);
            const Matrix u = pair.whitener.m;
            const Matrix residual = u * sigma.matrix() * u.transpose() - Matrix::identity(n);
            CHECK(residual.max_abs() <= 1e-8);
            const Matrix lfac = pair.factor.m;
            CHECK((lfac * lfac.transpose() - sigma.matrix()).max_abs() <= 1e-10);
            for (std::size_t k = 0; k < n; ++k) CHECK(u(k, k) >= 1.0 - 1e-12);
        }
    }
}

TEST_CASE("band keeps exactly the declared window") {
    const double tri[] = {1.0, 0.4};
    auto pair = cholesky_inverse(toeplitz_from_coeffs(tri, 8));

    auto full = band(pair.whitener, 8);
    CHECK((full.m - pair.whitener.m).max_abs() == 0.0);

    auto diag = band(pair.whitener, 1);
    for (std::size_t i = 0; i < 8; ++i)
        for (std::size_t j = 0; j < 8; ++j)
            CHECK(diag(i, j) == (i == j ? pair.whitener(i, i) : 0.0));

    auto two = band(pair.whitener, 2);
    for (std::size_t i = 0; i < 8; ++i)
        for (std::size_t j = 0; j < 8; ++j) {
            if (j <= i && i - j <= 1)
                CHECK(two(i, j) == pair.whitener(i, j));
            else
                CHECK(two(i, j) == 0.0);
        }

    CHECK_THROWS_AS(band(pair.whitener, 0), BandwidthOutOfRange);
    CHECK_THROWS_AS(band(pair.whitener, 9), BandwidthOutOfRange);
}

TEST_CASE("innovation_transform invariants") {
    const double tri[] = {1.0, 0.4};
    auto sigma = toeplitz_from_coeffs(tri, 60);
    const std::size_t b = 5;
    auto t = innovation_transform(sigma, b);

    // Columns of Ubar are unit vectors supported on rows j .. j+b-1.
    for (std::size_t j = 0; j < 60; ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < 60; ++i) {
            const double v = t.ubar(i, j);
            if (i < j || i > std::min<std::size_t>(59, j + b - 1)) CHECK(v == 0.0);
            s += v * v;
        }
        CHECK_THAT(s, Catch::Matchers::WithinAbs(1.0, 1e-12));
    }

    // Ubar' Ubar has unit diagonal and bandwidth 2b-1.
    Matrix g = t.ubar.transpose() * t.ubar;
    for (std::size_t i = 0; i < 60; ++i) {
        CHECK_THAT(g(i, i), Catch::Matchers::WithinAbs(1.0, 1e-12));
        for (std::size_t j = 0; j < 60; ++j) {
            const std::size_t d = i > j ? i - j : j - i;
            if (d >= b) CHECK(std::fabs(g(i, j)) < 1e-14);
        }
    }

    // The V member matches apply().
    SplitMix64 rng(5);
    Vec x(60);
    for (double& v : x) v = rng.normal();
    Vec via_v = t.v * x;
    Vec via_apply = t.apply(x);
    for (std::size_t i = 0; i < 60; ++i)
        CHECK_THAT(via_apply[i], Catch::Matchers::WithinAbs(via_v[i], 1e-10));
}

TEST_CASE("identity covariance gives an identity transform") {
    const double white[] = {1.0};
    auto t = innovation_transform(toeplitz_from_coeffs(white, 10), 3);
    CHECK((t.v - Matrix::identity(10)).max_abs() <= 1e-12);
}

TEST_CASE("bandwidth one reduces to the rescaled whitener") {
    const double tri[] = {1.0, 0.4};
    auto sigma = toeplitz_from_coeffs(tri, 40);
    auto pair = cholesky_inverse(sigma);
    auto t = innovation_transform(pair, 1);
    SplitMix64 rng(17);
    Vec x(40);
    for (double& v : x) v = rng.normal();
    Vec vx = t.apply(x);
    Vec ux = pair.whitener.apply(x);
    // At bandwidth one each banded column is U(j,j) e_j, which normalizes to
    // e_j, so Ubar is the identity and V x = U x exactly.
    for (std::size_t i = 0; i < 40; ++i)
        CHECK_THAT(vx[i], Catch::Matchers::WithinAbs(ux[i], 1e-12));
}

TEST_CASE("transform amplifies a sparse mean to the inverse-diagonal scale") {
    const double tri[] = {1.0, 0.4};
    auto sigma = toeplitz_from_coeffs(tri, 100);
    auto pair = cholesky_inverse(sigma);
    auto t = innovation_transform(pair, 7); // ceil(log 100) = 5; any small b works
    Vec mu(100, 0.0);
    for (std::size_t loc : {27, 50, 71}) mu[loc - 1] = 1.0;
    Vec v = t.apply(mu);
    const Vec d = inverse_diagonal(pair);
    for (std::size_t loc : {27, 50, 71}) {
        CHECK_THAT(v[loc - 1],
                   Catch::Matchers::WithinAbs(std::sqrt(d[loc - 1]), 0.05));
        CHECK_THAT(v[loc - 1], Catch::Matchers::WithinAbs(1.29, 0.03));
    }
#ifdef IHC_HAVE_EIGEN
    const auto dref = oracle::inverse_diagonal(sigma.matrix());
    for (std::size_t k = 0; k < 100; ++k)
        CHECK_THAT(d[k], Catch::Matchers::WithinAbs(dref[k], 1e-9));
#endif
}

TEST_CASE("diag_inverse_range surrogates") {
    const double white[] = {1.0};
    auto [ilo, ihi] = diag_inverse_range(toeplitz_from_coeffs(white, 25));
    CHECK(ilo == 1.0);
    CHECK(ihi == 1.0);

    const double tri[] = {1.0, 0.4};
    auto [lo, hi] = diag_inverse_range(toeplitz_from_coeffs(tri, 500));
    const double cf = oracle::wiener_rate([](double t) { return 1.0 + 0.8 * std::cos(t); });
    CHECK(lo <= hi);
    CHECK_THAT(lo, Catch::Matchers::WithinRel(cf, 0.02));
    CHECK_THAT(hi, Catch::Matchers::WithinRel(cf, 0.02));

    const double expb[] = {1.0, 0.25, 0.3};
    auto [blo, bhi] = diag_inverse_range(toeplitz_from_coeffs(expb, 500));
    const double cfb = oracle::wiener_rate(
        [](double t) { return 1.0 + 0.5 * std::cos(t) + 0.6 * std::cos(2.0 * t); });
    CHECK(blo <= bhi);
    CHECK_THAT(blo, Catch::Matchers::WithinRel(cfb, 0.02));
    CHECK_THAT(bhi, Catch::Matchers::WithinRel(cfb, 0.02));

    const double small[] = {1.0};
    CHECK_THROWS_AS(diag_inverse_range(toeplitz_from_coeffs(small, 8)), WindowEmpty);
}

TEST_CASE("polynomial decay propagates to the inverse and the whitener") {
    // Coefficients a_k = 0.3 (1+k)^{-3} keep f positive, so the matrix is PD
    // and its inverse inherits cubic off-diagonal decay.
    const std::size_t n = 200;
    std::vector<double> a(n, 0.0);
    a[0] = 1.0;
    for (std::size_t k = 1; k < n; ++k) a[k] = 0.3 * std::pow(1.0 + static_cast<double>(k), -3.0);
    auto sigma = toeplitz_from_coeffs(a, n);
    auto pair = cholesky_inverse(sigma);
    Matrix inv = pair.whitener.m.transpose() * pair.whitener.m;
    CHECK(offdiag_decay_slope(inv, 5, n / 4) <= -2.5);
    CHECK(offdiag_decay_slope(pair.whitener.m, 5, n / 4) <= -2.5);
}
