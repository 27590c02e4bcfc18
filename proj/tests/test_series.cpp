#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "lk/series.hpp"

using namespace lk;

namespace {

double cdist(Complex a, Complex b) { return std::abs(a - b); }

TruncatedTaylor random_series(std::mt19937_64& gen, int order, bool unit_slope) {
    auto uni = [&](double lo, double hi) {
        return lo + (hi - lo) * (static_cast<double>(gen() >> 11) * 0x1.0p-53);
    };
    TruncatedTaylor a(order);
    for (int j = 1; j <= order; ++j) a.coeffs[j] = Complex(uni(-0.5, 0.5), uni(-0.5, 0.5));
    if (unit_slope) a.coeffs[1] = Complex(1.0, 0.0);
    return a;
}

} // namespace

TEST_CASE("polynomial product truncates at the common order") {
    TruncatedTaylor a(4), b(4);
    a.coeffs = {1, 1, 0, 0, 0};  // 1 + z
    b.coeffs = {1, -1, 0, 0, 0}; // 1 - z
    TruncatedTaylor p = series_mul(a, b);
    CHECK(p.order() == 4);
    CHECK(cdist(p.at(0), 1.0) == 0.0);
    CHECK(cdist(p.at(1), 0.0) == 0.0);
    CHECK(cdist(p.at(2), -1.0) == 0.0);

    TruncatedTaylor shorter(2);
    shorter.coeffs = {0, 1, 1};
    CHECK(series_mul(a, shorter).order() == 2);
    CHECK(series_add(a, shorter).order() == 2);
}

TEST_CASE("exp and log reproduce the classical coefficients") {
    TruncatedTaylor z = TruncatedTaylor::identity(8);
    TruncatedTaylor e = exp_series(z);
    double fact = 1.0;
    for (int j = 1; j <= 8; ++j) {
        fact *= j;
        CHECK(cdist(e.at(j), 1.0 / fact) < 1e-14);
    }

    // log(1/(1-z)) = sum z^j / j
    TruncatedTaylor g(8);
    for (int j = 0; j <= 8; ++j) g.coeffs[j] = 1.0; // 1/(1-z)
    TruncatedTaylor l = log_series(g);
    for (int j = 1; j <= 8; ++j) CHECK(cdist(l.at(j), 1.0 / j) < 1e-14);
    CHECK_THROWS_AS(log_series(TruncatedTaylor(3)), std::invalid_argument);
}

TEST_CASE("exp then log is the identity on random input") {
    std::mt19937_64 gen(7101);
    for (int trial = 0; trial < 4; ++trial) {
        TruncatedTaylor a = random_series(gen, 12, false);
        a.coeffs[0] = Complex(0.3, -0.2);
        TruncatedTaylor back = log_series(exp_series(a));
        for (int j = 0; j <= 12; ++j) CHECK(cdist(back.at(j), a.at(j)) < 1e-12);
    }
}

TEST_CASE("reversion of z + z^2 gives the signed Catalan tail") {
    TruncatedTaylor a(5);
    a.coeffs[1] = 1.0;
    a.coeffs[2] = 1.0;
    TruncatedTaylor g = revert(a);
    const double want[6] = {0.0, 1.0, -1.0, 2.0, -5.0, 14.0};
    for (int j = 0; j <= 5; ++j) CHECK(cdist(g.at(j), want[j]) < 1e-12);
}

TEST_CASE("reversion is a two sided compositional inverse") {
    std::mt19937_64 gen(2214);
    TruncatedTaylor f = random_series(gen, 10, false);
    f.coeffs[1] = Complex(0.9, 0.4);
    TruncatedTaylor g = revert(f);
    TruncatedTaylor id = TruncatedTaylor::identity(10);
    for (const TruncatedTaylor& comp : {compose(f, g), compose(g, f)})
        for (int j = 0; j <= 10; ++j) CHECK(cdist(comp.at(j), id.at(j)) < 1e-9);

    CHECK_THROWS_AS(revert(TruncatedTaylor(4)), std::invalid_argument);
    TruncatedTaylor bad(4);
    bad.coeffs[0] = 1.0;
    bad.coeffs[1] = 1.0;
    CHECK_THROWS_AS(revert(bad), std::invalid_argument);
}

TEST_CASE("compose substitutes a zero constant series") {
    // f = z/(1-z) composed with g = z^2 is z^2/(1-z^2)
    TruncatedTaylor f(8), g(8);
    for (int j = 1; j <= 8; ++j) f.coeffs[j] = 1.0;
    g.coeffs[2] = 1.0;
    TruncatedTaylor c = compose(f, g);
    for (int j = 0; j <= 8; ++j) {
        double want = (j >= 2 && j % 2 == 0) ? 1.0 : 0.0;
        CHECK(cdist(c.at(j), want) < 1e-13);
    }
    TruncatedTaylor bad(3);
    bad.coeffs[0] = 0.5;
    CHECK_THROWS_AS(compose(f, bad), std::invalid_argument);
}

TEST_CASE("series_pow matches repeated multiplication") {
    std::mt19937_64 gen(99);
    TruncatedTaylor a = random_series(gen, 9, false);
    a.coeffs[0] = Complex(1.1, 0.2);
    TruncatedTaylor p = series_pow(a, 4);
    TruncatedTaylor q = series_mul(series_mul(a, a), series_mul(a, a));
    for (int j = 0; j <= 9; ++j) CHECK(cdist(p.at(j), q.at(j)) < 1e-12);
}

TEST_CASE("Laurent window accessors and the residue guard") {
    TruncatedLaurent a(-3, 2);
    a.ref(-3) = 1.0;
    a.ref(-1) = Complex(0.0, 2.0);
    a.ref(2) = -1.0;
    CHECK(a.high() == 2);
    CHECK(cdist(a.at(-1), Complex(0.0, 2.0)) == 0.0);
    CHECK(cdist(a.at(5), 0.0) == 0.0); // outside the window reads as zero
    CHECK(cdist(residue(a), Complex(0.0, 2.0)) == 0.0);

    TruncatedLaurent pos(0, 3);
    CHECK_THROWS_AS(residue(pos), std::invalid_argument);

    TruncatedLaurent proj = project_nonpositive(a);
    CHECK(cdist(proj.at(-3), 1.0) == 0.0);
    CHECK(cdist(proj.at(2), 0.0) == 0.0);
}

TEST_CASE("difference quotient of the geometric map is a rank one table") {
    const double t = 0.37;
    TruncatedTaylor f(9);
    double p = 1.0;
    for (int j = 1; j <= 9; ++j) {
        f.coeffs[j] = p; // z/(1-t z)
        p *= t;
    }
    BivariateTruncated dd = divided_difference(f, 4);
    for (int m = 0; m <= 4; ++m)
        for (int n = 0; n <= 4; ++n) CHECK(cdist(dd.at(m, n), std::pow(t, m + n)) < 1e-14);

    TruncatedTaylor bad(4);
    bad.coeffs[0] = 1.0;
    CHECK_THROWS_AS(divided_difference(bad, 2), std::invalid_argument);
}

TEST_CASE("bivariate log turns products into sums") {
    std::mt19937_64 gen(4242);
    auto uni = [&](double lo, double hi) {
        return lo + (hi - lo) * (static_cast<double>(gen() >> 11) * 0x1.0p-53);
    };
    auto random_biv = [&](int order) {
        BivariateTruncated b(order);
        for (int m = 0; m <= order; ++m)
            for (int n = 0; n <= order; ++n) b.ref(m, n) = Complex(uni(-0.3, 0.3), uni(-0.3, 0.3));
        b.ref(0, 0) = Complex(1.0 + uni(0.0, 0.5), uni(-0.2, 0.2));
        return b;
    };
    BivariateTruncated a = random_biv(4), b = random_biv(4);
    BivariateTruncated lhs = bivariate_log(bivariate_mul(a, b));
    BivariateTruncated la = bivariate_log(a), lb = bivariate_log(b);
    for (int m = 0; m <= 4; ++m)
        for (int n = 0; n <= 4; ++n)
            CHECK(cdist(lhs.at(m, n), la.at(m, n) + lb.at(m, n)) < 1e-11);
}
