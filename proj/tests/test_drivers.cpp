#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "lk/drivers.hpp"

using namespace lk;

namespace {

DriverSet two_driver_set(double T, int G) {
    DriverSet ds;
    ds.x0 = make_polynomial_driver({Complex(0.0), Complex(0.4)}, G, T, true);
    ds.xs.push_back(make_polynomial_driver({Complex(0.0), Complex(1.0)}, G, T));
    ds.xs.push_back(make_polynomial_driver({Complex(0.0), Complex(0.0), Complex(0.5, 0.25)}, G, T));
    ds.T = T;
    ds.validate();
    return ds;
}

} // namespace

TEST_CASE("polynomial drivers sample Horner values on a uniform grid") {
    DriverPath p = make_polynomial_driver({Complex(1.0), Complex(-2.0), Complex(0.5)}, 10, 2.0);
    REQUIRE(p.times.size() == 11);
    CHECK(p.times.front() == 0.0);
    CHECK(p.times.back() == 2.0);
    for (size_t i = 0; i < p.times.size(); ++i) {
        double t = p.times[i];
        CHECK(std::abs(p.values[i] - Complex(1.0 - 2.0 * t + 0.5 * t * t)) < 1e-15);
    }

    DriverPath rp = make_polynomial_driver({Complex(0.0), Complex(1.0, 5.0)}, 4, 1.0, true);
    for (Complex v : rp.values) CHECK(v.imag() == 0.0); // real flag strips imaginary parts
}

TEST_CASE("interpolation, variation and validation") {
    DriverPath p = make_polynomial_driver({Complex(0.0), Complex(3.0)}, 6, 1.0);
    CHECK(std::abs(p.value_at(0.25) - Complex(0.75)) < 1e-15);
    CHECK(std::abs(p.total_variation() - 3.0) < 1e-13);
    CHECK_FALSE(p.is_zero());

    DriverPath bad = p;
    bad.times[2] = bad.times[1]; // not strictly increasing
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

    DriverSet ds = two_driver_set(1.0, 50);
    DriverSet broken = ds;
    broken.x0.values[0] = Complex(0.5); // x0 must start at zero
    CHECK_THROWS_AS(broken.validate(), std::invalid_argument);

    CHECK(ds.driver(1) != nullptr);
    CHECK(ds.driver(3) == nullptr); // beyond K is the zero driver
}

TEST_CASE("stieltjes integrals against closed forms") {
    double T = 1.5;
    DriverPath lin = make_polynomial_driver({Complex(0.0), Complex(1.0)}, 300, T);
    DriverPath quad = make_polynomial_driver({Complex(0.0), Complex(0.0), Complex(1.0)}, 300, T);

    auto ident = [](double u) { return Complex(u); };
    auto one = [](double) { return Complex(1.0); };

    // int_0^T u du, exact for trapezoid on a linear path
    CHECK(std::abs(stieltjes_integral(ident, lin, 0.0, T) - Complex(T * T / 2.0)) < 1e-13);
    // int_0^T d(u^2) telescopes along the sampled path
    CHECK(std::abs(stieltjes_integral(one, quad, 0.0, T) - Complex(T * T)) < 1e-13);
    // int_0^T u d(u^2) = 2 T^3 / 3 up to the sampled-path error h^2 T / 6,
    // which is 6.25e-6 at G = 300; the quadrature itself is exact per segment
    CHECK(std::abs(stieltjes_integral(ident, quad, 0.0, T) - Complex(2.0 * T * T * T / 3.0)) <
          1e-5);

    // orientation flip and interior endpoints
    Complex fwd = stieltjes_integral(ident, quad, 0.3, 1.1);
    Complex bwd = stieltjes_integral(ident, quad, 1.1, 0.3);
    CHECK(std::abs(fwd + bwd) < 1e-15);
    Complex whole = stieltjes_integral(ident, quad, 0.0, T);
    Complex split = stieltjes_integral(ident, quad, 0.0, 0.77) +
                    stieltjes_integral(ident, quad, 0.77, T);
    CHECK(std::abs(whole - split) < 1e-12);
}

TEST_CASE("sample based integrand overload agrees with the functional one") {
    double T = 1.0;
    DriverPath x = make_polynomial_driver({Complex(0.0), Complex(0.7), Complex(-0.2)}, 200, T);
    std::vector<Complex> samples(x.times.size());
    for (size_t i = 0; i < samples.size(); ++i) samples[i] = Complex(std::sin(x.times[i]));
    auto fn = [](double u) { return Complex(std::sin(u)); };
    Complex a = stieltjes_integral(samples, x, 0.0, T);
    Complex b = stieltjes_integral(fn, x, 0.0, T);
    // samples are interpolated linearly, so the two differ at quadrature order
    CHECK(std::abs(a - b) < 1e-6);
}

TEST_CASE("classical chain data maps to drivers with exact linear integrals") {
    double T = 1.0;
    int G = 200;
    auto rp = [&](std::vector<Complex> c) { return make_polynomial_driver(c, G, T, true); };
    DriverPath a0 = rp({Complex(0.5)});
    std::vector<DriverPath> a{rp({Complex(0.0), Complex(1.0)})};
    std::vector<DriverPath> b{rp({Complex(0.3)})};
    DriverSet ds = herglotz_to_drivers(a0, a, b);
    ds.validate();
    CHECK(ds.x0.real_flag);
    CHECK(std::abs(ds.x0.values.back() - Complex(0.5 * T)) < 1e-14);
    CHECK(std::abs(ds.xs[0].values.back() - Complex(T * T / 2.0, -0.3 * T)) < 1e-14);

    std::vector<DriverPath> b_short;
    CHECK_THROWS_AS(herglotz_to_drivers(a0, a, b_short), std::invalid_argument);
}

TEST_CASE("tail diagnostic grows with the radius") {
    DriverSet ds = two_driver_set(1.0, 100);
    double v1 = validate_convergence(ds, 0.3);
    double v2 = validate_convergence(ds, 0.6);
    CHECK(v1 >= 0.0);
    CHECK(v2 > v1);
    CHECK(std::isfinite(v2));
}

TEST_CASE("quadrature grid contains every driver node bitwise") {
    DriverSet ds = two_driver_set(1.0, 37);
    QuadGrid grid(ds, 0.0, 1.0, 4);
    CHECK(grid.K == 2);
    REQUIRE(grid.u.size() >= ds.x0.times.size());
    for (size_t i = 1; i < grid.u.size(); ++i) CHECK(grid.u[i - 1] < grid.u[i]);
    size_t hits = 0;
    for (double t : ds.x0.times) {
        for (double u : grid.u)
            if (u == t) { // exact, refinement must snap to the stored nodes
                ++hits;
                break;
            }
    }
    CHECK(hits == ds.x0.times.size());
    for (size_t j = 0; j < grid.u.size(); ++j) {
        CHECK(std::abs(grid.x0[j] - ds.x0.value_at(grid.u[j]).real()) < 1e-15);
        CHECK(std::abs(grid.xval[0][j] - ds.xs[0].value_at(grid.u[j])) < 1e-15);
    }
}

TEST_CASE("quadrature grid over a sub interval keeps the cut endpoints") {
    DriverSet ds = two_driver_set(1.0, 19);
    QuadGrid grid(ds, 0.231, 0.774, 5);
    CHECK(grid.u.front() == 0.231);
    CHECK(grid.u.back() == 0.774);
    for (size_t i = 1; i < grid.u.size(); ++i) CHECK(grid.u[i - 1] < grid.u[i]);
}
