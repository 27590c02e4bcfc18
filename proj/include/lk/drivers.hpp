#pragma once

#include <functional>
#include <vector>

#include "lk/common.hpp"

namespace lk {

// One driving path: continuous, piecewise linear between shared grid nodes.
// Piecewise-linear paths are continuous and of bounded variation, and their
// Stieltjes measures have piecewise-constant densities, which is what every
// quadrature below relies on.
struct DriverPath {
    std::vector<double> times;    // strictly increasing, times[0] == 0
    std::vector<Complex> values;  // one sample per node
    bool real_flag = false;       // imaginary part identically zero when set

    void validate() const;
    double horizon() const { return times.back(); }
    Complex value_at(double t) const;  // linear interpolation
    double total_variation() const;    // sum of |increments|
    bool is_zero() const;
};

// The control data: x0 (real, x0(0)=0) plus x1..xK (complex), all on one grid.
// Drivers with index > K are identically zero by convention.
struct DriverSet {
    DriverPath x0;
    std::vector<DriverPath> xs; // xs[n-1] is the path x_n
    double T = 0.0;

    void validate() const;
    int K() const { return static_cast<int>(xs.size()); }
    // Path for index n >= 1; returns nullptr when n > K (the zero driver).
    const DriverPath* driver(int n) const {
        return (n >= 1 && n <= K()) ? &xs[n - 1] : nullptr;
    }
};

// Sample t -> sum_j coeffs[j] t^j on a uniform grid of G steps over [0,T].
DriverPath make_polynomial_driver(const std::vector<Complex>& coeffs, int G, double T,
                                  bool real_flag = false);

// Trapezoid approximation of the Stieltjes integral int_s^t phi(u) dx(u) on a
// refinement of the path grid (refine sub-steps per segment). Endpoints inside
// a segment cut it by linear interpolation. Exact for phi constant, x linear.
Complex stieltjes_integral(const std::function<Complex(double)>& phi, const DriverPath& x,
                           double s, double t, int refine = 8);

// Overload taking the integrand as node samples on the path's own grid
// (interpolated linearly onto the refined quadrature nodes).
Complex stieltjes_integral(const std::vector<Complex>& phi_samples, const DriverPath& x,
                           double s, double t, int refine = 8);

// Classical chain data to controlled-equation drivers. The inputs are the
// Fourier-coefficient paths of a Herglotz density (1/2pi)(a0 + sum a_k cos +
// b_k sin); outputs x0(t) = int_0^t a0, x_k = int_0^t a_k - i int_0^t b_k,
// cumulative integrals by trapezoid on the shared grid.
DriverSet herglotz_to_drivers(const DriverPath& a0, const std::vector<DriverPath>& a,
                              const std::vector<DriverPath>& b);

// Diagnostic: sum_n n * TV(x_n) * r^n over the stored drivers, 0 < r < 1.
double validate_convergence(const DriverSet& ds, double r);

// Shared quadrature grid: every driver segment intersecting [s,t] split into
// `refine` equal sub-steps, plus the (possibly interior) endpoints s and t.
// Precomputes node times, x0 values, and per-driver node values so that the
// iterated-integral evaluators are straight cumulative sweeps.
struct QuadGrid {
    std::vector<double> u;                         // node times, u.front()=s, u.back()=t
    std::vector<double> x0;                        // x0 at nodes (real part)
    std::vector<std::vector<Complex>> xval;        // xval[n-1][j] = x_n(u_j), n=1..K
    int K = 0;

    QuadGrid(const DriverSet& ds, double s, double t, int refine);
    size_t nodes() const { return u.size(); }
};

} // namespace lk
