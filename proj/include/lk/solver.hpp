#pragma once

#include <vector>

#include "lk/common.hpp"
#include "lk/drivers.hpp"
#include "lk/series.hpp"

namespace lk {

// Taylor data of f_t(z) = C(t)(z + c_1 z^2 + ...) sampled on the driver grid.
struct CoefficientTrajectory {
    int N = 0;
    std::vector<double> times;
    std::vector<Complex> C;
    std::vector<std::vector<Complex>> c; // c[j][n-1] = c_n at times[j]

    // f_t as a Taylor series of order N+1 (coefficient of z^{n+1} is C c_n)
    TruncatedTaylor f_at(size_t j) const;
};

struct GrunskyMatrix {
    int M = 0;
    std::vector<std::vector<Complex>> b; // b[m-1][n-1] = b_{-m,-n}
    std::vector<Complex> b0;             // b_{-m,0} column when computed, else empty

    Complex at(int m, int n) const { return b[static_cast<size_t>(m - 1)][static_cast<size_t>(n - 1)]; }
    double max_asymmetry() const;
};

struct GrunskyTrajectory {
    std::vector<double> times;
    std::vector<GrunskyMatrix> mats;
};

// Coefficients of Q_n(t,w) = sum_k q[n][k] w^{-k}, k = 0..n.
struct FaberTrajectory {
    int n_max = 0;
    std::vector<double> times;
    // q[j][n-1][k] = coefficient of w^{-k} in Q_n at times[j]
    std::vector<std::vector<std::vector<Complex>>> q;
};

// Classical 4th-order stepping of the triangular coefficient system
//   dC = C dx0,  dc_n = dx_n + sum_{k<n} (k+1) c_k dx_{n-k} + n c_n dx0
// with piecewise-constant densities on the refined grid; no step straddles a
// density jump. States recorded at the driver grid nodes.
CoefficientTrajectory solve_taylor_ode(const DriverSet& ds, int N, int refine = 8);

// Closed-form coefficients at one time: c_n = e^{n x0(t)} multiplied by the
// weighted sum of iterated integrals over compositions of n, each word taken
// in composition order with its proper-prefix complement product as weight.
// Independent of solve_taylor_ode.
std::vector<Complex> taylor_explicit(const DriverSet& ds, double t, int N, int refine = 8);

// Evolution of the full M x M coefficient matrix
//   db_{-n,-m} = -dx_{n+m} + sum_{k+l=m-1} (k+1) b_{-n,-(k+1)} dx_l
//                          + sum_{k+l=n-1} (k+1) b_{-m,-(k+1)} dx_l
// (l = 0 couples to x0). Symmetry is left to emerge, not enforced.
GrunskyTrajectory grunsky_ode(const DriverSet& ds, int M, int refine = 8);

// One-time evaluation of the explicit coefficient formula: for each (m,n),
// minus e^{(m+n)x0(t)} times the sum over leading indices i<=m, j<=n and
// composition pairs of the two partial-sum-complement weight products,
// shuffled words, and the letter i+j integrating innermost.
GrunskyMatrix grunsky_explicit(const DriverSet& ds, double t, int M, int refine = 8);

// Faber coefficient system dQ_n = n dx_n + n sum_{k=1}^{n} Q_k dx_{n-k},
// Q_n(0,w) = w^{-n}; same stepping scheme as solve_taylor_ode.
FaberTrajectory faber_ode(const DriverSet& ds, int n_max, int refine = 8);

// Residual of the inverse-map evolution in integral form: at each grid time
// the reverted series g_t is compared against g_0 minus the accumulated
// trapezoid increments of g dx0 + sum_k g^{k+1} dx_k. Returns the largest
// coefficient magnitude over all grid times; second order under refinement.
double inverse_ode_residual(const DriverSet& ds, const CoefficientTrajectory& traj);

} // namespace lk
