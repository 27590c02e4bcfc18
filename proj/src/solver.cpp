#include "lk/solver.hpp"

#include <cmath>
#include <stdexcept>

#include "lk/words.hpp"

namespace lk {

TruncatedTaylor CoefficientTrajectory::f_at(size_t j) const {
    TruncatedTaylor f;
    f.coeffs.assign(static_cast<size_t>(N) + 2, Complex(0.0, 0.0));
    f.coeffs[1] = C[j];
    for (int n = 1; n <= N; ++n)
        f.coeffs[static_cast<size_t>(n) + 1] = C[j] * c[j][static_cast<size_t>(n - 1)];
    return f;
}

double GrunskyMatrix::max_asymmetry() const {
    double worst = 0.0;
    for (int m = 1; m <= M; ++m)
        for (int n = m + 1; n <= M; ++n) worst = std::max(worst, std::abs(at(m, n) - at(n, m)));
    return worst;
}

namespace {

// Shared RK4 sweep over the refined grid. deriv(rho0, rho, y, dy) fills dy;
// record(j) is called at every node that coincides with a driver grid node.
template <typename Deriv, typename Record>
void rk4_sweep(const DriverSet& ds, int refine, std::vector<Complex>& y, Deriv deriv,
               Record record) {
    QuadGrid grid(ds, 0.0, ds.T, refine);
    size_t nstate = y.size();
    std::vector<double> rho(static_cast<size_t>(grid.K));
    std::vector<Complex> rho_c(static_cast<size_t>(grid.K));
    std::vector<Complex> k1(nstate), k2(nstate), k3(nstate), k4(nstate), tmp(nstate);

    size_t drv = 0; // next driver node to record
    if (grid.u[0] == ds.x0.times[0]) {
        record(0);
        ++drv;
    }
    for (size_t j = 0; j + 1 < grid.nodes(); ++j) {
        double h = grid.u[j + 1] - grid.u[j];
        double rho0 = (grid.x0[j + 1] - grid.x0[j]) / h;
        for (int a = 1; a <= grid.K; ++a) {
            size_t ai = static_cast<size_t>(a - 1);
            rho_c[ai] = (grid.xval[ai][j + 1] - grid.xval[ai][j]) / h;
        }
        deriv(rho0, rho_c, y, k1);
        for (size_t i = 0; i < nstate; ++i) tmp[i] = y[i] + 0.5 * h * k1[i];
        deriv(rho0, rho_c, tmp, k2);
        for (size_t i = 0; i < nstate; ++i) tmp[i] = y[i] + 0.5 * h * k2[i];
        deriv(rho0, rho_c, tmp, k3);
        for (size_t i = 0; i < nstate; ++i) tmp[i] = y[i] + h * k3[i];
        deriv(rho0, rho_c, tmp, k4);
        for (size_t i = 0; i < nstate; ++i)
            y[i] += (h / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        if (drv < ds.x0.times.size() && grid.u[j + 1] == ds.x0.times[drv]) {
            record(j + 1);
            ++drv;
        }
    }
    if (drv != ds.x0.times.size())
        throw std::logic_error("refined grid failed to hit every driver node");
}

} // namespace

CoefficientTrajectory solve_taylor_ode(const DriverSet& ds, int N, int refine) {
    if (N < 1) throw std::invalid_argument("order must be >= 1");
    ds.validate();
    CoefficientTrajectory traj;
    traj.N = N;
    traj.times = ds.x0.times;
    traj.C.reserve(traj.times.size());
    traj.c.reserve(traj.times.size());

    // state: [0] = C, [n] = c_n
    std::vector<Complex> y(static_cast<size_t>(N) + 1, Complex(0.0, 0.0));
    y[0] = Complex(1.0, 0.0);
    int K = ds.K();

    auto deriv = [N, K](double rho0, const std::vector<Complex>& rho,
                        const std::vector<Complex>& s, std::vector<Complex>& d) {
        d[0] = s[0] * rho0;
        for (int n = 1; n <= N; ++n) {
            Complex acc = (n <= K) ? rho[static_cast<size_t>(n - 1)] : Complex(0.0, 0.0);
            for (int k = 1; k < n; ++k) {
                int idx = n - k;
                if (idx <= K)
                    acc += static_cast<double>(k + 1) * s[static_cast<size_t>(k)] *
                           rho[static_cast<size_t>(idx - 1)];
            }
            acc += static_cast<double>(n) * s[static_cast<size_t>(n)] * rho0;
            d[static_cast<size_t>(n)] = acc;
        }
    };
    auto record = [&traj, &y, N](size_t) {
        traj.C.push_back(y[0]);
        traj.c.emplace_back(y.begin() + 1, y.begin() + 1 + N);
    };
    rk4_sweep(ds, refine, y, deriv, record);
    return traj;
}

std::vector<Complex> taylor_explicit(const DriverSet& ds, double t, int N, int refine) {
    if (N < 1) throw std::invalid_argument("order must be >= 1");
    if (t < 0.0 || t > ds.T) throw std::invalid_argument("t outside [0,T]");
    QuadGrid grid(ds, 0.0, t, refine);
    double x0t = ds.x0.value_at(t).real();
    std::vector<Complex> out(static_cast<size_t>(N));
    for (int n = 1; n <= N; ++n) {
        Complex sum(0.0, 0.0);
        for (const auto& comp : compositions(n)) {
            // product of (n - partial sum + 1) over all proper prefixes of the
            // word itself; the word integrates in written order (leftmost
            // letter outermost). Pairing weight and word the other way round
            // breaks on the first non-palindromic case, c_3 with x1, x2 on.
            double w = 1.0;
            int prefix = 0;
            for (size_t r = 0; r + 1 < comp.size(); ++r) {
                prefix += comp[r];
                w *= static_cast<double>(n - prefix + 1);
            }
            sum += w * iterated_integral(Word(comp), grid);
        }
        out[static_cast<size_t>(n - 1)] = std::exp(static_cast<double>(n) * x0t) * sum;
    }
    return out;
}

GrunskyTrajectory grunsky_ode(const DriverSet& ds, int M, int refine) {
    if (M < 1) throw std::invalid_argument("order must be >= 1");
    ds.validate();
    GrunskyTrajectory traj;
    traj.times = ds.x0.times;
    traj.mats.reserve(traj.times.size());

    // state: row-major b_{-n,-m}, n outer, m inner, both 1..M
    std::vector<Complex> y(static_cast<size_t>(M) * M, Complex(0.0, 0.0));
    int K = ds.K();
    auto at = [M](std::vector<Complex>& v, int n, int m) -> Complex& {
        return v[static_cast<size_t>(n - 1) * M + (m - 1)];
    };
    auto cat = [M](const std::vector<Complex>& v, int n, int m) {
        return v[static_cast<size_t>(n - 1) * M + (m - 1)];
    };

    auto density = [K](double rho0, const std::vector<Complex>& rho, int l) {
        if (l == 0) return Complex(rho0, 0.0);
        if (l <= K) return rho[static_cast<size_t>(l - 1)];
        return Complex(0.0, 0.0);
    };
    auto deriv = [M, K, &cat, &density](double rho0, const std::vector<Complex>& rho,
                                        const std::vector<Complex>& s, std::vector<Complex>& d) {
        for (int n = 1; n <= M; ++n) {
            for (int m = 1; m <= M; ++m) {
                Complex acc = -density(rho0, rho, n + m);
                for (int k = 0; k <= m - 1; ++k)
                    acc += static_cast<double>(k + 1) * cat(s, n, k + 1) *
                           density(rho0, rho, m - 1 - k);
                for (int k = 0; k <= n - 1; ++k)
                    acc += static_cast<double>(k + 1) * cat(s, m, k + 1) *
                           density(rho0, rho, n - 1 - k);
                d[static_cast<size_t>(n - 1) * M + (m - 1)] = acc;
            }
        }
    };
    auto record = [&traj, &y, M, &at](size_t) {
        GrunskyMatrix g;
        g.M = M;
        g.b.assign(static_cast<size_t>(M), std::vector<Complex>(static_cast<size_t>(M)));
        for (int m = 1; m <= M; ++m)
            for (int n = 1; n <= M; ++n)
                g.b[static_cast<size_t>(m - 1)][static_cast<size_t>(n - 1)] = at(y, m, n);
        traj.mats.push_back(std::move(g));
    };
    rk4_sweep(ds, refine, y, deriv, record);
    return traj;
}

GrunskyMatrix grunsky_explicit(const DriverSet& ds, double t, int M, int refine) {
    if (M < 1) throw std::invalid_argument("order must be >= 1");
    if (t < 0.0 || t > ds.T) throw std::invalid_argument("t outside [0,T]");
    QuadGrid grid(ds, 0.0, t, refine);
    double x0t = ds.x0.value_at(t).real();

    GrunskyMatrix g;
    g.M = M;
    g.b.assign(static_cast<size_t>(M), std::vector<Complex>(static_cast<size_t>(M)));
    for (int m = 1; m <= M; ++m) {
        for (int n = 1; n <= M; ++n) {
            WordSeries acc;
            for (int i = 1; i <= m; ++i) {
                for (int j = 1; j <= n; ++j) {
                    for (const auto& ci : compositions(m - i)) {
                        double wi = 1.0;
                        int prefix = 0;
                        for (int e : ci) {
                            prefix += e;
                            wi *= static_cast<double>(m - prefix);
                        }
                        for (const auto& cj : compositions(n - j)) {
                            double wj = 1.0;
                            prefix = 0;
                            for (int e : cj) {
                                prefix += e;
                                wj *= static_cast<double>(n - prefix);
                            }
                            WordSeries sh = shuffle(Word(ci), Word(cj));
                            for (const auto& [wrd, mult] : sh.terms)
                                acc.add(wrd.append(i + j), wi * wj * mult);
                        }
                    }
                }
            }
            g.b[static_cast<size_t>(m - 1)][static_cast<size_t>(n - 1)] =
                -std::exp(static_cast<double>(m + n) * x0t) * apply_integral(acc, grid);
        }
    }
    return g;
}

FaberTrajectory faber_ode(const DriverSet& ds, int n_max, int refine) {
    if (n_max < 1) throw std::invalid_argument("order must be >= 1");
    ds.validate();
    FaberTrajectory traj;
    traj.n_max = n_max;
    traj.times = ds.x0.times;

    // state: q_{n,k} packed as offset(n) + k with offset(n) = n(n+1)/2 - 1 + (n-1)... use lookup
    std::vector<size_t> off(static_cast<size_t>(n_max) + 1, 0);
    size_t total = 0;
    for (int n = 1; n <= n_max; ++n) {
        off[static_cast<size_t>(n)] = total;
        total += static_cast<size_t>(n) + 1;
    }
    std::vector<Complex> y(total, Complex(0.0, 0.0));
    for (int n = 1; n <= n_max; ++n) y[off[static_cast<size_t>(n)] + static_cast<size_t>(n)] = 1.0;
    int K = ds.K();

    auto deriv = [n_max, K, &off](double rho0, const std::vector<Complex>& rho,
                                  const std::vector<Complex>& s, std::vector<Complex>& d) {
        auto density = [&](int l) {
            if (l == 0) return Complex(rho0, 0.0);
            if (l <= K) return rho[static_cast<size_t>(l - 1)];
            return Complex(0.0, 0.0);
        };
        for (int n = 1; n <= n_max; ++n) {
            size_t on = off[static_cast<size_t>(n)];
            for (int jj = 0; jj <= n; ++jj) d[on + static_cast<size_t>(jj)] = 0.0;
            d[on] += static_cast<double>(n) * density(n);
            for (int k = 1; k <= n; ++k) {
                Complex rhonk = density(n - k);
                if (rhonk == Complex(0.0, 0.0)) continue;
                size_t ok = off[static_cast<size_t>(k)];
                for (int jj = 0; jj <= k; ++jj)
                    d[on + static_cast<size_t>(jj)] +=
                        static_cast<double>(n) * rhonk * s[ok + static_cast<size_t>(jj)];
            }
        }
    };
    auto record = [&traj, &y, n_max, &off](size_t) {
        std::vector<std::vector<Complex>> snap(static_cast<size_t>(n_max));
        for (int n = 1; n <= n_max; ++n) {
            size_t on = off[static_cast<size_t>(n)];
            snap[static_cast<size_t>(n - 1)].assign(y.begin() + static_cast<long>(on),
                                                    y.begin() + static_cast<long>(on) + n + 1);
        }
        traj.q.push_back(std::move(snap));
    };
    rk4_sweep(ds, refine, y, deriv, record);
    return traj;
}

double inverse_ode_residual(const DriverSet& ds, const CoefficientTrajectory& traj) {
    if (traj.times != ds.x0.times)
        throw std::invalid_argument("trajectory grid does not match drivers");
    size_t J = traj.times.size();
    int order = traj.N + 1;
    int K = ds.K();

    TruncatedTaylor g_prev = revert(traj.f_at(0));
    TruncatedTaylor accum; // running integral term
    accum.coeffs.assign(static_cast<size_t>(order) + 1, Complex(0.0, 0.0));
    TruncatedTaylor g0 = g_prev;

    double worst = 0.0;
    for (size_t jstep = 0; jstep + 1 < J; ++jstep) {
        TruncatedTaylor g_next = revert(traj.f_at(jstep + 1));
        TruncatedTaylor gbar = series_arith(g_prev, g_next, SeriesOp::add);
        gbar = series_scale(gbar, Complex(0.5, 0.0));

        Complex dx0 = ds.x0.values[jstep + 1] - ds.x0.values[jstep];
        TruncatedTaylor incr = series_scale(gbar, dx0);
        TruncatedTaylor gpow = gbar;
        for (int k = 1; k <= K && k <= order; ++k) {
            gpow = series_arith(gpow, gbar, SeriesOp::mul); // g^{k+1}
            Complex dxk = ds.xs[static_cast<size_t>(k - 1)].values[jstep + 1] -
                          ds.xs[static_cast<size_t>(k - 1)].values[jstep];
            if (dxk != Complex(0.0, 0.0))
                incr = series_arith(incr, series_scale(gpow, dxk), SeriesOp::add);
        }
        accum = series_arith(accum, incr, SeriesOp::add);

        for (int d = 0; d <= order; ++d) {
            Complex r = (g_next.at(d) - g0.at(d)) + accum.at(d);
            worst = std::max(worst, std::abs(r));
        }
        g_prev = g_next;
    }
    return worst;
}

} // namespace lk
