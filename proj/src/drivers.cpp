#include "lk/drivers.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lk {

void DriverPath::validate() const {
    if (times.size() < 2) throw std::invalid_argument("driver path needs at least 2 nodes");
    if (times.size() != values.size())
        throw std::invalid_argument("driver path times/values size mismatch");
    if (times.front() != 0.0) throw std::invalid_argument("driver path must start at time 0");
    for (size_t i = 0; i + 1 < times.size(); ++i) {
        if (!(times[i + 1] > times[i]))
            throw std::invalid_argument("driver path times must be strictly increasing");
    }
    for (const Complex& v : values) {
        if (!is_finite(v)) throw std::invalid_argument("driver path has non-finite value");
        if (real_flag && v.imag() != 0.0)
            throw std::invalid_argument("real driver path has nonzero imaginary part");
    }
}

Complex DriverPath::value_at(double t) const {
    if (t <= times.front()) return values.front();
    if (t >= times.back()) return values.back();
    // first node strictly past t
    auto it = std::upper_bound(times.begin(), times.end(), t);
    size_t i = static_cast<size_t>(it - times.begin()) - 1;
    double w = (t - times[i]) / (times[i + 1] - times[i]);
    return values[i] + w * (values[i + 1] - values[i]);
}

double DriverPath::total_variation() const {
    double tv = 0.0;
    for (size_t i = 0; i + 1 < values.size(); ++i) tv += std::abs(values[i + 1] - values[i]);
    return tv;
}

bool DriverPath::is_zero() const {
    for (const Complex& v : values)
        if (v != Complex(0.0, 0.0)) return false;
    return true;
}

void DriverSet::validate() const {
    x0.validate();
    if (!x0.real_flag) throw std::invalid_argument("x0 must be flagged real");
    if (x0.values.front() != Complex(0.0, 0.0))
        throw std::invalid_argument("x0 must start at 0");
    for (const DriverPath& p : xs) {
        p.validate();
        if (p.times != x0.times)
            throw std::invalid_argument("all drivers must share the x0 grid");
    }
    if (T != x0.horizon()) throw std::invalid_argument("horizon does not match x0 grid");
}

DriverPath make_polynomial_driver(const std::vector<Complex>& coeffs, int G, double T,
                                  bool real_flag) {
    if (G < 1) throw std::invalid_argument("polynomial driver needs G >= 1");
    if (!(T > 0.0)) throw std::invalid_argument("polynomial driver needs T > 0");
    DriverPath p;
    p.real_flag = real_flag;
    p.times.resize(static_cast<size_t>(G) + 1);
    p.values.resize(static_cast<size_t>(G) + 1);
    for (int j = 0; j <= G; ++j) {
        double t = T * static_cast<double>(j) / static_cast<double>(G);
        // Horner
        Complex v(0.0, 0.0);
        for (size_t k = coeffs.size(); k-- > 0;) v = v * t + coeffs[k];
        if (real_flag) v = Complex(v.real(), 0.0);
        p.times[static_cast<size_t>(j)] = t;
        p.values[static_cast<size_t>(j)] = v;
    }
    p.times[0] = 0.0;
    p.validate();
    return p;
}

namespace {

// Refined partition of [s,t]: path breakpoints inside the interval plus the
// endpoints, each resulting segment split into `refine` equal pieces.
std::vector<double> refined_nodes(const std::vector<double>& times, double s, double t,
                                  int refine) {
    std::vector<double> cuts;
    cuts.push_back(s);
    for (double tb : times)
        if (tb > s && tb < t) cuts.push_back(tb);
    cuts.push_back(t);
    std::vector<double> u;
    u.reserve((cuts.size() - 1) * static_cast<size_t>(refine) + 1);
    u.push_back(cuts[0]);
    for (size_t i = 0; i + 1 < cuts.size(); ++i) {
        for (int r = 1; r <= refine; ++r) {
            double frac = static_cast<double>(r) / static_cast<double>(refine);
            u.push_back(cuts[i] + frac * (cuts[i + 1] - cuts[i]));
        }
        u.back() = cuts[i + 1]; // avoid rounding drift at breakpoints
    }
    return u;
}

} // namespace

Complex stieltjes_integral(const std::function<Complex(double)>& phi, const DriverPath& x,
                           double s, double t, int refine) {
    if (refine < 1) throw std::invalid_argument("refine must be >= 1");
    if (s == t) return Complex(0.0, 0.0);
    if (s > t) return -stieltjes_integral(phi, x, t, s, refine);
    std::vector<double> u = refined_nodes(x.times, s, t, refine);
    Complex acc(0.0, 0.0);
    Complex phi_lo = phi(u[0]);
    Complex x_lo = x.value_at(u[0]);
    for (size_t i = 0; i + 1 < u.size(); ++i) {
        Complex phi_hi = phi(u[i + 1]);
        Complex x_hi = x.value_at(u[i + 1]);
        acc += 0.5 * (phi_lo + phi_hi) * (x_hi - x_lo);
        phi_lo = phi_hi;
        x_lo = x_hi;
    }
    return acc;
}

Complex stieltjes_integral(const std::vector<Complex>& phi_samples, const DriverPath& x,
                           double s, double t, int refine) {
    if (phi_samples.size() != x.times.size())
        throw std::invalid_argument("integrand samples must match the path grid");
    DriverPath tmp; // reuse path interpolation for the integrand
    tmp.times = x.times;
    tmp.values = phi_samples;
    auto phi = [&tmp](double tt) { return tmp.value_at(tt); };
    return stieltjes_integral(phi, x, s, t, refine);
}

namespace {

std::vector<Complex> cumulative_trapezoid(const std::vector<double>& times,
                                          const std::vector<Complex>& f) {
    std::vector<Complex> out(f.size());
    out[0] = Complex(0.0, 0.0);
    for (size_t i = 0; i + 1 < f.size(); ++i)
        out[i + 1] = out[i] + 0.5 * (f[i] + f[i + 1]) * (times[i + 1] - times[i]);
    return out;
}

} // namespace

DriverSet herglotz_to_drivers(const DriverPath& a0, const std::vector<DriverPath>& a,
                              const std::vector<DriverPath>& b) {
    a0.validate();
    if (a.size() != b.size())
        throw std::invalid_argument("herglotz coefficient lists must have equal length");
    for (const DriverPath& p : a) {
        p.validate();
        if (p.times != a0.times) throw std::invalid_argument("herglotz paths must share one grid");
    }
    for (const DriverPath& p : b) {
        p.validate();
        if (p.times != a0.times) throw std::invalid_argument("herglotz paths must share one grid");
    }
    DriverSet ds;
    ds.x0.times = a0.times;
    ds.x0.real_flag = true;
    {
        std::vector<Complex> ia = cumulative_trapezoid(a0.times, a0.values);
        ds.x0.values.resize(ia.size());
        for (size_t i = 0; i < ia.size(); ++i) ds.x0.values[i] = Complex(ia[i].real(), 0.0);
    }
    ds.xs.resize(a.size());
    for (size_t k = 0; k < a.size(); ++k) {
        std::vector<Complex> ia = cumulative_trapezoid(a0.times, a[k].values);
        std::vector<Complex> ib = cumulative_trapezoid(a0.times, b[k].values);
        DriverPath& p = ds.xs[k];
        p.times = a0.times;
        p.values.resize(ia.size());
        for (size_t i = 0; i < ia.size(); ++i)
            p.values[i] = ia[i] - Complex(0.0, 1.0) * ib[i];
    }
    ds.T = a0.horizon();
    ds.validate();
    return ds;
}

double validate_convergence(const DriverSet& ds, double r) {
    if (!(r > 0.0 && r < 1.0)) throw std::invalid_argument("convergence radius must be in (0,1)");
    double sum = 0.0;
    double rn = 1.0;
    for (int n = 1; n <= ds.K(); ++n) {
        rn *= r;
        sum += static_cast<double>(n) * ds.xs[static_cast<size_t>(n - 1)].total_variation() * rn;
    }
    return sum;
}

QuadGrid::QuadGrid(const DriverSet& ds, double s, double t, int refine) {
    if (refine < 1) throw std::invalid_argument("refine must be >= 1");
    if (s > t) throw std::invalid_argument("quad grid needs s <= t");
    K = ds.K();
    if (s == t) {
        u = {s, t};
    } else {
        u = refined_nodes(ds.x0.times, s, t, refine);
    }
    size_t n = u.size();
    x0.resize(n);
    for (size_t j = 0; j < n; ++j) x0[j] = ds.x0.value_at(u[j]).real();
    xval.assign(static_cast<size_t>(K), std::vector<Complex>(n));
    for (int d = 1; d <= K; ++d) {
        const DriverPath* p = ds.driver(d);
        for (size_t j = 0; j < n; ++j) xval[static_cast<size_t>(d - 1)][j] = p->value_at(u[j]);
    }
}

} // namespace lk
