#include "lk/words.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lk {

std::vector<std::vector<int>> compositions(int n) {
    if (n < 0) throw std::invalid_argument("compositions of a negative integer");
    if (n == 0) return {{}};
    // bitmask over the n-1 possible cut positions
    std::vector<std::vector<int>> out;
    out.reserve(size_t{1} << (n - 1));
    for (unsigned long mask = 0; mask < (1ul << (n - 1)); ++mask) {
        std::vector<int> comp;
        int run = 1;
        for (int pos = 0; pos < n - 1; ++pos) {
            if (mask & (1ul << pos)) {
                comp.push_back(run);
                run = 1;
            } else {
                ++run;
            }
        }
        comp.push_back(run);
        out.push_back(std::move(comp));
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        if (a.size() != b.size()) return a.size() < b.size();
        return a < b;
    });
    return out;
}

namespace {

void shuffle_rec(const std::vector<int>& u, size_t iu, const std::vector<int>& v, size_t iv,
                 std::vector<int>& acc, WordSeries& out) {
    if (iu == u.size() && iv == v.size()) {
        out.add(Word(acc), Complex(1.0, 0.0));
        return;
    }
    if (iu < u.size()) {
        acc.push_back(u[iu]);
        shuffle_rec(u, iu + 1, v, iv, acc, out);
        acc.pop_back();
    }
    if (iv < v.size()) {
        acc.push_back(v[iv]);
        shuffle_rec(u, iu, v, iv + 1, acc, out);
        acc.pop_back();
    }
}

} // namespace

WordSeries shuffle(const Word& u, const Word& v) {
    WordSeries out;
    std::vector<int> acc;
    acc.reserve(u.letters.size() + v.letters.size());
    shuffle_rec(u.letters, 0, v.letters, 0, acc, out);
    return out;
}

WordSeries s_element_degree(int n) {
    if (n < 0) throw std::invalid_argument("negative signature degree");
    WordSeries out;
    for (const auto& comp : compositions(n)) out.add(Word(comp), Complex(1.0, 0.0));
    return out;
}

std::vector<WordSeries> s_element(int W) {
    if (W < 0) throw std::invalid_argument("negative weight cap");
    std::vector<WordSeries> out;
    out.reserve(static_cast<size_t>(W) + 1);
    for (int n = 0; n <= W; ++n) out.push_back(s_element_degree(n));
    return out;
}

Complex iterated_integral(const Word& w, const QuadGrid& grid) {
    for (int a : w.letters) {
        if (a < 1) throw std::invalid_argument("word letter must be >= 1");
        if (a > grid.K) return Complex(0.0, 0.0); // zero driver
    }
    size_t n = grid.nodes();
    std::vector<Complex> cur(n, Complex(1.0, 0.0));
    std::vector<Complex> next(n);
    // rightmost letter integrates first
    for (size_t li = w.letters.size(); li-- > 0;) {
        int a = w.letters[li];
        const std::vector<Complex>& xv = grid.xval[static_cast<size_t>(a - 1)];
        Complex phi_lo = std::exp(-static_cast<double>(a) * grid.x0[0]) * cur[0];
        next[0] = Complex(0.0, 0.0);
        for (size_t j = 0; j + 1 < n; ++j) {
            Complex phi_hi = std::exp(-static_cast<double>(a) * grid.x0[j + 1]) * cur[j + 1];
            next[j + 1] = next[j] + 0.5 * (phi_lo + phi_hi) * (xv[j + 1] - xv[j]);
            phi_lo = phi_hi;
        }
        cur.swap(next);
    }
    return cur.back();
}

Complex iterated_integral(const Word& w, const DriverSet& ds, double s, double t, int refine) {
    if (s < 0.0 || t > ds.T || s > t) throw std::invalid_argument("interval outside [0,T]");
    QuadGrid grid(ds, s, t, refine);
    return iterated_integral(w, grid);
}

Complex apply_integral(const WordSeries& ws, const QuadGrid& grid) {
    Complex acc(0.0, 0.0);
    for (const auto& [word, coeff] : ws.terms) acc += coeff * iterated_integral(word, grid);
    return acc;
}

Complex apply_integral(const WordSeries& ws, const DriverSet& ds, double s, double t,
                       int refine) {
    if (s < 0.0 || t > ds.T || s > t) throw std::invalid_argument("interval outside [0,T]");
    QuadGrid grid(ds, s, t, refine);
    return apply_integral(ws, grid);
}

Complex brute_force_oracle(const Word& w, const DriverSet& ds, double s, double t, int steps) {
    int p = w.length();
    if (p > 3) throw std::invalid_argument("oracle supports words of length <= 3 only");
    if (s < 0.0 || t > ds.T || s > t) throw std::invalid_argument("interval outside [0,T]");
    if (p == 0) return Complex(1.0, 0.0);
    if (s == t) return Complex(0.0, 0.0);
    for (int a : w.letters)
        if (a > ds.K()) return Complex(0.0, 0.0);

    // Cells aligned with driver segments so every cell sees a linear path;
    // within a cell the only approximation is the midpoint x0 sample.
    std::vector<double> cuts;
    cuts.push_back(s);
    for (double tb : ds.x0.times)
        if (tb > s && tb < t) cuts.push_back(tb);
    cuts.push_back(t);
    std::vector<double> lo, hi;
    for (size_t i = 0; i + 1 < cuts.size(); ++i) {
        double len = cuts[i + 1] - cuts[i];
        int m = std::max(1, static_cast<int>(std::lround(steps * len / (t - s))));
        for (int k = 0; k < m; ++k) {
            lo.push_back(cuts[i] + len * k / m);
            hi.push_back(cuts[i] + len * (k + 1) / m);
        }
        hi.back() = cuts[i + 1];
    }
    size_t nc = lo.size();

    // per-cell factor for letter a: exp(-a x0(mid)) * (x_a(hi)-x_a(lo))
    auto cell_terms = [&](int a) {
        std::vector<Complex> tm(nc);
        for (size_t k = 0; k < nc; ++k) {
            double mid = 0.5 * (lo[k] + hi[k]);
            double wgt = std::exp(-static_cast<double>(a) * ds.x0.value_at(mid).real());
            const DriverPath* path = ds.driver(a);
            tm[k] = wgt * (path->value_at(hi[k]) - path->value_at(lo[k]));
        }
        return tm;
    };

    // stored leftmost letter is the latest time, so letters reversed give the
    // inner-to-outer order matching ascending cell indices
    std::vector<std::vector<Complex>> T1;
    for (int r = p - 1; r >= 0; --r) T1.push_back(cell_terms(w.letters[static_cast<size_t>(r)]));

    Complex acc(0.0, 0.0);
    if (p == 1) {
        for (size_t k = 0; k < nc; ++k) acc += T1[0][k];
    } else if (p == 2) {
        for (size_t k2 = 0; k2 < nc; ++k2) {
            Complex outer = T1[1][k2];
            for (size_t k1 = 0; k1 < k2; ++k1) acc += outer * T1[0][k1];
            acc += 0.5 * outer * T1[0][k2];
        }
    } else {
        for (size_t k3 = 0; k3 < nc; ++k3) {
            Complex t3 = T1[2][k3];
            for (size_t k2 = 0; k2 <= k3; ++k2) {
                Complex t23 = t3 * T1[1][k2];
                for (size_t k1 = 0; k1 <= k2; ++k1) {
                    // 1/g! per group of coincident cells
                    double f;
                    if (k1 == k2 && k2 == k3) f = 1.0 / 6.0;
                    else if (k1 == k2 || k2 == k3) f = 0.5;
                    else f = 1.0;
                    acc += f * t23 * T1[0][k1];
                }
            }
        }
    }
    return acc;
}

} // namespace lk
