#include "lk/witt.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "lk/solver.hpp"

namespace lk {

LaurentWordSeries lws_monomial(int degree, const Word& w, Complex c, int cap) {
    LaurentWordSeries out(degree, degree, cap);
    out.ref(degree).add(w, c);
    return out;
}

LaurentWordSeries witt_apply(int k, const LaurentWordSeries& a) {
    if (k > -1) throw std::invalid_argument("witt_apply expects a generator index <= -1");
    LaurentWordSeries out(a.low + k, a.high() + k, a.weight_cap);
    for (int m = a.low; m <= a.high(); ++m) {
        const WordSeries& ws = a.at(m);
        if (ws.terms.empty()) continue;
        double factor = -static_cast<double>(m);
        if (factor == 0.0) continue;
        WordSeries& dst = out.ref(m + k);
        for (const auto& [word, c] : ws.terms) dst.add(word, factor * c);
    }
    return out;
}

LaurentWordSeries word_action(const LaurentWordSeries& f, const Word& w) {
    LaurentWordSeries cur = f;
    for (int a : w.letters) cur = witt_apply(-a, cur);
    LaurentWordSeries out(cur.low, cur.high(), cur.weight_cap);
    for (int m = cur.low; m <= cur.high(); ++m) {
        WordSeries& dst = out.ref(m);
        for (const auto& [word, c] : cur.at(m).terms) {
            Word joined = word.concat(w);
            if (joined.weight() > out.weight_cap) continue;
            dst.add(joined, c);
        }
    }
    return out;
}

long long composition_weight_tilde(int n, const std::vector<int>& comp) {
    int sum = std::accumulate(comp.begin(), comp.end(), 0);
    if (sum != n) throw std::invalid_argument("composition does not sum to n");
    long long w = 1;
    int prefix = 0;
    for (size_t r = 0; r + 1 < comp.size(); ++r) {
        prefix += comp[r];
        w *= static_cast<long long>(n - prefix + 1);
    }
    return w;
}

namespace {

long long cascade(int r, const std::vector<int>& comp) {
    long long w = 1;
    long long level = r;
    for (size_t k = 0; k < comp.size(); ++k) {
        w *= level;
        level += comp[k];
    }
    return w;
}

} // namespace

long long composition_weight(int r, const std::vector<int>& comp_i, int s,
                             const std::vector<int>& comp_j) {
    if (r < 1 || s < 1) throw std::invalid_argument("leading indices must be >= 1");
    return cascade(r, comp_i) * cascade(s, comp_j);
}

TruncatedTaylor sol_by_witt(const DriverSet& ds, double t, int N, int refine) {
    if (N < 1) throw std::invalid_argument("order must be >= 1");
    if (t < 0.0 || t > ds.T) throw std::invalid_argument("t outside [0,T]");
    double x0t = ds.x0.value_at(t).real();
    QuadGrid grid(ds, 0.0, t, refine);

    // route A: act on z^{-1} by every signature word, collect the residue
    // pairing degree -(n+1) <-> z^{n+1}
    LaurentWordSeries base = lws_monomial(-1, Word(), Complex(1.0, 0.0), N);
    LaurentWordSeries total(-(N + 1) - 1, 0, N);
    for (int n = 0; n <= N; ++n) {
        for (const auto& [word, c] : s_element_degree(n).terms) {
            LaurentWordSeries acted = word_action(base, word);
            // The generator chain applies the innermost (earliest) letter
            // first while stored words read outermost first, so the action
            // coefficient of a word pairs with the reversed word's integral.
            for (int d = acted.low; d <= acted.high(); ++d) {
                if (!total.has(d)) continue;
                for (const auto& [wrd, cc] : acted.at(d).terms)
                    total.ref(d).add(wrd.reversed(), c * cc);
            }
        }
    }
    TruncatedTaylor f;
    f.coeffs.assign(static_cast<size_t>(N) + 2, Complex(0.0, 0.0));
    for (int n = 0; n <= N; ++n) {
        Complex val = apply_integral(total.at(-(n + 1)), grid);
        f.coeffs[static_cast<size_t>(n + 1)] = std::exp(static_cast<double>(n + 1) * x0t) * val;
    }

    // route B: closed-form coefficient sums, independent code path
    std::vector<Complex> c = taylor_explicit(ds, t, N, refine);
    Complex C = std::exp(Complex(x0t, 0.0));
    for (int n = 1; n <= N; ++n) {
        Complex a = f.coeffs[static_cast<size_t>(n + 1)];
        Complex b = C * c[static_cast<size_t>(n - 1)];
        double scale = std::max({1.0, std::abs(a), std::abs(b)});
        if (std::abs(a - b) / scale > 1e-9)
            throw ConsistencyError("sol_by_witt: residue route disagrees with coefficient route");
    }
    return f;
}

std::vector<Complex> afh_by_signature(const DriverSet& ds, double t, int n, int M, int refine) {
    if (n < 1 || M < 1 || n > M) throw std::invalid_argument("need 1 <= n <= M");
    if (t < 0.0 || t > ds.T) throw std::invalid_argument("t outside [0,T]");
    double x0t = ds.x0.value_at(t).real();
    QuadGrid grid(ds, 0.0, t, refine);

    std::vector<Complex> result(static_cast<size_t>(M));
    for (int m = 1; m <= M; ++m) {
        WordSeries acc;
        for (int mp = 0; mp < m; ++mp) {
            int r = m - mp;
            for (int np = 0; np < n; ++np) {
                int s = n - np;
                for (const auto& u : compositions(mp)) {
                    // cascade weight read off the generator chain itself
                    Word uw{u};
                    LaurentWordSeries lu =
                        word_action(lws_monomial(-r, Word(), Complex(1.0, 0.0), m + n), uw);
                    Complex cu = lu.at(-m).terms.count(uw) ? lu.at(-m).terms.at(uw)
                                                           : Complex(0.0, 0.0);
                    for (const auto& v : compositions(np)) {
                        Word vw{v};
                        LaurentWordSeries lv = word_action(
                            lws_monomial(-s, Word(), Complex(1.0, 0.0), m + n), vw);
                        Complex cv = lv.at(-n).terms.count(vw) ? lv.at(-n).terms.at(vw)
                                                               : Complex(0.0, 0.0);
                        // the displayed words read earliest-first; flip into
                        // stored order before shuffling, letter r+s innermost
                        WordSeries sh = shuffle(uw.reversed(), vw.reversed());
                        for (const auto& [wrd, mult] : sh.terms)
                            acc.add(wrd.append(r + s), cu * cv * mult);
                    }
                }
            }
        }
        Complex val = apply_integral(acc, grid);
        result[static_cast<size_t>(m - 1)] =
            -static_cast<double>(n) * std::exp(static_cast<double>(m + n) * x0t) * val;
    }
    return result;
}

} // namespace lk
