#pragma once

#include <vector>

#include "lk/common.hpp"
#include "lk/drivers.hpp"
#include "lk/series.hpp"
#include "lk/words.hpp"

namespace lk {

// Laurent series in one variable whose coefficients are word combinations.
// Degrees run low .. low+coeffs.size()-1. Words heavier than weight_cap are
// dropped during multiplication; callers size the cap to the output order
// they need, so the drop only ever hits degrees beyond that order.
struct LaurentWordSeries {
    int low = 0;
    std::vector<WordSeries> coeffs;
    int weight_cap = 1 << 20;

    LaurentWordSeries() = default;
    LaurentWordSeries(int lo, int hi, int cap) : low(lo), weight_cap(cap) {
        coeffs.resize(static_cast<size_t>(hi - lo + 1));
    }
    int high() const { return low + static_cast<int>(coeffs.size()) - 1; }
    bool has(int degree) const { return degree >= low && degree <= high(); }
    const WordSeries& at(int degree) const { return coeffs[static_cast<size_t>(degree - low)]; }
    WordSeries& ref(int degree) { return coeffs[static_cast<size_t>(degree - low)]; }
};

// Single term c * z^degree * word.
LaurentWordSeries lws_monomial(int degree, const Word& w, Complex c, int cap);

// The generator L_k = -z^{k+1} d/dz for k <= -1, applied degree-wise:
// z^m -> -m z^{m+k}. The window shifts by k.
LaurentWordSeries witt_apply(int k, const LaurentWordSeries& a);

// Right action of a word: the letters act as successive generators (stored
// leftmost letter first) and the word itself multiplies every coefficient
// word from the right.
LaurentWordSeries word_action(const LaurentWordSeries& f, const Word& w);

// Product of partial-sum complements from the coefficient formula:
// for a composition (i1..ip) of n, the product over r < p of (n - (i1+..+ir) + 1).
long long composition_weight_tilde(int n, const std::vector<int>& comp);

// Two-sided weight w(r,s): cascade product r(r+i1)(r+i1+i2)... for the first
// composition times the same with s for the second. Empty compositions give 1.
long long composition_weight(int r, const std::vector<int>& comp_i, int s,
                             const std::vector<int>& comp_j);

// Taylor solution through the word-action residue formula. Route A builds
// z^{-1} acted by the signature words, reads the residue pairing degree by
// degree, and integrates; route B is the closed-form coefficient sum
// (taylor_explicit). Both are computed and compared; disagreement beyond
// 1e-9 relative throws ConsistencyError. Returns f_t as a Taylor series
// (coefficient of z^{n+1} is e^{x0} c_n, order N+1).
TruncatedTaylor sol_by_witt(const DriverSet& ds, double t, int N, int refine = 8);

// Coefficient of z^{-m} of the graph operator applied to u^n, for m=1..M,
// assembled from the residue decomposition: the leading single-letter term
// plus all two-sided composition/shuffle blocks, with cascade weights read
// off word_action and the trailing letter r+s integrating innermost.
// Contract: entry m equals n * b_{-n,-m}(t).
std::vector<Complex> afh_by_signature(const DriverSet& ds, double t, int n, int M,
                                      int refine = 8);

} // namespace lk
