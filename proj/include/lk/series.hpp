#pragma once

#include <vector>

#include "lk/common.hpp"

namespace lk {

// Truncated Taylor series sum_{j=0..N} c_j z^j. Arithmetic is exact polynomial
// arithmetic modulo z^{N+1}; mixed orders truncate to the smaller order.
struct TruncatedTaylor {
    std::vector<Complex> coeffs; // index j = coefficient of z^j, size N+1

    TruncatedTaylor() = default;
    explicit TruncatedTaylor(int order) : coeffs(order + 1, Complex(0.0)) {}
    TruncatedTaylor(int order, Complex c0) : coeffs(order + 1, Complex(0.0)) { coeffs[0] = c0; }

    int order() const { return static_cast<int>(coeffs.size()) - 1; }
    Complex at(int j) const { return (j >= 0 && j <= order()) ? coeffs[j] : Complex(0.0); }

    static TruncatedTaylor identity(int order); // the series z
};

enum class SeriesOp { add, mul, scale };

TruncatedTaylor series_arith(const TruncatedTaylor& a, const TruncatedTaylor& b, SeriesOp op);
TruncatedTaylor series_add(const TruncatedTaylor& a, const TruncatedTaylor& b);
TruncatedTaylor series_mul(const TruncatedTaylor& a, const TruncatedTaylor& b);
TruncatedTaylor series_scale(const TruncatedTaylor& a, Complex s);

// log(a) for a with nonzero constant term: log(c0) + log(a/c0), principal branch.
TruncatedTaylor log_series(const TruncatedTaylor& a);

// exp(a), c0 arbitrary.
TruncatedTaylor exp_series(const TruncatedTaylor& a);

// Compositional inverse g of a (a(g(z)) = z mod z^{N+1}); needs a(0)=0, a'(0)!=0.
// Recursive coefficient matching; fine for the orders used here (N <= 32).
TruncatedTaylor revert(const TruncatedTaylor& a);

// a(b(z)) truncated, b(0) must be 0.
TruncatedTaylor compose(const TruncatedTaylor& a, const TruncatedTaylor& b);

// Integer power of a series (n >= 0), truncated.
TruncatedTaylor series_pow(const TruncatedTaylor& a, int n);

// Truncated Laurent series sum_{j=low..high} c_j z^j.
struct TruncatedLaurent {
    int low = 0;
    std::vector<Complex> coeffs; // coeffs[k] = coefficient of z^{low+k}

    TruncatedLaurent() = default;
    TruncatedLaurent(int low_, int high_) : low(low_), coeffs(high_ - low_ + 1, Complex(0.0)) {}

    int high() const { return low + static_cast<int>(coeffs.size()) - 1; }
    Complex at(int deg) const {
        int k = deg - low;
        return (k >= 0 && k < static_cast<int>(coeffs.size())) ? coeffs[k] : Complex(0.0);
    }
    Complex& ref(int deg) { return coeffs.at(deg - low); }
};

// Coefficient of z^{-1}. Degree -1 must lie inside the stored window.
Complex residue(const TruncatedLaurent& a);

// Keep degrees <= 0 (principal plus constant part), zero the rest.
TruncatedLaurent project_nonpositive(const TruncatedLaurent& a);

// Bivariate truncation sum_{0 <= m,n <= M} d_{m,n} z^m zeta^n.
struct BivariateTruncated {
    int order = 0;
    std::vector<Complex> d; // row-major, d[m*(order+1)+n]

    BivariateTruncated() = default;
    explicit BivariateTruncated(int order_)
        : order(order_), d((order_ + 1) * (size_t)(order_ + 1), Complex(0.0)) {}

    Complex at(int m, int n) const { return d[(size_t)m * (order + 1) + n]; }
    Complex& ref(int m, int n) { return d[(size_t)m * (order + 1) + n]; }
};

// (f(z) - f(zeta)) / (z - zeta) as a bivariate series: entry (m,n) is the
// coefficient a_{m+n+1} of z^{m+n+1} in f. Needs f(0)=0 and f'(0)!=0.
BivariateTruncated divided_difference(const TruncatedTaylor& f, int order);

BivariateTruncated bivariate_mul(const BivariateTruncated& a, const BivariateTruncated& b);

// log of a bivariate series with nonzero constant term.
BivariateTruncated bivariate_log(const BivariateTruncated& a);

} // namespace lk
