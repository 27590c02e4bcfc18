#include "lk/series.hpp"

#include <algorithm>
#include <cmath>

namespace lk {

TruncatedTaylor TruncatedTaylor::identity(int order) {
    TruncatedTaylor z(order);
    if (order >= 1) z.coeffs[1] = 1.0;
    return z;
}

static void check_finite(const TruncatedTaylor& a, const char* who) {
    for (Complex c : a.coeffs)
        if (!is_finite(c)) throw std::invalid_argument(std::string(who) + ": non-finite coefficient");
}

TruncatedTaylor series_add(const TruncatedTaylor& a, const TruncatedTaylor& b) {
    int n = std::min(a.order(), b.order());
    TruncatedTaylor r(n);
    for (int j = 0; j <= n; ++j) r.coeffs[j] = a.coeffs[j] + b.coeffs[j];
    return r;
}

TruncatedTaylor series_mul(const TruncatedTaylor& a, const TruncatedTaylor& b) {
    int n = std::min(a.order(), b.order());
    TruncatedTaylor r(n);
    for (int i = 0; i <= n; ++i) {
        if (a.coeffs[i] == Complex(0.0)) continue;
        for (int j = 0; i + j <= n; ++j)
            r.coeffs[i + j] += a.coeffs[i] * b.coeffs[j];
    }
    return r;
}

TruncatedTaylor series_scale(const TruncatedTaylor& a, Complex s) {
    TruncatedTaylor r = a;
    for (Complex& c : r.coeffs) c *= s;
    return r;
}

TruncatedTaylor series_arith(const TruncatedTaylor& a, const TruncatedTaylor& b, SeriesOp op) {
    check_finite(a, "series_arith");
    check_finite(b, "series_arith");
    switch (op) {
        case SeriesOp::add: return series_add(a, b);
        case SeriesOp::mul: return series_mul(a, b);
        case SeriesOp::scale: return series_scale(a, b.at(0));
    }
    throw std::invalid_argument("series_arith: unknown op");
}

TruncatedTaylor exp_series(const TruncatedTaylor& a) {
    // Solve r' = a' r with r(0) = exp(a0): j r_j = sum_{k=1..j} k a_k r_{j-k}.
    int n = a.order();
    TruncatedTaylor r(n);
    r.coeffs[0] = std::exp(a.coeffs[0]);
    for (int j = 1; j <= n; ++j) {
        Complex s = 0.0;
        for (int k = 1; k <= j; ++k)
            s += static_cast<double>(k) * a.coeffs[k] * r.coeffs[j - k];
        r.coeffs[j] = s / static_cast<double>(j);
    }
    return r;
}

TruncatedTaylor log_series(const TruncatedTaylor& a) {
    int n = a.order();
    Complex c0 = a.coeffs[0];
    if (c0 == Complex(0.0)) throw std::invalid_argument("log_series: zero constant term");
    // r' = a'/a, r(0) = log c0: j r_j = j a_j/c0 - sum_{k=1..j-1} k r_k a_{j-k}/c0
    TruncatedTaylor r(n);
    r.coeffs[0] = std::log(c0);
    for (int j = 1; j <= n; ++j) {
        Complex s = static_cast<double>(j) * a.coeffs[j];
        for (int k = 1; k < j; ++k)
            s -= static_cast<double>(k) * r.coeffs[k] * a.coeffs[j - k];
        r.coeffs[j] = s / (static_cast<double>(j) * c0);
    }
    return r;
}

TruncatedTaylor compose(const TruncatedTaylor& a, const TruncatedTaylor& b) {
    if (b.at(0) != Complex(0.0)) throw std::invalid_argument("compose: inner series must vanish at 0");
    int n = std::min(a.order(), b.order());
    // Horner over the outer coefficients: r = a_n; r = r*b + a_{n-1}; ...
    TruncatedTaylor r(n);
    for (int j = n; j >= 0; --j) {
        r = series_mul(r, b);
        r.coeffs[0] += a.coeffs[j];
    }
    return r;
}

TruncatedTaylor series_pow(const TruncatedTaylor& a, int n) {
    if (n < 0) throw std::invalid_argument("series_pow: negative exponent");
    TruncatedTaylor r(a.order(), Complex(1.0));
    for (int i = 0; i < n; ++i) r = series_mul(r, a);
    return r;
}

TruncatedTaylor revert(const TruncatedTaylor& a) {
    int n = a.order();
    if (a.at(0) != Complex(0.0)) throw std::invalid_argument("revert: constant term must be 0");
    Complex a1 = a.at(1);
    if (a1 == Complex(0.0)) throw std::invalid_argument("revert: linear coefficient must be nonzero");
    // Match coefficients of a(g(z)) = z degree by degree. When g is known up to
    // degree j-1, the degree-j coefficient of a(g) is a1*g_j plus terms that only
    // involve lower-order g coefficients, so each g_j solves a linear equation.
    TruncatedTaylor g(n);
    if (n >= 1) g.coeffs[1] = 1.0 / a1;
    for (int j = 2; j <= n; ++j) {
        TruncatedTaylor comp = compose(a, g); // g_j currently 0
        g.coeffs[j] = -comp.coeffs[j] / a1;
    }
    return g;
}

Complex residue(const TruncatedLaurent& a) {
    if (a.low > -1 || a.high() < -1)
        throw std::invalid_argument("residue: degree -1 outside stored window");
    return a.at(-1);
}

TruncatedLaurent project_nonpositive(const TruncatedLaurent& a) {
    TruncatedLaurent r = a;
    for (int deg = std::max(1, a.low); deg <= a.high(); ++deg) r.ref(deg) = 0.0;
    return r;
}

BivariateTruncated divided_difference(const TruncatedTaylor& f, int order) {
    if (f.at(0) != Complex(0.0)) throw std::invalid_argument("divided_difference: f(0) != 0");
    if (f.at(1) == Complex(0.0)) throw std::invalid_argument("divided_difference: f'(0) = 0");
    // (z^j - zeta^j)/(z - zeta) = sum_{m+n=j-1} z^m zeta^n, so entry (m,n) is
    // the z^{m+n+1} coefficient of f.
    BivariateTruncated d(order);
    for (int m = 0; m <= order; ++m)
        for (int n = 0; n <= order; ++n)
            d.ref(m, n) = f.at(m + n + 1);
    return d;
}

BivariateTruncated bivariate_mul(const BivariateTruncated& a, const BivariateTruncated& b) {
    int M = std::min(a.order, b.order);
    BivariateTruncated r(M);
    for (int m1 = 0; m1 <= M; ++m1)
        for (int n1 = 0; n1 <= M; ++n1) {
            Complex c = a.at(m1, n1);
            if (c == Complex(0.0)) continue;
            for (int m2 = 0; m1 + m2 <= M; ++m2)
                for (int n2 = 0; n1 + n2 <= M; ++n2)
                    r.ref(m1 + m2, n1 + n2) += c * b.at(m2, n2);
        }
    return r;
}

BivariateTruncated bivariate_log(const BivariateTruncated& a) {
    Complex c0 = a.at(0, 0);
    if (c0 == Complex(0.0)) throw std::invalid_argument("bivariate_log: zero constant term");
    int M = a.order;
    // log(c0) + log(1+u) with u = a/c0 - 1. u has no constant term, so u^k is
    // zero on the (M,M) window once k > 2M.
    BivariateTruncated u(M);
    for (int m = 0; m <= M; ++m)
        for (int n = 0; n <= M; ++n)
            u.ref(m, n) = a.at(m, n) / c0 - ((m == 0 && n == 0) ? Complex(1.0) : Complex(0.0));
    BivariateTruncated r(M);
    r.ref(0, 0) = std::log(c0);
    BivariateTruncated upow = u;
    for (int k = 1; k <= 2 * M; ++k) {
        double sign = (k % 2 == 1) ? 1.0 : -1.0;
        for (int m = 0; m <= M; ++m)
            for (int n = 0; n <= M; ++n)
                r.ref(m, n) += sign / static_cast<double>(k) * upow.at(m, n);
        if (k < 2 * M) upow = bivariate_mul(upow, u);
    }
    return r;
}

} // namespace lk
