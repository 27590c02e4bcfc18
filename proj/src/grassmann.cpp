#include "lk/grassmann.hpp"

#include <cmath>
#include <cstdint>
#include <cstring>
#include <stdexcept>

namespace lk {

// Clear the low 6 mantissa bits of each component. After this, multiplying by
// any integer up to 64 is exact, so m*(n*v) and n*(m*v) round the identical
// real number and compare equal bitwise. Relative perturbation is 2^-47.
double quantize_component(double x) {
    if (!std::isfinite(x)) return x;
    std::uint64_t bits;
    std::memcpy(&bits, &x, sizeof bits);
    bits &= ~std::uint64_t{0x3F};
    std::memcpy(&x, &bits, sizeof x);
    return x;
}

Complex quantize(Complex v) {
    return Complex(quantize_component(v.real()), quantize_component(v.imag()));
}

namespace {

// e_j coefficients of (f(z)/z)^{-n} via exp(-n log(f/z))
TruncatedTaylor inv_power_of_f_over_z(const TruncatedTaylor& f, int n) {
    int ord = f.order() - 1;
    TruncatedTaylor s(ord);
    for (int j = 0; j <= ord; ++j) s.coeffs[static_cast<size_t>(j)] = f.at(j + 1);
    TruncatedTaylor ls = log_series(s);
    return exp_series(series_scale(ls, Complex(-static_cast<double>(n), 0.0)));
}

} // namespace

TruncatedLaurent faber_from_f(const TruncatedTaylor& f, int n) {
    if (n < 1) throw std::invalid_argument("faber index must be >= 1");
    if (f.order() < n + 1) throw std::invalid_argument("series order too small for faber index");
    TruncatedTaylor g = revert(f);
    // (g(w)/w)^{-n} gives g(w)^{-n} = w^{-n} sum_j e_j w^j
    TruncatedTaylor e = inv_power_of_f_over_z(g, n);
    TruncatedLaurent full(-n, e.order() - n);
    for (int j = 0; j <= e.order(); ++j) full.ref(-n + j) = e.at(j);
    TruncatedLaurent proj = project_nonpositive(full);
    TruncatedLaurent out(-n, 0);
    for (int d = -n; d <= 0; ++d) out.ref(d) = proj.at(d);
    return out;
}

GrunskyMatrix grunsky_from_f(const TruncatedTaylor& f, int M) {
    if (M < 1) throw std::invalid_argument("order must be >= 1");
    if (f.order() < 2 * M + 1)
        throw std::invalid_argument("series order too small for grunsky window");
    BivariateTruncated L = bivariate_log(divided_difference(f, M));
    GrunskyMatrix g;
    g.M = M;
    g.b.assign(static_cast<size_t>(M), std::vector<Complex>(static_cast<size_t>(M)));
    for (int m = 1; m <= M; ++m)
        for (int n = m; n <= M; ++n) {
            Complex v = -L.at(m, n);
            g.b[static_cast<size_t>(m - 1)][static_cast<size_t>(n - 1)] = v;
            g.b[static_cast<size_t>(n - 1)][static_cast<size_t>(m - 1)] = v;
        }
    g.b0.resize(static_cast<size_t>(M));
    for (int m = 1; m <= M; ++m) g.b0[static_cast<size_t>(m - 1)] = -L.at(m, 0);
    return g;
}

TruncatedLaurent faber_compose(const TruncatedTaylor& f, const TruncatedLaurent& Qn, int n) {
    int ord = f.order() - 1;
    // powers of 1/f: (1/f)^k = z^{-k} (f/z)^{-k}
    TruncatedLaurent out(-n, ord - n);
    for (int k = 0; k <= n; ++k) {
        Complex q = Qn.at(-k);
        if (q == Complex(0.0)) continue;
        if (k == 0) {
            out.ref(0) += q;
            continue;
        }
        TruncatedTaylor e = inv_power_of_f_over_z(f, k);
        for (int j = 0; j <= e.order() && -k + j <= out.high(); ++j)
            out.ref(-k + j) += q * e.at(j);
    }
    return out;
}

FaberCheckResult faber_checks(const TruncatedTaylor& f, int n_max, int M) {
    if (n_max < 1 || M < 1) throw std::invalid_argument("orders must be >= 1");
    if (f.order() < 2 * M + 1 || f.order() < n_max + 1)
        throw std::invalid_argument("series order too small for faber checks");
    FaberCheckResult res;
    GrunskyMatrix bg = grunsky_from_f(f, M);
    std::vector<TruncatedLaurent> Q;
    for (int n = 1; n <= n_max; ++n) Q.push_back(faber_from_f(f, n));

    // generating identity in (z, v), v = 1/w, window n_max in both variables
    int P = n_max;
    BivariateTruncated lhs_arg(P);
    lhs_arg.ref(0, 0) = 1.0;
    for (int k = 1; k <= P; ++k) lhs_arg.ref(k, 1) -= f.at(k); // 1 - f(z) v
    BivariateTruncated lhs = bivariate_log(lhs_arg);

    TruncatedTaylor s(f.order() - 1);
    for (int j = 0; j <= s.order(); ++j) s.coeffs[static_cast<size_t>(j)] = f.at(j + 1);
    TruncatedTaylor logfz = log_series(s); // log C + log(f/(Cz))
    for (int m = 1; m <= P; ++m) {
        for (int k = 0; k <= P; ++k) {
            Complex rhs = (k == 0) ? logfz.at(m) : Complex(0.0);
            if (k <= m)
                rhs -= Q[static_cast<size_t>(m - 1)].at(-k) / static_cast<double>(m);
            res.gen_log = std::max(res.gen_log, std::abs(lhs.at(m, k) - rhs));
        }
    }

    for (int n = 1; n <= n_max; ++n) {
        TruncatedLaurent comp = faber_compose(f, Q[static_cast<size_t>(n - 1)], n);
        for (int d = comp.low; d <= comp.high(); ++d) {
            Complex expect(0.0);
            if (d == -n) expect = 1.0;
            else if (d >= 1 && d <= M) expect = static_cast<double>(n) * bg.at(n, d);
            else if (d > M) continue; // beyond the Grunsky window
            Complex diff = comp.at(d) - expect;
            res.compose = std::max(res.compose, std::abs(diff));
            if (d <= 0 && d != -n) res.principal = std::max(res.principal, std::abs(comp.at(d)));
        }
    }
    return res;
}

TruncatedLaurent w_basis(const TruncatedTaylor& f, int n, int low) {
    if (low > -1) throw std::invalid_argument("window must include negative degrees");
    TruncatedLaurent Qn = faber_from_f(f, n);
    TruncatedLaurent comp = faber_compose(f, Qn, n);
    TruncatedLaurent out(low, n);
    for (int d = low; d <= n; ++d) out.ref(d) = comp.at(-d);
    return out;
}

Mat af_operator(const GrunskyMatrix& b) {
    double asym = b.max_asymmetry();
    if (!(asym <= 1e-6))
        throw std::invalid_argument("grunsky matrix asymmetric beyond tolerance");
    int M = b.M;
    Mat A(static_cast<size_t>(M), std::vector<Complex>(static_cast<size_t>(M)));
    if (M > 64) throw std::invalid_argument("graph block capped at 64");
    // both entries of each (m,n) pair scale one canonical quantized value, so
    // the m A[m][n] = n A[n][m] identity is exact, not just near
    for (int m = 1; m <= M; ++m) {
        for (int n = m; n <= M; ++n) {
            Complex v = quantize(b.at(m, n));
            A[static_cast<size_t>(m - 1)][static_cast<size_t>(n - 1)] =
                static_cast<double>(n) * v;
            A[static_cast<size_t>(n - 1)][static_cast<size_t>(m - 1)] =
                static_cast<double>(m) * v;
        }
    }
    return A;
}

Mat embed_graph(const Mat& A, int N) {
    size_t M = A.size();
    Mat out(static_cast<size_t>(N), std::vector<Complex>(static_cast<size_t>(N), Complex(0.0)));
    for (size_t r = 0; r < out.size(); ++r)
        for (size_t c = 1; c < out[r].size(); ++c)
            if (r < M && c - 1 < M) out[r][c] = A[r][c - 1];
    return out;
}

TauOperator build_tau_operator(const Mat& A, const std::vector<Complex>& tvec, int N) {
    if (N < 1) throw std::invalid_argument("truncation must be >= 1");
    if (static_cast<int>(A.size()) > N)
        throw std::invalid_argument("graph block larger than truncation");
    if (static_cast<int>(tvec.size()) > N)
        throw std::invalid_argument("flow vector longer than truncation");
    for (Complex t : tvec)
        if (!is_finite(t)) throw std::invalid_argument("non-finite flow parameter");

    TruncatedTaylor xi(2 * N);
    for (size_t k = 0; k < tvec.size(); ++k) xi.coeffs[k + 1] = -tvec[k];
    TruncatedTaylor h = exp_series(xi);

    TauOperator op;
    op.N = N;
    op.a.assign(static_cast<size_t>(N), std::vector<Complex>(static_cast<size_t>(N), Complex(0.0)));
    op.b = op.a;
    op.A = op.a;
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) {
            if (i >= j) op.a[static_cast<size_t>(i)][static_cast<size_t>(j)] = h.at(i - j);
            op.b[static_cast<size_t>(i)][static_cast<size_t>(j)] = h.at(i + j + 1);
        }
    for (size_t r = 0; r < A.size(); ++r)
        for (size_t c = 0; c < A[r].size(); ++c) op.A[r][c] = A[r][c];
    return op;
}

Mat mat_mul(const Mat& x, const Mat& y) {
    size_t n = x.size();
    Mat r(n, std::vector<Complex>(n, Complex(0.0)));
    for (size_t i = 0; i < n; ++i)
        for (size_t k = 0; k < n; ++k) {
            Complex v = x[i][k];
            if (v == Complex(0.0)) continue;
            for (size_t j = 0; j < n; ++j) r[i][j] += v * y[k][j];
        }
    return r;
}

Complex mat_det(Mat m) {
    size_t n = m.size();
    Complex det(1.0, 0.0);
    for (size_t col = 0; col < n; ++col) {
        size_t piv = col;
        for (size_t r = col + 1; r < n; ++r)
            if (std::abs(m[r][col]) > std::abs(m[piv][col])) piv = r;
        if (m[piv][col] == Complex(0.0)) return Complex(0.0);
        if (piv != col) {
            std::swap(m[piv], m[col]);
            det = -det;
        }
        det *= m[col][col];
        for (size_t r = col + 1; r < n; ++r) {
            Complex factor = m[r][col] / m[col][col];
            if (factor == Complex(0.0)) continue;
            for (size_t c = col; c < n; ++c) m[r][c] -= factor * m[col][c];
        }
    }
    return det;
}

Mat tau_matrix(const Mat& A, const std::vector<Complex>& tvec, int N) {
    TauOperator op = build_tau_operator(A, tvec, N);
    // X = a^{-1} (b A) by forward substitution; a is unit lower triangular
    Mat bA = mat_mul(op.b, op.A);
    Mat X(static_cast<size_t>(N), std::vector<Complex>(static_cast<size_t>(N), Complex(0.0)));
    for (int j = 0; j < N; ++j)
        for (int i = 0; i < N; ++i) {
            Complex s = bA[static_cast<size_t>(i)][static_cast<size_t>(j)];
            for (int k = 0; k < i; ++k)
                s -= op.a[static_cast<size_t>(i)][static_cast<size_t>(k)] *
                     X[static_cast<size_t>(k)][static_cast<size_t>(j)];
            X[static_cast<size_t>(i)][static_cast<size_t>(j)] = s; // a[i][i] = 1
        }
    for (int i = 0; i < N; ++i) X[static_cast<size_t>(i)][static_cast<size_t>(i)] += 1.0;
    return X;
}

Complex tau_function(const Mat& A, const std::vector<Complex>& tvec, int N) {
    return mat_det(tau_matrix(A, tvec, N));
}

} // namespace lk
