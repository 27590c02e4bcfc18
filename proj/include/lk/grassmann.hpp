#pragma once

#include <vector>

#include "lk/common.hpp"
#include "lk/series.hpp"
#include "lk/solver.hpp"

namespace lk {

using Mat = std::vector<std::vector<Complex>>;

// The three finite blocks entering the determinant: a (H+ -> H+) and
// b (H- -> H+) of multiplication by e^{-xi(t,z)}, and the graph block
// A (H+ -> H-). H+ basis 1, z, z^2, ...; H- basis z^{-1}, z^{-2}, ...
struct TauOperator {
    int N = 0;
    Mat a; // unit lower triangular
    Mat b;
    Mat A;
};

// Principal-plus-constant part of (f^{-1}(w))^{-n}: a degree-n polynomial in
// 1/w, returned on the window [-n, 0].
TruncatedLaurent faber_from_f(const TruncatedTaylor& f, int n);

// Coefficients read off the bivariate log of the divided difference of f:
// b_{-m,-n} = -(coefficient at z^m zeta^n), plus the n=0 column. The upper
// triangle is computed and mirrored, so the result is symmetric bitwise.
GrunskyMatrix grunsky_from_f(const TruncatedTaylor& f, int M);

struct FaberCheckResult {
    double gen_log = 0.0;   // generating identity for log((w - f(z))/w)
    double compose = 0.0;   // Q_n(f(z)) vs z^{-n} + n sum_m b_{-n,-m} z^m
    double principal = 0.0; // no nonpositive z-degrees in Q_n(f(z)) besides z^{-n}
};

// Evaluates the three Faber characterizations as truncated-series identities
// for n = 1..n_max with Grunsky window M; returns max residual of each.
FaberCheckResult faber_checks(const TruncatedTaylor& f, int n_max, int M);

// Q_n(f(z)) expanded as a Laurent series in z (window [-n, f.order()-n]).
TruncatedLaurent faber_compose(const TruncatedTaylor& f, const TruncatedLaurent& Qn, int n);

// n-th basis vector of the graph subspace: v_n(z) = Q_n(f(1/z)) = z^n + n sum_m
// b_{-n,-m} z^{-m}, truncated to degrees [low, n].
TruncatedLaurent w_basis(const TruncatedTaylor& f, int n, int low);

// Drop the low 6 mantissa bits per component so integer scalings up to 64
// stay exact. Relative perturbation at most 2^-47.
double quantize_component(double x);
Complex quantize(Complex v);

// Graph block from a Grunsky matrix: A[m][n] = n * b_{-n,-m}, built from the
// canonical upper triangle so that m*A[m][n] = n*A[n][m] holds exactly in
// floating point. Rejects input asymmetric beyond 1e-6.
Mat af_operator(const GrunskyMatrix& b);

// Reindex an af_operator block onto the full H+ basis including the constant
// column: out[r][c] = A[r][c-1] for 1 <= c (z^c), zero column at c = 0.
Mat embed_graph(const Mat& A, int N);

// Blocks of multiplication by e^{-sum t_k z^k} at truncation N, plus A padded
// to N x N. tvec longer than N is rejected.
TauOperator build_tau_operator(const Mat& A, const std::vector<Complex>& tvec, int N);

// The matrix 1 + a^{-1} b A itself (a inverted by forward substitution).
Mat tau_matrix(const Mat& A, const std::vector<Complex>& tvec, int N);

// det(1 + a^{-1} b A) by dense LU with partial pivoting.
Complex tau_function(const Mat& A, const std::vector<Complex>& tvec, int N);

// Determinant helper shared with tests (LU, partial pivoting).
Complex mat_det(Mat m);
Mat mat_mul(const Mat& x, const Mat& y);

} // namespace lk
