#pragma once

// Classical (q = 1) layer: Jacobi, Legendre, and Chebyshev evaluators, the
// rho-map from ratio asymptotics, and convergence scans that drive each
// q-family into its classical limit along q = r^{1/p} with p -> infinity.
#include <cmath>
#include <functional>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include "qleg/qcore.hpp"
#include "qleg/report.hpp"

namespace qleg {

// ---------------------------------------------------------------------------
// Classical evaluators
// ---------------------------------------------------------------------------

/// Jacobi polynomial normalised by R_n^{(alpha,beta)}(1) = 1, via the
/// standard three-term recurrence for P_n^{(alpha,beta)} followed by
/// division through P_n(1) = (alpha+1)_n / n!. On [-1,1] with
/// alpha = beta >= 0 the values are bounded by 1, so the recurrence is
/// benign; alpha, beta > -1 keeps every recurrence denominator positive
/// (the n = 1 step, whose general-form denominator can vanish when
/// alpha + beta = 0, is written out explicitly).
template <class Real>
Real jacobi_R(int n, Real alpha, Real beta, Real x) {
    if (n < 0) throw DomainError("jacobi_R: degree must be >= 0");
    if (!(alpha > Real(-1)) || !(beta > Real(-1)))
        throw DomainError("jacobi_R: need alpha > -1 and beta > -1");
    if (n == 0 || x == Real(1)) return Real(1);
    Real pm1(1);                                                  // P_0
    Real p = (alpha - beta) / 2 + (alpha + beta + 2) * x / 2;     // P_1
    for (int k = 2; k <= n; ++k) {
        const Real K(k), ab = alpha + beta;
        const Real c1 = 2 * K * (K + ab) * (2 * K + ab - 2);
        const Real c2 = (2 * K + ab - 1) *
                        ((2 * K + ab) * (2 * K + ab - 2) * x +
                         alpha * alpha - beta * beta);
        const Real c3 = 2 * (K + alpha - 1) * (K + beta - 1) * (2 * K + ab);
        const Real next = (c2 * p - c3 * pm1) / c1;
        pm1 = p;
        p = next;
    }
    Real norm(1);
    for (int k = 1; k <= n; ++k) norm *= (alpha + Real(k)) / Real(k);
    return p / norm;
}

/// Chebyshev polynomial of the first kind, T_m(cos t) = cos(m t), by the
/// recurrence T_{m+1} = 2 x T_m - T_{m-1}.
template <class Real>
Real chebyshev_T(int m, Real x) {
    if (m < 0) throw DomainError("chebyshev_T: degree must be >= 0");
    if (m == 0) return Real(1);
    Real tm1(1), tm = x;
    for (int k = 2; k <= m; ++k) {
        const Real next = 2 * x * tm - tm1;
        tm1 = tm;
        tm = next;
    }
    return tm;
}

/// rho(x) = x + sqrt(x^2 - 1) with the square-root branch chosen so that
/// |rho(x)| > 1 off [-1,1]: for real x that means the root carries the sign
/// of x. Defined for real |x| >= 1 only. Satisfies rho + 1/rho = 2x and
/// rho^m + rho^{-m} = 2 T_m(x).
struct RhoMap {
    template <class Real>
    Real operator()(Real x) const {
        using std::abs;
        using std::sqrt;
        if (!(abs(x) >= Real(1)))
            throw DomainError("rho_map: defined for |x| >= 1 only");
        const Real s = sqrt(x * x - Real(1));
        return x >= Real(0) ? x + s : x - s;
    }
};
inline constexpr RhoMap rho_map{};

// ---------------------------------------------------------------------------
// Orthonormal recurrence coefficients of the a = b = 0 big family
// ---------------------------------------------------------------------------
// x p_k = a_{k+1} p_{k+1} + b_k p_k + a_k p_{k-1} with
//   a_k(q) = q^{(k-1)/2} sqrt(c d (1-q^k)),   b_k(q) = q^k (c-d).
// Along q = r^{1/n} these tend to A = sqrt(r c d (1-r)) and B = r(c-d),
// which is what places the limiting measure on [B-2A, B+2A].

template <class Real>
Real orthonormal_a(int k, Real q, Real c, Real d) {
    using std::pow;
    using std::sqrt;
    if (k < 1) throw DomainError("orthonormal_a: need k >= 1");
    return pow(q, (Real(k) - 1) / 2) * sqrt(c * d * (Real(1) - pow_int(q, k)));
}

template <class Real>
Real orthonormal_b(int k, Real q, Real c, Real d) {
    if (k < 0) throw DomainError("orthonormal_b: need k >= 0");
    return pow_int(q, k) * (c - d);
}

// ---------------------------------------------------------------------------
// Scan plumbing
// ---------------------------------------------------------------------------

/// Configuration of a q -> 1 convergence scan: q = r^{1/p} for each p in
/// p_values (strictly increasing), errors aggregated per p. `final_cap`
/// bounds the error at the largest p; see LimitScanResult for the pass rule.
struct LimitScanConfig {
    double r = 0.5;               // fixed r in (0,1); q = r^{1/p}
    std::vector<int> p_values;    // strictly increasing, all >= 1
    std::string target;           // identity label stamped into the result
    double final_cap = 0.05;      // ceiling on the error at the largest p
    long max_terms = 100000;      // series/product term budget per evaluation
};

/// One scan evaluation: the q-side value and its classical limit at a probe.
struct ErrorTableRow {
    int p = 0;
    double q = 0;            // r^{1/p}
    double probe = 0;        // probe point (x, or the lattice point)
    double q_value = 0;      // q-family evaluation
    double limit_value = 0;  // classical limit evaluation
    double abs_error = 0;
};

/// Aggregated scan outcome. `p_values` lists the p actually evaluated (in
/// increasing order) and `max_error_per_p` is aligned with it; `skipped`
/// lists p values dropped because the evaluation degenerated. The monotone
/// flag is strict decrease along p, except that errors at or below a small
/// floor (converged to roundoff) always count as non-increasing.
struct LimitScanResult {
    std::string target;
    std::vector<ErrorTableRow> rows;
    std::vector<int> p_values;
    std::vector<double> max_error_per_p;
    std::vector<int> skipped;
    bool monotone_decreasing = false;
    bool passed = false;
};

/// CSV export of the full error table.
inline std::string error_table_csv(const LimitScanResult& res) {
    std::ostringstream os;
    os << "p,q,probe,q_value,limit_value,abs_error\n";
    os << std::setprecision(17);
    for (const auto& row : res.rows)
        os << row.p << ',' << row.q << ',' << row.probe << ',' << row.q_value
           << ',' << row.limit_value << ',' << row.abs_error << '\n';
    return os.str();
}

// ---------------------------------------------------------------------------
// Family limit scans
// ---------------------------------------------------------------------------

enum class LimitFamily { big_q_jacobi, little_q_jacobi, dual_q_krawtchouk };

/// Parameters of the scanned family. The big and little families use degree
/// n with a = q^alpha, b = q^beta (so the classical limit is the Jacobi
/// polynomial R_n^{(alpha,beta)} of shifted argument); the dual family uses
/// (l, m) with lattice size N = 2l, degree l-m, s = c/d, evaluated at the
/// lattice point l. `probes` is the x grid for big/little (defaults used
/// when empty: five interior points of [-d, c], resp. {0.1,...,0.9}); the
/// dual family has a single canonical probe and ignores it.
struct LimitFamilyParams {
    int n = 0;
    double alpha = 0, beta = 0;
    double c = 1, d = 1;
    int l = 0, m = 0;
    std::vector<double> probes;
};

/// For each p: q = r^{1/p}, evaluate the q-family and its classical limit on
/// the probe grid, record |difference|, and aggregate the max per p. Passes
/// when the error at the largest p is below cfg.final_cap and smaller than
/// at the smallest p. Evaluations switch to extended precision automatically
/// once q > 0.99.
LimitScanResult limit_family_scan(const LimitScanConfig& cfg, LimitFamily family,
                                  const LimitFamilyParams& params);

/// Ratio asymptotics of the monic a = b = 0 family for x off [-d, c]:
/// compares hatP_{p+m}(x) / hatP_p(x) at q = r^{1/p} against
/// (c d r (1-r))^{m/2} rho(xi)^m, xi = (x - r(c-d)) / (2 sqrt(r c d (1-r))),
/// for any integer m (p + m >= 0 required for every scanned p). A vanishing
/// denominator polynomial raises DegenerateRatio internally; that p is
/// reported in `skipped` and the scan continues (the error is thrown only
/// when every p degenerates). Passes when the error decreases along p.
LimitScanResult ratio_asymptotic(int m, double x, double r, double c, double d,
                                 const std::vector<int>& p_values,
                                 long max_terms = 100000);

// ---------------------------------------------------------------------------
// Classical addition and product formulas
// ---------------------------------------------------------------------------

/// Legendre addition formula: for x, y in (-1,1), t in [-1,1],
///   R_l(xy + t s) = R_l(x) R_l(y)
///     + 2 sum_{m=1}^{l} [(l+m)! / ((l-m)! (m!)^2)] 2^{-2m} s^m
///         R_{l-m}^{(m,m)}(x) R_{l-m}^{(m,m)}(y) T_m(t),
/// with s = sqrt((1-x^2)(1-y^2)) and R_l = R_l^{(0,0)}.
VerificationReport classical_addition(int l, double x, double y, double t,
                                      double tol = 1e-12);

/// The same identity in the parameterisation inherited from the q-side
/// degeneration: with X = (d-c)/(c+d), Y = 1-2r, T = (x - r(c-d))/(2A),
/// A = sqrt(r c d (1-r)), the left side is R_l((2x+d-c)/(c+d)) and the sum
/// carries (1+d/c)^{-m} ((d/c) r (1-r))^{m/2} in place of 2^{-2m} s^m.
/// Polynomial in x, so x is unrestricted (T may leave [-1,1]).
VerificationReport classical_addition_parameterized(int l, double x, double r,
                                                    double c, double d,
                                                    double tol = 1e-12);

/// Legendre product formula: for 0 <= m <= l and x, y in (-1,1),
///   R_{l-m}^{(m,m)}(x) R_{l-m}^{(m,m)}(y)
///     = 2^{2m} (l-m)! (m!)^2 / (pi (l+m)!) s^{-m}
///       * int_{-1}^{1} R_l(xy + t s) T_m(t) / sqrt(1-t^2) dt.
/// The integral is Chebyshev--Gauss quadrature with l+m+4 nodes, exact for
/// the degree-(l+m) polynomial integrand. Evaluated in extended precision
/// throughout: the quadrature sum cancels from O(1) terms down to O(s^m),
/// which costs ~s^{-m} digits that double cannot spare near m = l.
VerificationReport classical_product(int l, int m, double x, double y,
                                     double tol = 1e-12);

// ---------------------------------------------------------------------------
// Arcsine-kernel limit of weighted pairings
// ---------------------------------------------------------------------------

/// For each p: pairs f against p_p p_{p+m} in the q-measure on [-d, c]
/// (orthonormal polynomials of the a = b = 0 family, weight
/// (qz/c, -qz/d; q)_infty, Jackson integral) and against the arcsine kernel
///   (1/pi) int f(z) T_m((z-B)/(2A)) / sqrt(4A^2 - (z-B)^2) dz
/// on [B-2A, B+2A], A = sqrt(r c d (1-r)), B = r(c-d). Records the gap per
/// p and passes when the final gap is smaller than the first (or at the
/// converged floor). f must be a polynomial (the kernel side uses 64-node
/// Chebyshev--Gauss quadrature, exact up to combined degree 127 - m); it is
/// always evaluated in double even when q > 0.99 engages extended precision
/// internally.
LimitScanResult kernel_limit_scan(const std::function<double(double)>& f, int m,
                                  double r, double c, double d,
                                  const std::vector<int>& p_values,
                                  long max_terms = 100000);

}  // namespace qleg
