#pragma once

// Polynomial family evaluators. Each family has at least two independent
// computation paths (terminating series vs three-term recurrence) so the
// identity layer can cross-validate them.
#include <vector>

#include "qleg/qcore.hpp"

namespace qleg {

template <class Real>
struct BigQJacobiParams {
    Real a, b;  // unconstrained for bare evaluation
    Real c, d;  // c>0, d>0 required by orthogonality/addition entry points
    QBase<Real> base;
};

template <class Real>
struct DualQKrawtchoukParams {
    Real s;  // > 0
    int N;   // lattice size; degrees live in 0..N
    QBase<Real> base;
};

// ---------------------------------------------------------------------------
// Big q-Jacobi
// ---------------------------------------------------------------------------

/// P_n(x;a,b,c,d;q) = 3phi2(q^{-n}, abq^{n+1}, qax/c; qa, -qad/c; q, q).
template <class Real>
Real big_q_jacobi(int n, Real x, const BigQJacobiParams<Real>& p) {
    if (n < 0) throw DomainError("big_q_jacobi: degree must be >= 0");
    if (p.c == Real(0)) throw DomainError("big_q_jacobi: c must be nonzero");
    const Real q = p.base.q;
    SeriesSpec<Real> spec{{pow_int(q, -(long)n), p.a * p.b * pow_int(q, (long)n + 1), q * p.a * x / p.c},
                          {q * p.a, -q * p.a * p.d / p.c},
                          p.base,
                          q,
                          n};
    return phi_terminating(spec);
}

/// All values P_0..P_nmax(x;a,b,c,d;q) by the contiguous three-term
/// recurrence in the degree (y = qax/c):
///   (y - 1) P_n = A_n (P_{n+1} - P_n) + C_n (P_{n-1} - P_n),
///   A_n = (1-aq^{n+1})(1-abq^{n+1})(1+(ad/c)q^{n+1})
///         / [(1-abq^{2n+1})(1-abq^{2n+2})],
///   C_n = (a^2 d/c) q^{n+1} (1-q^n)(1+(bc/d)q^n)(1-bq^n)
///         / [(1-abq^{2n})(1-abq^{2n+1})].
/// C_0 multiplies the absent P_{-1} and is dropped structurally (its printed
/// form is 0/0 when ab = 1). Near interior zeros of P_n the terminating
/// series cancels away up to half its digits while this path stays at
/// roundoff, so prefer it whenever small values inside the orthogonality
/// interval matter.
template <class Real>
std::vector<Real> big_q_jacobi_all(int nmax, Real x,
                                   const BigQJacobiParams<Real>& p) {
    if (nmax < 0) throw DomainError("big_q_jacobi_all: degree must be >= 0");
    if (p.c == Real(0) || p.d == Real(0))
        throw DomainError("big_q_jacobi_all: c and d must be nonzero");
    const Real q = p.base.q;
    const Real ab = p.a * p.b;
    const Real y = q * p.a * x / p.c;
    std::vector<Real> P(static_cast<size_t>(nmax) + 1);
    P[0] = Real(1);
    for (int n = 0; n + 1 <= nmax; ++n) {
        const Real qn = pow_int(q, n), qn1 = pow_int(q, n + 1);
        const Real denA =
            (Real(1) - ab * qn * qn1) * (Real(1) - ab * qn1 * qn1);
        if (denA == Real(0))
            throw DomainError("big_q_jacobi_all: degenerate recurrence");
        const Real An = (Real(1) - p.a * qn1) * (Real(1) - ab * qn1) *
                        (Real(1) + (p.a * p.d / p.c) * qn1) / denA;
        if (An == Real(0))
            throw DomainError("big_q_jacobi_all: degenerate recurrence");
        Real corr = (y - Real(1)) * P[n];
        if (n > 0) {
            const Real denC =
                (Real(1) - ab * qn * qn) * (Real(1) - ab * qn * qn1);
            if (denC == Real(0))
                throw DomainError("big_q_jacobi_all: degenerate recurrence");
            const Real Cn = (p.a * p.a * p.d / p.c) * qn1 * (Real(1) - qn) *
                            (Real(1) + (p.b * p.c / p.d) * qn) *
                            (Real(1) - p.b * qn) / denC;
            corr -= Cn * (P[n - 1] - P[n]);
        }
        P[n + 1] = P[n] + corr / An;
    }
    return P;
}

// ---------------------------------------------------------------------------
// Monic big q-Jacobi with a = b = 0 (dilated Al-Salam--Carlitz)
// ---------------------------------------------------------------------------

enum class MonicPath { series_c, series_d, recurrence };

/// All values \hat P_0..\hat P_nmax(x;0,0,c,d;q) by the three-term recurrence
///   \hat P_{k+1} = (x - q^k(c-d)) \hat P_k - q^{k-1} c d (1-q^k) \hat P_{k-1}.
/// This is the workhorse path: total on all real x, and the cheapest way to
/// get a whole degree range at once (integrands, eigenvector coefficients).
template <class Real>
std::vector<Real> monic_big_q_jacobi00_all(int nmax, Real x, Real c, Real d,
                                           const QBase<Real>& base) {
    if (nmax < 0) throw DomainError("monic_big_q_jacobi00: degree must be >= 0");
    std::vector<Real> vals(nmax + 1);
    vals[0] = Real(1);
    Real prev(0), cur(1), qk(1);  // qk = q^k
    const Real q = base.q;
    for (int k = 0; k < nmax; ++k) {
        const Real next =
            (x - qk * (c - d)) * cur - (qk / q) * c * d * (Real(1) - qk) * prev;
        prev = cur;
        cur = next;
        qk *= q;
        vals[k + 1] = cur;
    }
    return vals;
}

/// \hat P_n(x;0,0,c,d;q). The two series paths realize the 2phi1 forms
///   series_c: (-c)^n q^{n(n-1)/2} 2phi1(q^{-n}, -d/x; 0; q,  qx/c)
///   series_d:    d^n q^{n(n-1)/2} 2phi1(q^{-n},  c/x; 0; q, -qx/d)
/// and are undefined at x = 0 (DomainError); the recurrence path is total.
template <class Real>
Real monic_big_q_jacobi00(int n, Real x, Real c, Real d, const QBase<Real>& base,
                          MonicPath path = MonicPath::recurrence) {
    if (n < 0) throw DomainError("monic_big_q_jacobi00: degree must be >= 0");
    const Real q = base.q;
    switch (path) {
        case MonicPath::recurrence:
            return monic_big_q_jacobi00_all(n, x, c, d, base).back();
        case MonicPath::series_c: {
            if (x == Real(0))
                throw DomainError("monic_big_q_jacobi00: series path undefined at x=0");
            if (c == Real(0)) throw DomainError("monic_big_q_jacobi00: series_c needs c != 0");
            SeriesSpec<Real> spec{{pow_int(q, -(long)n), -d / x}, {Real(0)}, base, q * x / c, n};
            return pow_int(-c, (long)n) * pow_int(q, (long)n * (n - 1) / 2) *
                   phi_terminating(spec);
        }
        case MonicPath::series_d: {
            if (x == Real(0))
                throw DomainError("monic_big_q_jacobi00: series path undefined at x=0");
            if (d == Real(0)) throw DomainError("monic_big_q_jacobi00: series_d needs d != 0");
            SeriesSpec<Real> spec{{pow_int(q, -(long)n), c / x}, {Real(0)}, base, -q * x / d, n};
            return pow_int(d, (long)n) * pow_int(q, (long)n * (n - 1) / 2) *
                   phi_terminating(spec);
        }
    }
    throw DomainError("monic_big_q_jacobi00: unknown path");
}

// ---------------------------------------------------------------------------
// Little q-Jacobi
// ---------------------------------------------------------------------------

/// p_n(x;a,b;q) = 2phi1(q^{-n}, abq^{n+1}; qa; q, qx); p_n(0) = 1 exactly.
template <class Real>
Real little_q_jacobi(int n, Real x, Real a, Real b, const QBase<Real>& base) {
    if (n < 0) throw DomainError("little_q_jacobi: degree must be >= 0");
    const Real q = base.q;
    SeriesSpec<Real> spec{{pow_int(q, -(long)n), a * b * pow_int(q, (long)n + 1)},
                          {q * a},
                          base,
                          q * x,
                          n};
    return phi_terminating(spec);
}

// ---------------------------------------------------------------------------
// Dual q-Krawtchouk (on its lattice)
// ---------------------------------------------------------------------------

/// R_n(lambda(x); s, N; q) with lambda(x) = q^{-x} - s^{-1} q^{x-N}, evaluated
/// as 3phi2(q^{-n}, q^{-x}, -s^{-1}q^{x-N}; q^{-N}, 0; q, q).
template <class Real>
Real dual_q_krawtchouk(int n, int x, const DualQKrawtchoukParams<Real>& p) {
    if (n < 0 || n > p.N) throw DegreeOutOfRange("dual_q_krawtchouk: need 0 <= n <= N");
    if (x < 0 || x > p.N) throw DomainError("dual_q_krawtchouk: lattice point x outside [0,N]");
    if (!(p.s > Real(0))) throw DomainError("dual_q_krawtchouk: s must be > 0");
    const Real q = p.base.q;
    SeriesSpec<Real> spec{{pow_int(q, -(long)n), pow_int(q, -(long)x),
                           -pow_int(q, (long)x - p.N) / p.s},
                          {pow_int(q, -(long)p.N), Real(0)},
                          p.base,
                          q,
                          n};
    return phi_terminating(spec);
}

// ---------------------------------------------------------------------------
// q-Charlier
// ---------------------------------------------------------------------------

/// c_n(y;a;q) = 2phi1(q^{-n}, y; 0; q, -q^{n+1}/a), a > 0.
template <class Real>
Real q_charlier(int n, Real y, Real a, const QBase<Real>& base) {
    if (n < 0) throw DomainError("q_charlier: degree must be >= 0");
    if (!(a > Real(0))) throw DomainError("q_charlier: a must be > 0");
    const Real q = base.q;
    SeriesSpec<Real> spec{{pow_int(q, -(long)n), y},
                          {Real(0)},
                          base,
                          -pow_int(q, (long)n + 1) / a,
                          n};
    return phi_terminating(spec);
}

// ---------------------------------------------------------------------------
// Leading coefficients by polynomial fit
// ---------------------------------------------------------------------------

namespace detail {

/// Divided-difference fit of f at n+1 Chebyshev nodes on [lo,hi]. The top
/// divided difference f[x_0..x_n] IS the leading coefficient of the degree-n
/// interpolant. The interpolant is then re-evaluated at three off-node points;
/// a mismatch means f was not a degree-<=n polynomial (or the fit degenerated).
template <class Real, class F>
Real fit_leading_coefficient(F&& f, int n, Real lo, Real hi, Real check_tol) {
    using std::abs;
    using std::cos;
    const Real pi = Real(3.14159265358979323846264338327950288L);
    const Real mid = (lo + hi) / 2, half = (hi - lo) / 2;
    std::vector<Real> xs(n + 1), coef(n + 1);
    Real scale(0);
    for (int i = 0; i <= n; ++i) {
        xs[i] = mid + half * cos(pi * (2 * Real(i) + 1) / (2 * Real(n + 1)));
        coef[i] = f(xs[i]);
        scale = std::max(scale, abs(coef[i]));
    }
    if (scale == Real(0)) scale = Real(1);
    for (int level = 1; level <= n; ++level)
        for (int i = n; i >= level; --i)
            coef[i] = (coef[i] - coef[i - 1]) / (xs[i] - xs[i - level]);

    auto interp = [&](Real x) {
        Real acc = coef[n];
        for (int i = n - 1; i >= 0; --i) acc = acc * (x - xs[i]) + coef[i];
        return acc;
    };
    for (Real t : {Real(0.25), Real(0.5), Real(0.75)}) {
        const Real x = lo + t * (hi - lo);
        if (abs(interp(x) - f(x)) > check_tol * scale)
            throw IllConditioned("fit_leading_coefficient: interpolant check failed");
    }
    return coef[n];
}

}  // namespace detail

enum class FamilyId { monic_big_q_jacobi00, big_q_jacobi, little_q_jacobi };

/// Coefficient of x^n obtained from an (n+1)-point Chebyshev-node fit.
/// Fit interval: [-d-0.5, c+0.5] for the big families, [-0.5, 1.5] for the
/// little family (which has no c,d; its natural support is [0,1]).
template <class Real>
Real leading_coefficient(FamilyId family, int n, const BigQJacobiParams<Real>& p,
                         Real check_tol = Real(1e-6)) {
    switch (family) {
        case FamilyId::monic_big_q_jacobi00:
            return detail::fit_leading_coefficient(
                [&](Real x) { return monic_big_q_jacobi00(n, x, p.c, p.d, p.base); }, n,
                -p.d - Real(0.5), p.c + Real(0.5), check_tol);
        case FamilyId::big_q_jacobi:
            return detail::fit_leading_coefficient(
                [&](Real x) { return big_q_jacobi(n, x, p); }, n, -p.d - Real(0.5),
                p.c + Real(0.5), check_tol);
        case FamilyId::little_q_jacobi:
            return detail::fit_leading_coefficient(
                [&](Real x) { return little_q_jacobi(n, x, p.a, p.b, p.base); }, n,
                Real(-0.5), Real(1.5), check_tol);
    }
    throw DomainError("leading_coefficient: unknown family");
}

}  // namespace qleg
