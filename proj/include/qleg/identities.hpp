#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qleg/families.hpp"
#include "qleg/qcore.hpp"
#include "qleg/report.hpp"

namespace qleg {

// ---------------------------------------------------------------------------
// Orthogonality of the monic a=b=0 family on [-d, c]
// ---------------------------------------------------------------------------

/// Weight (qx/c;q)_inf (-qx/d;q)_inf attached to the monic a=b=0 family.
template <class Real>
Real big00_weight(Real x, Real c, Real d, const QBase<Real>& base) {
    return qpochhammer_infinite(base.q * x / c, base) *
           qpochhammer_infinite(-base.q * x / d, base);
}

/// Closed-form squared norm of the degree-n monic polynomial:
/// h_n = q^{n(n-1)/2} (cd)^n (q;q)_n (1-q) c (q,-d/c,-qc/d;q)_inf.
template <class Real>
Real big00_norm(int n, Real c, Real d, const QBase<Real>& base) {
    const Real q = base.q;
    return pow_int(q, static_cast<long>(n) * (n - 1) / 2) * pow_int(c * d, n) *
           qpochhammer_finite(q, base, n) * (Real(1) - q) * c *
           qpochhammer_infinite(q, base) * qpochhammer_infinite(-d / c, base) *
           qpochhammer_infinite(-q * c / d, base);
}

/// q-integral of P-hat_n P-hat_m against the weight over [-d, c] versus
/// delta_{n,m} h_n. The integral's tail bound is tail_rel scaled by the
/// geometric mean of the two closed-form norms (the natural magnitude of the
/// integrand family); off-diagonal entries are judged by the absolute branch
/// of the residual policy.
template <class Real>
VerificationReport orthogonality_big00(int n, int m, Real c, Real d,
                                       const QBase<Real>& base,
                                       double tol = 1e-8,
                                       Real tail_rel = Real(1e-15)) {
    using std::sqrt;
    const int top = std::max(n, m);
    auto integrand = [&](Real x) {
        auto P = monic_big_q_jacobi00_all(top, x, c, d, base);
        return P[static_cast<size_t>(n)] * P[static_cast<size_t>(m)] *
               big00_weight(x, c, d, base);
    };
    const Real scale =
        sqrt(big00_norm(n, c, d, base) * big00_norm(m, c, d, base));
    QIntegralSpec<Real> spec{-d, c, base, tail_rel * scale};
    long nodes = 0;
    const Real lhs = q_integral(integrand, spec, &nodes);
    const Real rhs = (n == m) ? big00_norm(n, c, d, base) : Real(0);
    return make_report(
        "orthogonality_big00",
        {{"n", double(n)},
         {"m", double(m)},
         {"c", to_double(c)},
         {"d", to_double(d)},
         {"q", to_double(base.q)}},
        lhs, rhs, tol, {{"integral_nodes", double(nodes)}});
}

// ---------------------------------------------------------------------------
// q-Charlier orthogonality
// ---------------------------------------------------------------------------

enum class CharlierKind { same, cross };

/// kind = same:
///   sum_{x>=0} a^x q^{x(x-1)/2}/(q;q)_x c_n c_m(q^{-x};a;q)
///     = delta_{n,m} q^{-n} (q;q)_n (-q/a;q)_n (-a;q)_inf.
/// kind = cross:
///   sum_{x>=0} (-1)^x q^{x(x-1)/2}/(q;q)_x c_n(q^{-x};a;q) c_m(q^{-x};1/a;q)
///     = 0.
/// The q^{x(x-1)/2} factor dominates the polynomial growth of the summands,
/// so the series settles superexponentially; the loop stops after quiet_run
/// consecutive terms below base.eps relative to the largest term seen. High
/// (n, m, a) cells cancel up to ~19 digits, so run these in extended
/// precision when tight residuals are required.
template <class Real>
VerificationReport q_charlier_orthogonality(int n, int m, Real a,
                                            const QBase<Real>& base,
                                            CharlierKind kind,
                                            double tol = 1e-9) {
    using std::abs;
    if (n < 0 || m < 0)
        throw DomainError("q_charlier_orthogonality: degrees must be >= 0");
    if (!(a > Real(0)))
        throw DomainError("q_charlier_orthogonality: a must be > 0");
    const Real q = base.q;
    const Real am = (kind == CharlierKind::same) ? a : Real(1) / a;

    Real sum(0), largest(0);
    Real weight(1);  // a^x (or (-1)^x) q^{x(x-1)/2} / (q;q)_x, updated per x
    long x = 0;
    int quiet = 0;
    const int quiet_run = 5;
    for (; x < base.max_terms; ++x) {
        if (x > 0) {
            const Real step = (kind == CharlierKind::same) ? a : Real(-1);
            weight *= step * pow_int(q, x - 1) / (Real(1) - pow_int(q, x));
        }
        const Real y = pow_int(q, -x);
        const Real term = weight * q_charlier(n, y, a, base) *
                          q_charlier(m, y, am, base);
        sum += term;
        largest = std::max(largest, abs(term));
        if (abs(term) <= base.eps * std::max(largest, Real(1))) {
            if (++quiet >= quiet_run) {
                ++x;
                break;
            }
        } else {
            quiet = 0;
        }
    }
    if (x >= base.max_terms)
        throw NonConvergence("q_charlier_orthogonality: sum did not settle");

    Real rhs(0);
    if (kind == CharlierKind::same && n == m)
        rhs = pow_int(q, -n) * qpochhammer_finite(q, base, n) *
              qpochhammer_finite(-q / a, base, n) *
              qpochhammer_infinite(-a, base);
    const char* id =
        (kind == CharlierKind::same) ? "q_charlier_same" : "q_charlier_cross";
    return make_report(id,
                       {{"n", double(n)},
                        {"m", double(m)},
                        {"a", to_double(a)},
                        {"q", to_double(base.q)}},
                       sum, rhs, tol, {{"sum_terms", double(x)}});
}

// ---------------------------------------------------------------------------
// Squared eigenvector norms h_x
// ---------------------------------------------------------------------------

enum class HNormPath { direct, closed };

/// path = closed:
///   h_x = q^{-2x} (q^2;q^2)_x (-q^{2 sigma + 2};q^2)_x (-q^{-2 sigma};q^2)_inf.
/// path = direct: the defining sum
///   h_x = (-1)^x q^{2x(x+sigma)} sum_{n>=0} q^{n(n-1)} q^{-2 sigma n} /
///         (q^2;q^2)_n * 2phi1(q^{-2x}, q^{-2n}; 0; q^2, -q^{2+2 sigma+2x})
///         * q^{-2nx},
/// truncated once the summands settle below base.eps relative to the largest
/// term (they decay like q^{n^2} up front).
template <class Real>
Real h_norm(int x, Real sigma, const QBase<Real>& base, HNormPath path,
            long* terms_used = nullptr) {
    using std::abs;
    using std::pow;
    if (x < 0) throw DomainError("h_norm: x must be >= 0");
    const Real q = base.q;
    const Real q2 = q * q;
    const QBase<Real> b2(q2, base.eps, base.max_terms);
    const Real q2s = pow(q, Real(2) * sigma);  // q^{2 sigma}

    if (path == HNormPath::closed) {
        if (terms_used) *terms_used = 0;
        return pow_int(q, -2 * x) * qpochhammer_finite(q2, b2, x) *
               qpochhammer_finite(-q2s * q2, b2, x) *
               qpochhammer_infinite(-Real(1) / q2s, b2);
    }

    const Real z = -q2 * q2s * pow_int(q, 2 * x);  // -q^{2+2 sigma+2x}
    Real sum(0), largest(0);
    Real wn(1);  // q^{n(n-1)} q^{-2 sigma n} q^{-2nx} / (q^2;q^2)_n
    long n = 0;
    int quiet = 0;
    const int quiet_run = 5;
    for (; n < base.max_terms; ++n) {
        if (n > 0)
            wn *= pow_int(q, 2 * (n - 1) - 2 * x) /
                  (q2s * (Real(1) - pow_int(q2, n)));
        SeriesSpec<Real> s{{pow_int(q2, -x), pow_int(q2, -n)},
                           {Real(0)},
                           b2,
                           z,
                           x};
        const Real term = wn * phi_terminating(s);
        sum += term;
        largest = std::max(largest, abs(term));
        if (abs(term) <= base.eps * std::max(largest, Real(1))) {
            if (++quiet >= quiet_run) {
                ++n;
                break;
            }
        } else {
            quiet = 0;
        }
    }
    if (n >= base.max_terms)
        throw NonConvergence("h_norm: direct sum did not settle");
    if (terms_used) *terms_used = n;
    Real pref = pow_int(q, 2 * static_cast<long>(x) * x) * pow(q2s, Real(x));
    if (x % 2) pref = -pref;
    return pref * sum;
}

// ---------------------------------------------------------------------------
// Addition formula
// ---------------------------------------------------------------------------

template <class Real>
struct AdditionParams {
    int l;
    int p;
    Real x;
    Real c;
    Real d;
    QBase<Real> base;
};

namespace detail {

/// (-1)^l q^{-l(l+1)/2} (-qd/c;q)_l / (q^{l+1};q)_l — the constant in front
/// of the product side.
template <class Real>
Real addition_prefactor(int l, Real c, Real d, const QBase<Real>& base) {
    const Real q = base.q;
    Real v = pow_int(q, -static_cast<long>(l) * (l + 1) / 2) *
             qpochhammer_finite(-q * d / c, base, l) /
             qpochhammer_finite(pow_int(q, l + 1), base, l);
    return (l % 2) ? -v : v;
}

/// R_{l-m} evaluated at the lattice point x = l of the dual family with
/// s = c/d, N = 2l (argument q^{-l} - (d/c) q^{-l}).
template <class Real>
Real addition_R(int l, int m, Real c, Real d, const QBase<Real>& base) {
    DualQKrawtchoukParams<Real> kp{c / d, 2 * l, base};
    return dual_q_krawtchouk(l - m, l, kp);
}

/// Coefficient of P-hat_{p-m} in the expansion (m = 0 gives the 1/(q;q)_l
/// head term): (-1)^m d^m q^{m(p-l)} (q^p;q^{-1})_m / [(q;q)_{l-m} (q;q)_m],
/// with (q^p;q^{-1})_m = (q^{p-m+1};q)_m; identically zero for m > p.
template <class Real>
Real desc_coefficient(int l, int m, int p, Real d, const QBase<Real>& base) {
    if (m > p) return Real(0);
    const Real q = base.q;
    Real v = pow_int(d, m) * pow_int(q, static_cast<long>(m) * (p - l)) *
             qpochhammer_finite(pow_int(q, p - m + 1), base, m) /
             (qpochhammer_finite(q, base, l - m) *
              qpochhammer_finite(q, base, m));
    return (m % 2) ? -v : v;
}

/// Coefficient of P-hat_{p+m}:
/// (-1)^m q^{m(m+1)/2 - lm} / [c^m (q;q)_{l-m} (q;q)_m].
template <class Real>
Real asc_coefficient(int l, int m, Real c, const QBase<Real>& base) {
    const Real q = base.q;
    Real v = pow_int(q, static_cast<long>(m) * (m + 1) / 2 -
                            static_cast<long>(l) * m) /
             (pow_int(c, m) * qpochhammer_finite(q, base, l - m) *
              qpochhammer_finite(q, base, m));
    return (m % 2) ? -v : v;
}

}  // namespace detail

/// Product side: prefactor * P_l(x;1,1,c,d;q) * P-hat_p(x;0,0,c,d;q).
/// P_l comes from the recurrence path: the sweep draws x anywhere in
/// [-d-1, c+1], and near zeros of P_l the series path would surrender most
/// of the residual budget to cancellation.
template <class Real>
Real addition_lhs(const AdditionParams<Real>& ap) {
    BigQJacobiParams<Real> bp{Real(1), Real(1), ap.c, ap.d, ap.base};
    const auto Pl = big_q_jacobi_all(ap.l, ap.x, bp);
    const auto Phat =
        monic_big_q_jacobi00_all(ap.p, ap.x, ap.c, ap.d, ap.base);
    return detail::addition_prefactor(ap.l, ap.c, ap.d, ap.base) *
           Pl[static_cast<size_t>(ap.l)] * Phat[static_cast<size_t>(ap.p)];
}

/// Expansion side: the m = 0 head term plus the descending (P-hat_{p-m}) and
/// ascending (P-hat_{p+m}) sums. Descending terms with m > p carry the factor
/// (q^p;q^{-1})_m = 0 and are skipped outright.
template <class Real>
Real addition_rhs(const AdditionParams<Real>& ap) {
    const Real q = ap.base.q;
    const int l = ap.l, p = ap.p;
    const auto Phat =
        monic_big_q_jacobi00_all(p + l, ap.x, ap.c, ap.d, ap.base);
    Real sum = detail::addition_R(l, 0, ap.c, ap.d, ap.base) *
               little_q_jacobi(l, pow_int(q, p), Real(1), Real(1), ap.base) /
               qpochhammer_finite(q, ap.base, l) *
               Phat[static_cast<size_t>(p)];
    for (int m = 1; m <= l; ++m) {
        const Real R = detail::addition_R(l, m, ap.c, ap.d, ap.base);
        const Real qm = pow_int(q, m);
        if (m <= p)
            sum += detail::desc_coefficient(l, m, p, ap.d, ap.base) * R *
                   little_q_jacobi(l - m, pow_int(q, p - m), qm, qm, ap.base) *
                   Phat[static_cast<size_t>(p - m)];
        sum += detail::asc_coefficient(l, m, ap.c, ap.base) * R *
               little_q_jacobi(l - m, pow_int(q, p), qm, qm, ap.base) *
               Phat[static_cast<size_t>(p + m)];
    }
    return sum;
}

template <class Real>
VerificationReport verify_addition(const AdditionParams<Real>& ap,
                                   double tol) {
    return make_report("addition",
                       {{"l", double(ap.l)},
                        {"p", double(ap.p)},
                        {"x", to_double(ap.x)},
                        {"c", to_double(ap.c)},
                        {"d", to_double(ap.d)},
                        {"q", to_double(ap.base.q)}},
                       addition_lhs(ap), addition_rhs(ap), tol);
}

// ---------------------------------------------------------------------------
// Special case at c=1, d=0 (little q-Legendre form)
// ---------------------------------------------------------------------------

/// p_l(x;1,1;q) (q^{1-p}x;q)_p
///   = sum_{m=0}^l q^{m(m-l+p)} (q;q)_{l+m} / [(q;q)_{l-m} (q;q)_m^2]
///     * p_{l-m}(q^p;q^m,q^m;q) (q^{1-p-m}x;q)_{p+m}.
/// The shifted factorials reach magnitude q^{-p(p+2l-1)/2-ish}, so double
/// precision loses most digits by (l, p) ~ (4, 6); use extended precision
/// for tight residuals there.
template <class Real>
VerificationReport special_case_little(int l, int p, Real x,
                                       const QBase<Real>& base,
                                       double tol = 1e-10) {
    if (l < 0 || p < 0)
        throw DomainError("special_case_little: degrees must be >= 0");
    const Real q = base.q;
    const Real lhs = little_q_jacobi(l, x, Real(1), Real(1), base) *
                     qpochhammer_finite(pow_int(q, 1 - p) * x, base, p);
    Real rhs(0);
    for (int m = 0; m <= l; ++m) {
        const Real qqm = qpochhammer_finite(q, base, m);
        const Real coef =
            pow_int(q, static_cast<long>(m) * (m - l + p)) *
            qpochhammer_finite(q, base, l + m) /
            (qpochhammer_finite(q, base, l - m) * qqm * qqm);
        const Real qm = pow_int(q, m);
        rhs += coef * little_q_jacobi(l - m, pow_int(q, p), qm, qm, base) *
               qpochhammer_finite(pow_int(q, 1 - p - m) * x, base, p + m);
    }
    return make_report("special_case_little",
                       {{"l", double(l)},
                        {"p", double(p)},
                        {"x", to_double(x)},
                        {"q", to_double(base.q)}},
                       lhs, rhs, tol);
}

// ---------------------------------------------------------------------------
// Product formula
// ---------------------------------------------------------------------------

/// The constant C in front of the q-integral:
/// C = (-1)^{l+m} q^{-l(l+1)/2 - p(p-1)/2 + m(l-p-m)} c^{-p} d^{-p-m}
///     (-qd/c;q)_l (q;q)_{l-m}
///     / [(1-q) c (q^{l+1};q)_l (q^{m+1};q)_p (q,-d/c,-qc/d;q)_inf].
template <class Real>
Real product_constant(int l, int m, int p, Real c, Real d,
                      const QBase<Real>& base) {
    const Real q = base.q;
    const long e = -static_cast<long>(l) * (l + 1) / 2 -
                   static_cast<long>(p) * (p - 1) / 2 +
                   static_cast<long>(m) * (l - p - m);
    Real v = pow_int(q, e) * pow_int(c, -p) * pow_int(d, -(p + m)) *
             qpochhammer_finite(-q * d / c, base, l) *
             qpochhammer_finite(q, base, l - m) /
             ((Real(1) - q) * c *
              qpochhammer_finite(pow_int(q, l + 1), base, l) *
              qpochhammer_finite(pow_int(q, m + 1), base, p) *
              qpochhammer_infinite(q, base) *
              qpochhammer_infinite(-d / c, base) *
              qpochhammer_infinite(-q * c / d, base));
    return ((l + m) % 2) ? -v : v;
}

template <class Real>
struct ProductFormulaResult {
    VerificationReport main;                    // pairing against P-hat_{p+m}
    std::optional<VerificationReport> variant;  // pairing against P-hat_{p-m}
};

/// lhs = R_{l-m}(q^{-l} - (d/c) q^{-l}; c/d, 2l; q) p_{l-m}(q^p;q^m,q^m;q),
/// rhs = C * q-integral of P_l(x;1,1,c,d;q) P-hat_p P-hat_{p+m}(x;0,0,c,d;q)
/// against the weight over [-d, c]. When p >= m the expansion can equally be
/// paired against P-hat_{p-m}; the variant report checks that route (its
/// constant is the expansion prefactor divided by the descending coefficient
/// and the norm h_{p-m}).
template <class Real>
ProductFormulaResult<Real> product_formula(int l, int m, int p, Real c, Real d,
                                           const QBase<Real>& base,
                                           double tol = 1e-8,
                                           Real tail_rel = Real(1e-14)) {
    using std::sqrt;
    if (m < 0 || m > l)
        throw DomainError("product_formula: m must lie in [0, l]");
    const Real q = base.q;
    const Real qm = pow_int(q, m);
    BigQJacobiParams<Real> bp{Real(1), Real(1), c, d, base};

    const Real R = detail::addition_R(l, m, c, d, base);
    const auto pair_against = [&](int other, Real tail_scale, long* nodes) {
        auto integrand = [&](Real x) {
            const auto Pl = big_q_jacobi_all(l, x, bp);
            const auto Phat =
                monic_big_q_jacobi00_all(std::max(p, other), x, c, d, base);
            return Pl[static_cast<size_t>(l)] * Phat[static_cast<size_t>(p)] *
                   Phat[static_cast<size_t>(other)] *
                   big00_weight(x, c, d, base);
        };
        QIntegralSpec<Real> spec{-d, c, base, tail_rel * tail_scale};
        return q_integral(integrand, spec, nodes);
    };

    const Real hp = big00_norm(p, c, d, base);
    ProductFormulaResult<Real> out{
        VerificationReport{},
        std::nullopt,
    };

    {
        long nodes = 0;
        const Real integral = pair_against(
            p + m, sqrt(hp * big00_norm(p + m, c, d, base)), &nodes);
        const Real lhs = R * little_q_jacobi(l - m, pow_int(q, p), qm, qm, base);
        const Real rhs = product_constant(l, m, p, c, d, base) * integral;
        out.main = make_report("product_formula",
                               {{"l", double(l)},
                                {"m", double(m)},
                                {"p", double(p)},
                                {"c", to_double(c)},
                                {"d", to_double(d)},
                                {"q", to_double(base.q)}},
                               lhs, rhs, tol, {{"integral_nodes", double(nodes)}});
    }

    if (p >= m) {
        long nodes = 0;
        const Real hpm = big00_norm(p - m, c, d, base);
        const Real integral = pair_against(p - m, sqrt(hp * hpm), &nodes);
        const Real constant =
            detail::addition_prefactor(l, c, d, base) /
            (detail::desc_coefficient(l, m, p, d, base) * hpm);
        const Real lhs =
            R * little_q_jacobi(l - m, pow_int(q, p - m), qm, qm, base);
        const Real rhs = constant * integral;
        out.variant =
            make_report("product_formula_variant",
                        {{"l", double(l)},
                         {"m", double(m)},
                         {"p", double(p)},
                         {"c", to_double(c)},
                         {"d", to_double(d)},
                         {"q", to_double(base.q)}},
                        lhs, rhs, tol, {{"integral_nodes", double(nodes)}});
    }
    return out;
}

}  // namespace qleg
