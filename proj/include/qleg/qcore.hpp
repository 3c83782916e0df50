#pragma once

// q-calculus foundations: q-shifted factorials (finite/infinite), terminating
// basic hypergeometric series, and Jackson q-integrals with certified
// truncation. All routines are pure and templated on the scalar type.
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qleg/real.hpp"

namespace qleg {

// ---------------------------------------------------------------------------
// Error taxonomy
// ---------------------------------------------------------------------------
struct DomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NonConvergence : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DegreeOutOfRange : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct IllConditioned : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct EigensolveFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct TruncationTooSmall : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DegenerateRatio : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Configuration types
// ---------------------------------------------------------------------------

/// Base q together with the truncation policy for infinite products/sums.
template <class Real>
struct QBase {
    Real q;
    Real eps;        // relative tail tolerance for infinite products/sums
    long max_terms;  // hard cap on series/product length

    explicit QBase(Real q_, Real eps_ = default_eps<Real>(), long max_terms_ = 100000)
        : q(q_), eps(eps_), max_terms(max_terms_) {
        if (!(q > Real(0) && q < Real(1)))
            throw DomainError("QBase: q must lie strictly inside (0,1)");
        if (!(eps > Real(0)) || max_terms < 1)
            throw DomainError("QBase: eps must be > 0 and max_terms >= 1");
    }
};

/// A terminating basic hypergeometric sum. `degree` is the summation length;
/// one of the numerator parameters must be q^(-degree) (termination witness).
/// Zero parameters are legal anywhere: (0;q)_k = 1.
template <class Real>
struct SeriesSpec {
    std::vector<Real> numerator_params;
    std::vector<Real> denominator_params;
    QBase<Real> base;
    Real argument;
    int degree;
};

/// Jackson q-integral over [lower, upper], decomposed as
/// \int_0^{upper} - \int_0^{lower}.
template <class Real>
struct QIntegralSpec {
    Real lower;
    Real upper;
    QBase<Real> base;
    Real tail_bound;       // absolute tail tolerance per half-integral
    int quiet_run = 5;     // consecutive small increments required to stop
};

// ---------------------------------------------------------------------------
// q-shifted factorials
// ---------------------------------------------------------------------------

/// (a;q)_n = prod_{k=0}^{n-1} (1 - a q^k); empty product for n = 0.
template <class Real>
Real qpochhammer_finite(Real a, const QBase<Real>& base, long n) {
    if (n < 0) throw DomainError("qpochhammer_finite: n must be >= 0");
    Real prod(1), qk(1);
    for (long k = 0; k < n; ++k) {
        prod *= Real(1) - a * qk;
        qk *= base.q;
    }
    return prod;
}

/// (a;q)_inf truncated once the remaining factors are within base.eps of 1:
/// |log prod_{k>=K}(1-aq^k)| <= sum_{k>=K}|a|q^k/(1-|a|q^k) ~ |a|q^K/(1-q),
/// so stopping at |a|q^K < eps(1-q) certifies a relative tail below ~eps.
/// `terms_used`, when non-null, receives the factor count.
template <class Real>
Real qpochhammer_infinite(Real a, const QBase<Real>& base, long* terms_used = nullptr) {
    using std::abs;
    Real prod(1), qk(1);
    const Real stop = base.eps * (Real(1) - base.q);
    for (long k = 0; k < base.max_terms; ++k) {
        if (abs(a) * qk < stop) {
            if (terms_used) *terms_used = k;
            return prod;
        }
        prod *= Real(1) - a * qk;
        if (prod == Real(0)) {  // a = q^{-j}: exact zero, nothing left to refine
            if (terms_used) *terms_used = k + 1;
            return prod;
        }
        qk *= base.q;
    }
    throw NonConvergence("qpochhammer_infinite: max_terms reached before tail bound");
}

// ---------------------------------------------------------------------------
// Terminating basic hypergeometric series
// ---------------------------------------------------------------------------

/// sum_{k=0}^{degree} [prod (a_i;q)_k / prod (b_j;q)_k] z^k / (q;q)_k.
/// Validates the SeriesSpec invariants: a termination witness q^(-degree)
/// among the numerator parameters (duplicates allowed — coincident witnesses
/// merely terminate the sum earlier) and no denominator parameter q^(-j),
/// 0 <= j < degree, which would vanish inside the summation range.
template <class Real>
Real phi_terminating(const SeriesSpec<Real>& spec) {
    using std::abs;
    const Real q = spec.base.q;
    if (spec.degree < 0) throw DomainError("phi_terminating: degree must be >= 0");

    const Real witness = pow_int(q, -static_cast<long>(spec.degree));
    const Real rel_gate = Real(1e-10);
    bool has_witness = false;
    for (const Real& a : spec.numerator_params)
        if (abs(a - witness) <= rel_gate * abs(witness)) has_witness = true;
    if (!has_witness)
        throw DomainError("phi_terminating: no numerator parameter equals q^(-degree)");
    for (const Real& b : spec.denominator_params) {
        Real qj(1);  // q^{-j} scanned incrementally
        for (int j = 0; j < spec.degree; ++j) {
            if (abs(b * qj - Real(1)) <= rel_gate)
                throw DomainError("phi_terminating: denominator parameter q^(-j) vanishes in range");
            qj *= q;
        }
    }

    Real sum(1), term(1), qk(1);
    for (int k = 0; k < spec.degree; ++k) {
        Real num(1), den(1);
        for (const Real& a : spec.numerator_params) num *= Real(1) - a * qk;
        for (const Real& b : spec.denominator_params) den *= Real(1) - b * qk;
        den *= Real(1) - q * qk;  // the (q;q)_k factor
        if (den == Real(0))
            throw DomainError("phi_terminating: denominator Pochhammer vanished");
        term *= num / den * spec.argument;
        sum += term;
        if (term == Real(0)) break;  // a numerator parameter terminated the sum early
        qk *= q;
    }
    return sum;
}

// ---------------------------------------------------------------------------
// Jackson q-integral
// ---------------------------------------------------------------------------

namespace detail {

/// \int_0^a f d_q x = a(1-q) sum_{k>=0} f(a q^k) q^k. Stops after
/// `quiet_run` consecutive increments below tail_bound (or too small to move
/// the partial sum — the machine floor, so a tiny requested tail never stalls).
template <class Real, class F>
Real q_integral_zero(F&& f, Real a, const QBase<Real>& base, Real tail_bound,
                     int quiet_run, long* nodes_used) {
    using std::abs;
    if (a == Real(0)) {
        if (nodes_used) *nodes_used = 0;
        return Real(0);
    }
    const Real pref = a * (Real(1) - base.q);
    Real sum(0), qk(1);
    int quiet = 0;
    for (long k = 0; k < base.max_terms; ++k) {
        const Real term = pref * f(a * qk) * qk;
        const Real next = sum + term;
        quiet = (abs(term) < tail_bound || next == sum) ? quiet + 1 : 0;
        sum = next;
        qk *= base.q;
        if (quiet >= quiet_run) {
            if (nodes_used) *nodes_used = k + 1;
            return sum;
        }
    }
    throw NonConvergence("q_integral: max_terms exceeded");
}

}  // namespace detail

/// \int_{lower}^{upper} f d_q x = \int_0^{upper} - \int_0^{lower}.
/// `nodes_used`, when non-null, receives the total node count of both halves.
template <class Real, class F>
Real q_integral(F&& f, const QIntegralSpec<Real>& spec, long* nodes_used = nullptr) {
    long n_up = 0, n_lo = 0;
    const Real up = detail::q_integral_zero(f, spec.upper, spec.base, spec.tail_bound,
                                            spec.quiet_run, &n_up);
    const Real lo = detail::q_integral_zero(f, spec.lower, spec.base, spec.tail_bound,
                                            spec.quiet_run, &n_lo);
    if (nodes_used) *nodes_used = n_up + n_lo;
    return up - lo;
}

}  // namespace qleg
