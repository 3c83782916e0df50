#include "qleg/classical.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qleg/families.hpp"
#include "qleg/identities.hpp"

namespace qleg {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;

// Errors at or below this are "converged to roundoff": they count as
// non-increasing in the monotonicity check and as passing any decrease
// requirement. Genuine scan errors in the implemented ranges sit above 1e-4,
// roundoff and integral-truncation noise below 1e-11.
constexpr double kZeroFloor = 1e-10;

double factorial(int n) {
    double f = 1;
    for (int k = 2; k <= n; ++k) f *= k;
    return f;
}

/// Rising factorial (a)_k = a (a+1) ... (a+k-1).
double rising(double a, int k) {
    double f = 1;
    for (int j = 0; j < k; ++j) f *= a + j;
    return f;
}

/// (l+m)! / ((l-m)! (m!)^2), the coefficient shared by the classical
/// addition and product formulas. Exact in double for l <= 18.
double addition_coefficient(int l, int m) {
    double f = 1;
    for (int j = l - m + 1; j <= l + m; ++j) f *= j;  // (l+m)!/(l-m)!
    const double mf = factorial(m);
    return f / (mf * mf);
}

/// Strict decrease along the aggregated errors, with the converged floor.
bool monotone_with_floor(const std::vector<double>& err) {
    for (size_t i = 1; i < err.size(); ++i)
        if (!(err[i] < err[i - 1] || err[i] <= kZeroFloor)) return false;
    return true;
}

/// Overall-decrease rule shared by the scans: last error below the first,
/// or already at the converged floor.
bool overall_decrease(const std::vector<double>& err) {
    if (err.empty()) return false;
    return err.back() <= kZeroFloor || err.back() < err.front();
}

void validate_p_values(const std::vector<int>& p_values, const char* who) {
    if (p_values.empty())
        throw DomainError(std::string(who) + ": p_values must be nonempty");
    for (size_t i = 0; i < p_values.size(); ++i) {
        if (p_values[i] < 1)
            throw DomainError(std::string(who) + ": p_values must be >= 1");
        if (i > 0 && p_values[i] <= p_values[i - 1])
            throw DomainError(std::string(who) +
                              ": p_values must be strictly increasing");
    }
}

// ---------------------------------------------------------------------------
// limit_family_scan internals
// ---------------------------------------------------------------------------

template <class Real>
double family_q_value(LimitFamily family, const LimitFamilyParams& P, double qd,
                      double probe, long max_terms) {
    using std::pow;
    const Real q(qd);
    const QBase<Real> base(q, default_eps<Real>(), max_terms);
    switch (family) {
        case LimitFamily::big_q_jacobi: {
            BigQJacobiParams<Real> bp{pow(q, Real(P.alpha)), pow(q, Real(P.beta)),
                                      Real(P.c), Real(P.d), base};
            return to_double(big_q_jacobi(P.n, Real(probe), bp));
        }
        case LimitFamily::little_q_jacobi:
            return to_double(little_q_jacobi(P.n, Real(probe),
                                             pow(q, Real(P.alpha)),
                                             pow(q, Real(P.beta)), base));
        case LimitFamily::dual_q_krawtchouk: {
            DualQKrawtchoukParams<Real> dp{Real(P.c) / Real(P.d), 2 * P.l, base};
            return to_double(dual_q_krawtchouk(P.l - P.m, P.l, dp));
        }
    }
    throw DomainError("limit_family_scan: unknown family");
}

double family_limit_value(LimitFamily family, const LimitFamilyParams& P,
                          double probe) {
    switch (family) {
        case LimitFamily::big_q_jacobi:
            return jacobi_R(P.n, P.alpha, P.beta,
                            (2 * probe + P.d - P.c) / (P.c + P.d));
        case LimitFamily::little_q_jacobi:
            return jacobi_R(P.n, P.alpha, P.beta, 1 - 2 * probe);
        case LimitFamily::dual_q_krawtchouk: {
            const int deg = P.l - P.m;
            return rising(P.m + 1, deg) / rising(P.l + P.m + 1, deg) *
                   std::pow(1 + P.d / P.c, deg) *
                   jacobi_R(deg, double(P.m), double(P.m),
                            (P.c - P.d) / (P.c + P.d));
        }
    }
    throw DomainError("limit_family_scan: unknown family");
}

// ---------------------------------------------------------------------------
// kernel_limit_scan internals
// ---------------------------------------------------------------------------

template <class Real>
ErrorTableRow kernel_row(const std::function<double(double)>& f, int m, int p,
                         double r, double cd_, double dd_, long max_terms) {
    using std::pow;
    using std::sqrt;
    const Real c(cd_), d(dd_);
    const Real q = pow(Real(r), Real(1) / Real(p));
    const QBase<Real> base(q, default_eps<Real>(), max_terms);
    const int top = p + m;

    // z-independent data: recurrence coefficients and the degree-0 norm.
    std::vector<Real> a(top + 1), b(std::max(top, 1));
    for (int k = 1; k <= top; ++k) a[k] = orthonormal_a(k, q, c, d);
    for (int k = 0; k < top; ++k) b[k] = orthonormal_b(k, q, c, d);
    const Real p0 = Real(1) / sqrt(big00_norm(0, c, d, base));

    auto integrand = [&](Real z) {
        Real prev(0), cur = p0, vp(0);
        if (p == 0) vp = cur;
        for (int k = 0; k < top; ++k) {
            const Real next =
                ((z - b[k]) * cur - (k ? a[k] * prev : Real(0))) / a[k + 1];
            prev = cur;
            cur = next;
            if (k + 1 == p) vp = cur;
        }
        return Real(f(to_double(z))) * vp * cur * big00_weight(z, c, d, base);
    };
    QIntegralSpec<Real> spec{-d, c, base, Real(1e-12)};
    long nodes = 0;
    const double lhs = to_double(q_integral(integrand, spec, &nodes));

    // Arcsine-kernel side by Chebyshev--Gauss quadrature after z = B + 2At.
    const double A = std::sqrt(r * cd_ * dd_ * (1 - r)), B = r * (cd_ - dd_);
    const int K = 64;
    double rhs = 0;
    for (int k = 1; k <= K; ++k) {
        const double t = std::cos(kPi * (2 * k - 1) / (2 * K));
        rhs += f(B + 2 * A * t) * chebyshev_T(m, t);
    }
    rhs /= K;

    ErrorTableRow row;
    row.p = p;
    row.q = to_double(q);
    row.probe = 0;  // single canonical pairing per p
    row.q_value = lhs;
    row.limit_value = rhs;
    row.abs_error = std::abs(lhs - rhs);
    return row;
}

// ---------------------------------------------------------------------------
// ratio_asymptotic internals
// ---------------------------------------------------------------------------

template <class Real>
double monic_ratio(int p, int m, double x, double c, double d, double qd,
                   long max_terms) {
    const QBase<Real> base(Real(qd), default_eps<Real>(), max_terms);
    const auto vals = monic_big_q_jacobi00_all(p + std::max(m, 0), Real(x),
                                               Real(c), Real(d), base);
    const Real den = vals[static_cast<size_t>(p)];
    using std::abs;
    if (!(abs(den) > Real(1e-280)))
        throw DegenerateRatio("ratio_asymptotic: denominator vanishes");
    return to_double(vals[static_cast<size_t>(p + m)] / den);
}

}  // namespace

// ---------------------------------------------------------------------------
// Scans
// ---------------------------------------------------------------------------

LimitScanResult limit_family_scan(const LimitScanConfig& cfg, LimitFamily family,
                                  const LimitFamilyParams& params) {
    if (!(cfg.r > 0 && cfg.r < 1))
        throw DomainError("limit_family_scan: r must lie in (0,1)");
    validate_p_values(cfg.p_values, "limit_family_scan");
    std::vector<double> probes = params.probes;
    switch (family) {
        case LimitFamily::big_q_jacobi:
            if (params.n < 0)
                throw DomainError("limit_family_scan: degree must be >= 0");
            if (!(params.alpha > -1) || !(params.beta > -1))
                throw DomainError("limit_family_scan: need alpha, beta > -1");
            if (!(params.c > 0) || !(params.d > 0))
                throw DomainError("limit_family_scan: need c > 0 and d > 0");
            if (probes.empty())
                for (int k = 1; k <= 5; ++k)
                    probes.push_back(-params.d +
                                     (params.c + params.d) * k / 6.0);
            break;
        case LimitFamily::little_q_jacobi:
            if (params.n < 0)
                throw DomainError("limit_family_scan: degree must be >= 0");
            if (!(params.alpha > -1) || !(params.beta > -1))
                throw DomainError("limit_family_scan: need alpha, beta > -1");
            if (probes.empty()) probes = {0.1, 0.3, 0.5, 0.7, 0.9};
            break;
        case LimitFamily::dual_q_krawtchouk:
            if (params.l < 0 || params.m < 0 || params.m > params.l)
                throw DomainError("limit_family_scan: need 0 <= m <= l");
            if (!(params.c > 0) || !(params.d > 0))
                throw DomainError("limit_family_scan: need c > 0 and d > 0");
            probes = {double(params.l)};  // canonical lattice evaluation
            break;
    }

    LimitScanResult res;
    res.target = cfg.target;
    for (int p : cfg.p_values) {
        const double qd = std::pow(cfg.r, 1.0 / p);
        double worst = 0;
        for (double probe : probes) {
            const double qv =
                qd > 0.99
                    ? family_q_value<Extended>(family, params, qd, probe,
                                               cfg.max_terms)
                    : family_q_value<double>(family, params, qd, probe,
                                             cfg.max_terms);
            const double lv = family_limit_value(family, params, probe);
            ErrorTableRow row{p, qd, probe, qv, lv, std::abs(qv - lv)};
            worst = std::max(worst, row.abs_error);
            res.rows.push_back(row);
        }
        res.p_values.push_back(p);
        res.max_error_per_p.push_back(worst);
    }
    res.monotone_decreasing = monotone_with_floor(res.max_error_per_p);
    res.passed = overall_decrease(res.max_error_per_p) &&
                 res.max_error_per_p.back() <= cfg.final_cap;
    return res;
}

LimitScanResult ratio_asymptotic(int m, double x, double r, double c, double d,
                                 const std::vector<int>& p_values,
                                 long max_terms) {
    if (!(r > 0 && r < 1))
        throw DomainError("ratio_asymptotic: r must lie in (0,1)");
    if (!(c > 0) || !(d > 0))
        throw DomainError("ratio_asymptotic: need c > 0 and d > 0");
    if (x >= -d && x <= c)
        throw DomainError("ratio_asymptotic: x must lie off [-d, c]");
    validate_p_values(p_values, "ratio_asymptotic");
    if (p_values.front() + m < 0)
        throw DomainError("ratio_asymptotic: need p + m >= 0 for every p");

    const double A2 = c * d * r * (1 - r);
    const double xi = (x - r * (c - d)) / (2 * std::sqrt(A2));
    const double target =
        std::pow(A2, m / 2.0) * pow_int(rho_map(xi), static_cast<long>(m));

    LimitScanResult res;
    res.target = "ratio_asymptotic";
    for (int p : p_values) {
        const double qd = std::pow(r, 1.0 / p);
        double ratio;
        try {
            ratio = qd > 0.99
                        ? monic_ratio<Extended>(p, m, x, c, d, qd, max_terms)
                        : monic_ratio<double>(p, m, x, c, d, qd, max_terms);
        } catch (const DegenerateRatio&) {
            res.skipped.push_back(p);
            continue;
        }
        ErrorTableRow row{p, qd, x, ratio, target, std::abs(ratio - target)};
        res.rows.push_back(row);
        res.p_values.push_back(p);
        res.max_error_per_p.push_back(row.abs_error);
    }
    if (res.p_values.empty())
        throw DegenerateRatio(
            "ratio_asymptotic: denominator vanished at every p");
    res.monotone_decreasing = monotone_with_floor(res.max_error_per_p);
    res.passed = res.monotone_decreasing;
    return res;
}

LimitScanResult kernel_limit_scan(const std::function<double(double)>& f, int m,
                                  double r, double c, double d,
                                  const std::vector<int>& p_values,
                                  long max_terms) {
    if (!f) throw DomainError("kernel_limit_scan: f must be callable");
    if (m < 0) throw DomainError("kernel_limit_scan: need m >= 0");
    if (!(r > 0 && r < 1))
        throw DomainError("kernel_limit_scan: r must lie in (0,1)");
    if (!(c > 0) || !(d > 0))
        throw DomainError("kernel_limit_scan: need c > 0 and d > 0");
    validate_p_values(p_values, "kernel_limit_scan");

    LimitScanResult res;
    res.target = "kernel_limit";
    for (int p : p_values) {
        const double qd = std::pow(r, 1.0 / p);
        const ErrorTableRow row =
            qd > 0.99 ? kernel_row<Extended>(f, m, p, r, c, d, max_terms)
                      : kernel_row<double>(f, m, p, r, c, d, max_terms);
        res.rows.push_back(row);
        res.p_values.push_back(p);
        res.max_error_per_p.push_back(row.abs_error);
    }
    res.monotone_decreasing = monotone_with_floor(res.max_error_per_p);
    res.passed = overall_decrease(res.max_error_per_p);
    return res;
}

// ---------------------------------------------------------------------------
// Classical addition and product formulas
// ---------------------------------------------------------------------------

VerificationReport classical_addition(int l, double x, double y, double t,
                                      double tol) {
    if (l < 0) throw DomainError("classical_addition: degree must be >= 0");
    if (!(std::abs(x) < 1) || !(std::abs(y) < 1))
        throw DomainError("classical_addition: need x, y in (-1, 1)");
    if (!(std::abs(t) <= 1))
        throw DomainError("classical_addition: need t in [-1, 1]");
    const double s = std::sqrt((1 - x * x) * (1 - y * y));
    const double lhs = jacobi_R(l, 0.0, 0.0, x * y + t * s);
    double rhs = jacobi_R(l, 0.0, 0.0, x) * jacobi_R(l, 0.0, 0.0, y);
    double sm = 1;
    for (int m = 1; m <= l; ++m) {
        sm *= s;
        rhs += 2 * addition_coefficient(l, m) * std::ldexp(sm, -2 * m) *
               jacobi_R(l - m, double(m), double(m), x) *
               jacobi_R(l - m, double(m), double(m), y) * chebyshev_T(m, t);
    }
    return make_report(
        "classical_addition",
        {{"l", double(l)}, {"x", x}, {"y", y}, {"t", t}}, lhs, rhs, tol);
}

VerificationReport classical_addition_parameterized(int l, double x, double r,
                                                    double c, double d,
                                                    double tol) {
    if (l < 0)
        throw DomainError("classical_addition_parameterized: degree must be >= 0");
    if (!(r > 0 && r < 1))
        throw DomainError("classical_addition_parameterized: r must lie in (0,1)");
    if (!(c > 0) || !(d > 0))
        throw DomainError("classical_addition_parameterized: need c > 0, d > 0");
    const double X = (d - c) / (c + d);
    const double Y = 1 - 2 * r;
    const double T = (x - r * (c - d)) / (2 * std::sqrt(r * c * d * (1 - r)));
    const double lhs = jacobi_R(l, 0.0, 0.0, (2 * x + d - c) / (c + d));
    double rhs = jacobi_R(l, 0.0, 0.0, X) * jacobi_R(l, 0.0, 0.0, Y);
    const double gs = std::sqrt((d / c) * r * (1 - r));
    const double u = 1 / (1 + d / c);
    double gm = 1, um = 1;
    for (int m = 1; m <= l; ++m) {
        gm *= gs;
        um *= u;
        rhs += 2 * addition_coefficient(l, m) * um * gm *
               jacobi_R(l - m, double(m), double(m), X) *
               jacobi_R(l - m, double(m), double(m), Y) * chebyshev_T(m, T);
    }
    return make_report(
        "classical_addition_parameterized",
        {{"l", double(l)}, {"x", x}, {"r", r}, {"c", c}, {"d", d}}, lhs, rhs,
        tol);
}

VerificationReport classical_product(int l, int m, double x, double y,
                                     double tol) {
    if (l < 0) throw DomainError("classical_product: degree must be >= 0");
    if (m < 0 || m > l)
        throw DomainError("classical_product: need 0 <= m <= l");
    if (!(std::abs(x) < 1) || !(std::abs(y) < 1))
        throw DomainError("classical_product: need x, y in (-1, 1)");
    // The whole check runs in extended precision: the quadrature sum adds
    // O(1) terms that cancel down to O(s^m), so for m near l and s small the
    // double path keeps only ~11 digits of the integral -- not enough when
    // the products of Jacobi values on the left are themselves near a zero.
    using R = Extended;
    const R pi("3.14159265358979323846264338327950288419716939937510");
    const R rx(x), ry(y);
    const R s = sqrt((1 - rx * rx) * (1 - ry * ry));
    const R lhs =
        jacobi_R(l - m, R(m), R(m), rx) * jacobi_R(l - m, R(m), R(m), ry);
    // Chebyshev--Gauss: int g(t)/sqrt(1-t^2) dt = (pi/K) sum g(t_k), exact
    // for polynomial degree <= 2K-1; here deg g = l+m and K = l+m+4. The
    // factor pi cancels against the prefactor.
    const int K = l + m + 4;
    R sum(0);
    for (int k = 1; k <= K; ++k) {
        const R t = cos(pi * (2 * k - 1) / (2 * K));
        sum += jacobi_R(l, R(0), R(0), rx * ry + t * s) * chebyshev_T(m, t);
    }
    const R mf(factorial(m));
    const R rhs = pow_int(R(2), 2 * m) * R(factorial(l - m)) * mf * mf /
                  (R(factorial(l + m)) * K) * pow_int(s, -(long)m) * sum;
    return make_report(
        "classical_product",
        {{"l", double(l)}, {"m", double(m)}, {"x", x}, {"y", y}}, lhs, rhs,
        tol);
}

}  // namespace qleg
