// qleg — command-line front end for the q-orthogonal-polynomial library.
//
// Subcommands:
//   eval        evaluate one polynomial family at given points
//   verify      run an identity-verification suite, stream one report per line
//   spectrum    eigenvalues of the truncated tridiagonal operator vs the
//               closed-form geometric branches
//   limit-scan  q -> 1 convergence error tables (CSV)
//
// Exit status: 0 all checks passed / table written; 1 at least one report
// failed; 2 usage error; 3 a computation failed to converge.
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qleg/classical.hpp"
#include "qleg/families.hpp"
#include "qleg/identities.hpp"
#include "qleg/qcore.hpp"
#include "qleg/report.hpp"
#include "qleg/report_json.hpp"
#include "qleg/su2_operator.hpp"
#include "qleg/sweep.hpp"

namespace {

using namespace qleg;

// ---------------------------------------------------------------------------
// Parsed options (one shared record; only the active subcommand reads it)
// ---------------------------------------------------------------------------

struct Options {
    double q = 0.5;
    double sigma = 0.3;
    double a = 1.0, b = 1.0;
    double c = 1.0, d = 1.0;
    double alpha = 0.0, beta = 0.0;
    int l = 0;
    int p = 0;
    int m = 1;
    std::vector<double> xs;
    int dim = 50;
    int count = 10;
    double r = 0.5;
    int f_power = 1;
    std::vector<int> p_values{4, 8, 16, 32};
    std::string precision = "double";
    double tol = 0.0;
    std::uint64_t seed = 20240819ULL;
    std::string output;
    std::string format;
    long max_terms = 100000;

    // which flags were given explicitly
    bool q_set = false, sigma_set = false, a_set = false, c_set = false,
         d_set = false, l_set = false, p_set = false, dim_set = false,
         tol_set = false;
};

double tol_or(const Options& o, double fallback) {
    return o.tol_set ? o.tol : fallback;
}

// ---------------------------------------------------------------------------
// Output helpers
// ---------------------------------------------------------------------------

struct OutputStream {
    std::ofstream file;
    std::ostream* os = &std::cout;

    explicit OutputStream(const std::string& path) {
        if (!path.empty()) {
            file.open(path);
            if (!file)
                throw DomainError("cannot open output file: " + path);
            os = &file;
        }
    }
    std::ostream& get() { return *os; }
};

std::string flatten(const std::map<std::string, double>& m) {
    std::ostringstream os;
    os << std::setprecision(17);
    bool first = true;
    for (const auto& [k, v] : m) {
        if (!first) os << ';';
        os << k << '=' << v;
        first = false;
    }
    return os.str();
}

void write_reports_csv(std::ostream& os,
                       const std::vector<VerificationReport>& reports) {
    os << "identity_id,params,lhs,rhs,abs_residual,rel_residual,tolerance,"
          "passed,truncation,precision\n";
    os << std::setprecision(17);
    for (const auto& r : reports)
        os << r.identity_id << ',' << flatten(r.params) << ',' << r.lhs << ','
           << r.rhs << ',' << r.abs_residual << ',' << r.rel_residual << ','
           << r.tolerance << ',' << (r.passed ? "true" : "false") << ','
           << flatten(r.truncation) << ',' << r.precision << '\n';
}

void write_reports_human(std::ostream& os,
                         const std::vector<VerificationReport>& reports) {
    os << std::setprecision(3);
    size_t failed = 0;
    for (const auto& r : reports) {
        if (!r.passed) ++failed;
        os << (r.passed ? "[PASS] " : "[FAIL] ") << r.identity_id << "  ";
        bool first = true;
        for (const auto& [k, v] : r.params) {
            if (!first) os << ' ';
            os << k << '=' << v;
            first = false;
        }
        os << "  rel=" << r.rel_residual << " abs=" << r.abs_residual
           << " tol=" << r.tolerance << '\n';
    }
    os << reports.size() << " reports, " << failed << " failed\n";
}

// ---------------------------------------------------------------------------
// verify suites
// ---------------------------------------------------------------------------

template <class Real>
void addition_suite(const Options& o, std::vector<VerificationReport>& out) {
    const double tol = tol_or(o, 1e-8);
    const std::vector<int> ls =
        o.l_set ? std::vector<int>{o.l} : std::vector<int>{0, 1, 2, 3, 4};
    const std::vector<int> ps =
        o.p_set ? std::vector<int>{o.p}
                : std::vector<int>{0, 1, 2, 3, 4, 5, 6};
    const std::vector<double> qs =
        o.q_set ? std::vector<double>{o.q}
                : std::vector<double>{0.3, 0.5, 0.7, 0.9};
    SplitMix64 rng(o.seed);
    for (double q : qs) {
        QBase<Real> base(Real(q), default_eps<Real>(), o.max_terms);
        for (int l : ls)
            for (int p : ps) {
                const bool pinned = o.c_set && o.d_set && !o.xs.empty();
                const int reps = pinned ? 1 : 3;
                for (int rep = 0; rep < reps; ++rep) {
                    const double c =
                        o.c_set ? o.c : 0.25 + 1.75 * rng.uniform();
                    const double d =
                        o.d_set ? o.d : 0.25 + 1.75 * rng.uniform();
                    const double x =
                        !o.xs.empty()
                            ? o.xs[static_cast<size_t>(rep) % o.xs.size()]
                            : rng.uniform(-d - 1.0, c + 1.0);
                    AdditionParams<Real> ap{l,       p,       Real(x),
                                            Real(c), Real(d), base};
                    out.push_back(verify_addition(ap, tol));
                }
            }
    }
    // c = 1, d = 0 degeneration (little q-Legendre form).
    const double stol = tol_or(o, 1e-10);
    const std::vector<double> sqs =
        o.q_set ? std::vector<double>{o.q} : std::vector<double>{0.4, 0.8};
    for (double q : sqs) {
        QBase<Real> base(Real(q), default_eps<Real>(), o.max_terms);
        for (int l : ls)
            for (int p : ps) {
                const int reps = o.xs.empty() ? 2 : 1;
                for (int rep = 0; rep < reps; ++rep) {
                    const double x =
                        o.xs.empty() ? rng.uniform() : o.xs.front();
                    out.push_back(
                        special_case_little(l, p, Real(x), base, stol));
                }
            }
    }
}

template <class Real>
void product_suite(const Options& o, std::vector<VerificationReport>& out) {
    const double tol = tol_or(o, 1e-8);
    const std::vector<int> ls =
        o.l_set ? std::vector<int>{o.l} : std::vector<int>{0, 1, 2, 3};
    const std::vector<int> ps =
        o.p_set ? std::vector<int>{o.p} : std::vector<int>{0, 1, 2};
    struct Setting {
        double c, d, q;
    };
    std::vector<Setting> settings;
    if (o.c_set || o.d_set || o.q_set)
        settings = {{o.c, o.d, o.q}};
    else
        settings = {{1.0, 0.6, 0.5}, {0.7, 1.1, 0.7}};
    for (const auto& s : settings) {
        QBase<Real> base(Real(s.q), default_eps<Real>(), o.max_terms);
        for (int l : ls)
            for (int m = 0; m <= l; ++m)
                for (int p : ps) {
                    auto res = product_formula(l, m, p, Real(s.c), Real(s.d),
                                               base, tol, Real(1e-14));
                    out.push_back(res.main);
                    if (res.variant) out.push_back(*res.variant);
                }
    }
}

template <class Real>
void orthogonality_suite(const Options& o,
                         std::vector<VerificationReport>& out) {
    const double tol = tol_or(o, 1e-8);
    const int nmax = o.l_set ? o.l : 6;
    const double c = o.c_set ? o.c : 1.2;
    const double d = o.d_set ? o.d : 0.8;
    const double q = o.q_set ? o.q : 0.5;
    QBase<Real> base(Real(q), default_eps<Real>(), o.max_terms);
    for (int n = 0; n <= nmax; ++n)
        for (int m = n; m <= nmax; ++m)
            out.push_back(
                orthogonality_big00(n, m, Real(c), Real(d), base, tol));
}

template <class Real>
void charlier_suite(const Options& o, std::vector<VerificationReport>& out) {
    const double tol = tol_or(o, 1e-9);
    const int nmax = o.l_set ? o.l : 4;
    const std::vector<double> as =
        o.a_set ? std::vector<double>{o.a}
                : std::vector<double>{0.5, 1.5, 3.0};
    const std::vector<double> qs =
        o.q_set ? std::vector<double>{o.q} : std::vector<double>{0.4, 0.7};
    for (double q : qs) {
        QBase<Real> base(Real(q), default_eps<Real>(), o.max_terms);
        for (double a : as)
            for (int n = 0; n <= nmax; ++n)
                for (int m = n; m <= nmax; ++m) {
                    out.push_back(q_charlier_orthogonality(
                        n, m, Real(a), base, CharlierKind::same, tol));
                    out.push_back(q_charlier_orthogonality(
                        n, m, Real(a), base, CharlierKind::cross, tol));
                }
    }
}

void operator_suite(const Options& o, std::vector<VerificationReport>& out) {
    const double tol = tol_or(o, 1e-9);
    const std::vector<int> ls =
        o.l_set ? std::vector<int>{o.l} : std::vector<int>{0, 1, 2, 3};
    const std::vector<double> sigmas = o.sigma_set
                                           ? std::vector<double>{o.sigma}
                                           : std::vector<double>{0.3, 0.8};
    const double q = o.q_set ? o.q : 0.5;
    QBase<double> base(q, default_eps<double>(), o.max_terms);
    for (Gauge g : {Gauge::real_gauged, Gauge::complex_mode})
        for (double sigma : sigmas) {
            TruncatedRep rep(o.dim, sigma, base, g);
            for (int l : ls) out.push_back(operator_identity(l, rep, tol));
        }
}

VerificationReport scan_report(const std::string& id,
                               const LimitScanResult& res,
                               std::map<std::string, double> params) {
    VerificationReport r;
    r.identity_id = id;
    r.params = std::move(params);
    const double first =
        res.max_error_per_p.empty() ? 0.0 : res.max_error_per_p.front();
    const double final_err =
        res.max_error_per_p.empty() ? 0.0 : res.max_error_per_p.back();
    r.lhs = final_err;
    r.rhs = 0.0;
    r.abs_residual = final_err;
    r.rel_residual = final_err;
    r.tolerance = 0.05;
    r.passed = res.passed;
    r.truncation = {{"p_count", double(res.p_values.size())},
                    {"monotone", res.monotone_decreasing ? 1.0 : 0.0},
                    {"first_error", first}};
    r.precision = "double";
    return r;
}

void limits_suite(const Options& o, std::vector<VerificationReport>& out) {
    const double tol = tol_or(o, 1e-12);
    const int lmax = o.l_set ? o.l : 6;
    SplitMix64 rng(o.seed ^ 0x9e3779b97f4a7c15ULL);
    for (int l = 0; l <= lmax; ++l)
        for (int rep = 0; rep < 5; ++rep) {
            const double x = rng.uniform(-0.85, 0.85);
            const double y = rng.uniform(-0.85, 0.85);
            const double t = rng.uniform(-1.0, 1.0);
            out.push_back(classical_addition(l, x, y, t, tol));
        }
    for (int l = 0; l <= std::min(lmax, 4); ++l)
        for (int m = 0; m <= l; ++m) {
            const double x = rng.uniform(-0.85, 0.85);
            const double y = rng.uniform(-0.85, 0.85);
            out.push_back(classical_product(l, m, x, y, tol));
        }
    for (int l = 0; l <= std::min(lmax, 4); ++l) {
        const double r = rng.uniform(0.15, 0.85);
        const double c = rng.uniform(0.3, 2.0);
        const double d = rng.uniform(0.3, 2.0);
        const double A = std::sqrt(r * c * d * (1.0 - r));
        const double B = r * (c - d);
        const double x = B + 2.0 * A * rng.uniform(-0.99, 0.99);
        out.push_back(classical_addition_parameterized(l, x, r, c, d, tol));
    }

    // q -> 1 convergence scans, one representative per limit route.
    const std::vector<int> pvals{4, 8, 16, 32};
    {
        LimitScanConfig cfg{0.5, pvals, "big", 0.05, o.max_terms};
        LimitFamilyParams fp;
        fp.n = 3;
        fp.c = 1.2;
        fp.d = 0.8;
        out.push_back(scan_report(
            "limit_scan_big",
            limit_family_scan(cfg, LimitFamily::big_q_jacobi, fp),
            {{"n", 3}, {"c", 1.2}, {"d", 0.8}, {"r", 0.5}}));
    }
    {
        LimitScanConfig cfg{0.5, pvals, "little", 0.05, o.max_terms};
        LimitFamilyParams fp;
        fp.n = 1;
        out.push_back(scan_report(
            "limit_scan_little",
            limit_family_scan(cfg, LimitFamily::little_q_jacobi, fp),
            {{"n", 1}, {"r", 0.5}}));
    }
    {
        LimitScanConfig cfg{0.5, pvals, "dual", 0.05, o.max_terms};
        LimitFamilyParams fp;
        fp.l = 2;
        fp.m = 1;
        fp.c = 1.0;
        fp.d = 0.5;
        out.push_back(scan_report(
            "limit_scan_dual",
            limit_family_scan(cfg, LimitFamily::dual_q_krawtchouk, fp),
            {{"l", 2}, {"m", 1}, {"c", 1.0}, {"d", 0.5}, {"r", 0.5}}));
    }
    out.push_back(scan_report(
        "limit_scan_ratio",
        ratio_asymptotic(1, 2.0, 0.5, 1.0, 1.0, pvals, o.max_terms),
        {{"m", 1}, {"x", 2.0}, {"r", 0.5}, {"c", 1.0}, {"d", 1.0}}));
    out.push_back(scan_report(
        "limit_scan_kernel",
        kernel_limit_scan([](double z) { return z; }, 1, 0.5, 1.0, 1.0,
                          pvals, o.max_terms),
        {{"m", 1}, {"r", 0.5}, {"c", 1.0}, {"d", 1.0}}));
}

template <class Real>
void dispatch_suites(const Options& o, const std::string& suite,
                     std::vector<VerificationReport>& out) {
    if (suite == "addition" || suite == "all") addition_suite<Real>(o, out);
    if (suite == "product" || suite == "all") product_suite<Real>(o, out);
    if (suite == "orthogonality" || suite == "all")
        orthogonality_suite<Real>(o, out);
    if (suite == "charlier" || suite == "all") charlier_suite<Real>(o, out);
    // The operator and classical layers run in double precision.
    if (suite == "operator" || suite == "all") operator_suite(o, out);
    if (suite == "limits" || suite == "all") limits_suite(o, out);
}

int run_verify(const Options& o, const std::string& suite) {
    std::vector<VerificationReport> reports;
    if (o.precision == "extended")
        dispatch_suites<Extended>(o, suite, reports);
    else
        dispatch_suites<double>(o, suite, reports);
    sort_reports(reports);

    OutputStream out(o.output);
    const std::string fmt = o.format.empty() ? "json" : o.format;
    if (fmt == "json")
        write_json_lines(out.get(), reports);
    else if (fmt == "csv")
        write_reports_csv(out.get(), reports);
    else
        write_reports_human(out.get(), reports);

    const bool all_passed =
        std::all_of(reports.begin(), reports.end(),
                    [](const VerificationReport& r) { return r.passed; });
    return all_passed ? 0 : 1;
}

// ---------------------------------------------------------------------------
// eval
// ---------------------------------------------------------------------------

int run_eval(const Options& o, const std::string& family) {
    const int n = o.l;
    if (n < 0) throw DomainError("eval: degree must be >= 0");
    std::vector<double> xs = o.xs.empty() ? std::vector<double>{0.5} : o.xs;

    QBase<double> base(o.q, default_eps<double>(), o.max_terms);
    std::map<std::string, double> shown{{"q", o.q}};
    auto value_at = [&](double x) -> double {
        if (family == "little-q-jacobi") {
            shown["a"] = o.a;
            shown["b"] = o.b;
            return little_q_jacobi(n, x, o.a, o.b, base);
        }
        if (family == "big-q-jacobi") {
            shown["a"] = o.a;
            shown["b"] = o.b;
            shown["c"] = o.c;
            shown["d"] = o.d;
            BigQJacobiParams<double> bp{o.a, o.b, o.c, o.d, base};
            return big_q_jacobi(n, x, bp);
        }
        if (family == "monic-big00") {
            shown["c"] = o.c;
            shown["d"] = o.d;
            return monic_big_q_jacobi00(n, x, o.c, o.d, base);
        }
        if (family == "dual-q-krawtchouk") {
            const long xi = std::lround(x);
            if (std::abs(x - double(xi)) > 1e-9)
                throw DomainError(
                    "dual-q-krawtchouk evaluates on integer lattice points; "
                    "--x must be an integer");
            const int N = o.dim_set ? o.dim : 2 * n;
            shown["s"] = o.c / o.d;
            shown["N"] = double(N);
            DualQKrawtchoukParams<double> dp{o.c / o.d, N, base};
            return dual_q_krawtchouk(n, static_cast<int>(xi), dp);
        }
        if (family == "q-charlier") {
            shown["a"] = o.a;
            return q_charlier(n, std::pow(o.q, -x), o.a, base);
        }
        if (family == "jacobi") {
            shown.erase("q");
            shown["alpha"] = o.alpha;
            shown["beta"] = o.beta;
            return jacobi_R(n, o.alpha, o.beta, x);
        }
        // chebyshev
        shown.erase("q");
        return chebyshev_T(n, x);
    };

    std::vector<std::pair<double, double>> rows;
    rows.reserve(xs.size());
    for (double x : xs) rows.emplace_back(x, value_at(x));

    OutputStream out(o.output);
    std::ostream& os = out.get();
    const std::string fmt = o.format.empty() ? "human" : o.format;
    if (fmt == "json") {
        Json j;
        j["family"] = family;
        j["degree"] = n;
        Json params = Json::object();
        for (const auto& [k, v] : shown) params[k] = v;
        j["params"] = std::move(params);
        Json jrows = Json::array();
        for (const auto& [x, v] : rows) jrows.push_back({{"x", x}, {"value", v}});
        j["rows"] = std::move(jrows);
        os << j.dump() << "\n";
    } else if (fmt == "csv") {
        os << "x,value\n" << std::setprecision(17);
        for (const auto& [x, v] : rows) os << x << ',' << v << '\n';
    } else {
        os << "# family=" << family << " degree=" << n;
        for (const auto& [k, v] : shown)
            os << ' ' << k << '=' << std::setprecision(6) << v;
        os << '\n' << std::setprecision(17);
        for (const auto& [x, v] : rows)
            os << "x=" << x << "  value=" << v << '\n';
    }
    return 0;
}

// ---------------------------------------------------------------------------
// spectrum
// ---------------------------------------------------------------------------

int run_spectrum(const Options& o) {
    QBase<double> base(o.q, default_eps<double>(), o.max_terms);
    TruncatedRep rep(o.dim, o.sigma, base, Gauge::real_gauged);
    const Eigen::MatrixXd M = build_rho_matrix(rep);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M);
    if (es.info() != Eigen::Success)
        throw EigensolveFailure("spectrum: eigensolver did not converge");

    std::vector<double> ev(es.eigenvalues().data(),
                           es.eigenvalues().data() + o.dim);
    std::sort(ev.begin(), ev.end(), [](double x, double y) {
        const double ax = std::abs(x), ay = std::abs(y);
        if (ax != ay) return ax > ay;
        return x < y;
    });
    const int count = std::min(o.count, o.dim);

    struct Row {
        int rank;
        double eigenvalue;
        const char* branch;
        int x;
        double predicted;
        double deviation;
    };
    std::vector<Row> rows;
    for (int i = 0; i < count; ++i) {
        const double lam = ev[static_cast<size_t>(i)];
        Row best{i + 1, lam, "neg", 0, 0.0, std::numeric_limits<double>::max()};
        for (int x = 0; x <= o.dim + 20; ++x) {
            const double neg = -std::pow(o.q, 2.0 * x);
            const double pos = std::pow(o.q, 2.0 * o.sigma + 2.0 * x);
            if (std::abs(lam - neg) < best.deviation)
                best = {i + 1, lam, "neg", x, neg, std::abs(lam - neg)};
            if (std::abs(lam - pos) < best.deviation)
                best = {i + 1, lam, "pos", x, pos, std::abs(lam - pos)};
        }
        rows.push_back(best);
    }

    OutputStream out(o.output);
    std::ostream& os = out.get();
    const std::string fmt = o.format.empty() ? "csv" : o.format;
    if (fmt == "json") {
        for (const auto& r : rows) {
            Json j;
            j["rank"] = r.rank;
            j["eigenvalue"] = r.eigenvalue;
            j["branch"] = r.branch;
            j["x"] = r.x;
            j["predicted"] = r.predicted;
            j["deviation"] = r.deviation;
            os << j.dump() << "\n";
        }
    } else {
        os << "rank,eigenvalue,branch,x,predicted,deviation\n"
           << std::setprecision(17);
        for (const auto& r : rows)
            os << r.rank << ',' << r.eigenvalue << ',' << r.branch << ','
               << r.x << ',' << r.predicted << ',' << r.deviation << '\n';
    }
    return 0;
}

// ---------------------------------------------------------------------------
// limit-scan
// ---------------------------------------------------------------------------

int run_limit_scan(const Options& o, const std::string& target) {
    LimitScanResult res;
    if (target == "big" || target == "little") {
        LimitScanConfig cfg{o.r, o.p_values, target, 0.05, o.max_terms};
        LimitFamilyParams fp;
        fp.n = o.l_set ? o.l : (target == "big" ? 3 : 1);
        fp.alpha = o.alpha;
        fp.beta = o.beta;
        fp.c = o.c_set ? o.c : 1.2;
        fp.d = o.d_set ? o.d : 0.8;
        fp.probes = o.xs;
        res = limit_family_scan(cfg,
                                target == "big" ? LimitFamily::big_q_jacobi
                                                : LimitFamily::little_q_jacobi,
                                fp);
    } else if (target == "dual") {
        LimitScanConfig cfg{o.r, o.p_values, target, 0.05, o.max_terms};
        LimitFamilyParams fp;
        fp.l = o.l_set ? o.l : 2;
        fp.m = o.m;
        fp.c = o.c_set ? o.c : 1.0;
        fp.d = o.d_set ? o.d : 0.5;
        res = limit_family_scan(cfg, LimitFamily::dual_q_krawtchouk, fp);
    } else if (target == "ratio") {
        const double x = o.xs.empty() ? 2.0 : o.xs.front();
        res = ratio_asymptotic(o.m, x, o.r, o.c, o.d, o.p_values, o.max_terms);
    } else {  // kernel
        const int j = o.f_power;
        if (j < 0) throw DomainError("limit-scan: --f-power must be >= 0");
        res = kernel_limit_scan(
            [j](double z) { return j == 0 ? 1.0 : std::pow(z, j); }, o.m, o.r,
            o.c, o.d, o.p_values, o.max_terms);
    }

    OutputStream out(o.output);
    out.get() << error_table_csv(res);
    std::cerr << "limit-scan " << target << ": monotone="
              << (res.monotone_decreasing ? "yes" : "no") << " final_error="
              << std::setprecision(6)
              << (res.max_error_per_p.empty() ? 0.0
                                              : res.max_error_per_p.back())
              << " passed=" << (res.passed ? "yes" : "no") << "\n";
    return res.passed ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "qleg — q-orthogonal polynomial toolkit: big/little q-Jacobi, dual "
        "q-Krawtchouk and q-Charlier families, their addition/product/"
        "orthogonality identities, the truncated quantum-group operator "
        "model, and classical q -> 1 limits."};
    app.require_subcommand(1);

    Options o;
    if (const char* env = std::getenv("QLEG_MAX_TERMS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end == env || *end != '\0' || v < 1) {
            std::cerr << "qleg: QLEG_MAX_TERMS must be a positive integer\n";
            return 2;
        }
        o.max_terms = v;
    }

    const auto add_common = [&o](CLI::App* cmd) {
        cmd->add_option("--q", o.q, "base q in (0,1)");
        cmd->add_option("--sigma", o.sigma, "representation parameter sigma");
        cmd->add_option("--a", o.a, "family parameter a");
        cmd->add_option("--b", o.b, "family parameter b");
        cmd->add_option("--c", o.c, "support parameter c > 0");
        cmd->add_option("--d", o.d, "support parameter d > 0");
        cmd->add_option("--x", o.xs, "evaluation point(s), repeatable");
        cmd->add_option("--dim", o.dim, "truncation dimension")
            ->check(CLI::PositiveNumber);
        cmd->add_option("--tol", o.tol, "tolerance override")
            ->check(CLI::PositiveNumber);
        cmd->add_option("--seed", o.seed, "seed for parameter sweeps");
        cmd->add_option("--output", o.output, "write to file instead of stdout");
        cmd->add_option("--format", o.format, "output format")
            ->check(CLI::IsMember({"json", "csv", "human"}));
        cmd->add_option("--precision", o.precision,
                        "arithmetic for templated suites")
            ->check(CLI::IsMember({"double", "extended"}));
    };

    // eval ------------------------------------------------------------------
    std::string eval_family;
    CLI::App* eval_cmd =
        app.add_subcommand("eval", "evaluate a polynomial family");
    eval_cmd
        ->add_option("family", eval_family,
                     "one of: little-q-jacobi, big-q-jacobi, monic-big00, "
                     "dual-q-krawtchouk, q-charlier, jacobi, chebyshev")
        ->required()
        ->check(CLI::IsMember({"little-q-jacobi", "big-q-jacobi",
                               "monic-big00", "dual-q-krawtchouk", "q-charlier",
                               "jacobi", "chebyshev"}));
    eval_cmd->add_option("--l,--n,--m", o.l, "degree")
        ->check(CLI::NonNegativeNumber);
    eval_cmd->add_option("--alpha", o.alpha, "Jacobi exponent alpha");
    eval_cmd->add_option("--beta", o.beta, "Jacobi exponent beta");
    add_common(eval_cmd);

    // verify ----------------------------------------------------------------
    std::string suite;
    CLI::App* verify_cmd = app.add_subcommand(
        "verify", "run an identity suite and stream one report per line");
    verify_cmd->add_option("suite", suite, "which identity suite to run")
        ->required()
        ->check(CLI::IsMember({"addition", "product", "orthogonality",
                               "charlier", "operator", "limits", "all"}));
    verify_cmd->add_option("--l", o.l, "restrict to one degree l")
        ->check(CLI::NonNegativeNumber);
    verify_cmd->add_option("--p", o.p, "restrict to one degree p")
        ->check(CLI::NonNegativeNumber);
    add_common(verify_cmd);

    // spectrum ---------------------------------------------------------------
    CLI::App* spectrum_cmd = app.add_subcommand(
        "spectrum",
        "largest-|lambda| eigenvalues of the truncated operator vs the "
        "closed-form branches -q^{2x} and q^{2 sigma + 2x}");
    spectrum_cmd->add_option("--count", o.count, "rows to print")
        ->check(CLI::NonNegativeNumber);
    add_common(spectrum_cmd);

    // limit-scan --------------------------------------------------------------
    std::string target = "big";
    CLI::App* scan_cmd = app.add_subcommand(
        "limit-scan",
        "q -> 1 convergence error table (CSV) along q = r^{1/p}");
    scan_cmd->add_option("target", target,
                         "one of: big, little, dual, ratio, kernel")
        ->check(CLI::IsMember({"big", "little", "dual", "ratio", "kernel"}));
    scan_cmd->add_option("--l", o.l, "degree (big/little: n, dual: l)")
        ->check(CLI::NonNegativeNumber);
    scan_cmd->add_option("--m", o.m, "order m (dual/ratio/kernel)");
    scan_cmd->add_option("--r", o.r, "fixed r in (0,1); scans q = r^{1/p}");
    scan_cmd
        ->add_option("--p-values", o.p_values,
                     "strictly increasing scan exponents")
        ->delimiter(',');
    scan_cmd->add_option("--alpha", o.alpha, "Jacobi exponent alpha");
    scan_cmd->add_option("--beta", o.beta, "Jacobi exponent beta");
    scan_cmd->add_option("--f-power", o.f_power,
                         "kernel target: f(z) = z^j (j >= 0)");
    add_common(scan_cmd);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    o.q_set = eval_cmd->count("--q") || verify_cmd->count("--q") ||
              spectrum_cmd->count("--q") || scan_cmd->count("--q");
    o.sigma_set = verify_cmd->count("--sigma") || spectrum_cmd->count("--sigma");
    o.a_set = eval_cmd->count("--a") || verify_cmd->count("--a");
    o.c_set = eval_cmd->count("--c") || verify_cmd->count("--c") ||
              scan_cmd->count("--c");
    o.d_set = eval_cmd->count("--d") || verify_cmd->count("--d") ||
              scan_cmd->count("--d");
    o.l_set = eval_cmd->count("--l") || verify_cmd->count("--l") ||
              scan_cmd->count("--l");
    o.p_set = verify_cmd->count("--p") != 0;
    o.dim_set = eval_cmd->count("--dim") || verify_cmd->count("--dim") ||
                spectrum_cmd->count("--dim");
    o.tol_set = eval_cmd->count("--tol") || verify_cmd->count("--tol") ||
                spectrum_cmd->count("--tol") || scan_cmd->count("--tol");

    try {
        if (app.got_subcommand(eval_cmd)) return run_eval(o, eval_family);
        if (app.got_subcommand(verify_cmd)) return run_verify(o, suite);
        if (app.got_subcommand(spectrum_cmd)) return run_spectrum(o);
        return run_limit_scan(o, target);
    } catch (const NonConvergence& e) {
        std::cerr << "qleg: " << e.what() << "\n";
        return 3;
    } catch (const DomainError& e) {
        std::cerr << "qleg: " << e.what() << "\n";
        return 2;
    } catch (const DegreeOutOfRange& e) {
        std::cerr << "qleg: " << e.what() << "\n";
        return 2;
    } catch (const TruncationTooSmall& e) {
        std::cerr << "qleg: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "qleg: " << e.what() << "\n";
        return 3;
    }
}
