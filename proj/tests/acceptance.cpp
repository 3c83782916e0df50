// Acceptance gate: one pass/fail line per criterion, exit code = number of
// failed criteria. Each criterion is a fixed seeded grid with its tolerance
// pinned in-line; the printed "worst" is the criterion's own margin metric.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "qleg/classical.hpp"
#include "qleg/families.hpp"
#include "qleg/identities.hpp"
#include "qleg/qcore.hpp"
#include "qleg/su2_operator.hpp"
#include "qleg/sweep.hpp"

namespace {

using namespace qleg;
using Clock = std::chrono::steady_clock;

double elapsed_s(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Margin of a report whose sides may legitimately vanish: the residual that
// the pass rule actually compares against the tolerance.
double margin(const VerificationReport& r) {
    return std::min(r.rel_residual, r.abs_residual);
}

// --------------------------------------------------------------- criterion 1
// Addition formula. Double: l <= 4, p <= 6, q in {0.3,0.5,0.7,0.9}, 20 seeded
// (c,d) in (0,2]^2, 10 seeded x in [-d-1, c+1], rel residual <= 1e-8.
// Extended: l in {5,6} at <= 1e-20.
bool criterion1(double& worst) {
    bool ok = true;
    worst = 0.0;
    SplitMix64 rng(0x51ab5eed2024ULL);
    for (double q : {0.3, 0.5, 0.7, 0.9}) {
        QBase<double> base(q);
        for (int pair = 0; pair < 20; ++pair) {
            const double c = 2.0 - 2.0 * rng.uniform();
            const double d = 2.0 - 2.0 * rng.uniform();
            for (int k = 0; k < 10; ++k) {
                const double x = rng.uniform(-d - 1.0, c + 1.0);
                for (int l = 0; l <= 4; ++l)
                    for (int p = 0; p <= 6; ++p) {
                        const auto r = verify_addition(
                            AdditionParams<double>{l, p, x, c, d, base}, 1e-8);
                        worst = std::max(worst, r.rel_residual);
                        ok = ok && r.passed;
                    }
            }
        }
    }
    SplitMix64 rng2(0xe17e5eedULL);
    for (double q : {0.5, 0.9}) {
        QBase<Extended> base(Extended{q});
        for (int l : {5, 6})
            for (int p : {0, 3, 6})
                for (int k = 0; k < 3; ++k) {
                    const double c = 2.0 - 2.0 * rng2.uniform();
                    const double d = 2.0 - 2.0 * rng2.uniform();
                    const double x = rng2.uniform(-d - 1.0, c + 1.0);
                    const auto r = verify_addition(
                        AdditionParams<Extended>{l, p, Extended{x},
                                                 Extended{c}, Extended{d},
                                                 base},
                        1e-20);
                    worst = std::max(worst, r.rel_residual);
                    ok = ok && r.passed;
                }
    }
    return ok;
}

// --------------------------------------------------------------- criterion 2
// Product formula: l <= 4, all m in [0,l], p <= 4, two (c,d,q) settings,
// rel <= 1e-8 with q-integral tail 1e-14; the descending variant pairing
// must verify to the same tolerance.
bool criterion2(double& worst) {
    bool ok = true;
    worst = 0.0;
    const struct {
        double c, d, q;
    } settings[] = {{1.0, 0.6, 0.5}, {0.7, 1.1, 0.7}};
    for (const auto& s : settings) {
        QBase<double> base(s.q);
        for (int l = 0; l <= 4; ++l)
            for (int m = 0; m <= l; ++m)
                for (int p = 0; p <= 4; ++p) {
                    const auto res =
                        product_formula(l, m, p, s.c, s.d, base, 1e-8, 1e-14);
                    worst = std::max(worst, margin(res.main));
                    ok = ok && res.main.passed;
                    if (res.variant) {
                        worst = std::max(worst, margin(*res.variant));
                        ok = ok && res.variant->passed;
                    }
                }
    }
    return ok;
}

// --------------------------------------------------------------- criterion 3
// Orthogonality: full n,m <= 8 matrix; off-diagonal integrals bounded by
// 1e-10 times the geometric mean of the adjacent diagonal norms, diagonal
// entries matching the closed-form norm to rel 1e-8.
bool criterion3(double& worst) {
    bool ok = true;
    worst = 0.0;
    const struct {
        double c, d, q;
    } settings[] = {{1.2, 0.8, 0.5}, {0.7, 1.3, 0.7}};
    for (const auto& s : settings) {
        QBase<double> base(s.q);
        std::vector<double> h(9);
        for (int n = 0; n <= 8; ++n) h[size_t(n)] = big00_norm(n, s.c, s.d, base);
        for (int n = 0; n <= 8; ++n)
            for (int m = 0; m <= 8; ++m) {
                const auto r = orthogonality_big00(n, m, s.c, s.d, base, 1e-8);
                if (n == m) {
                    worst = std::max(worst, r.rel_residual);
                    ok = ok && r.rel_residual <= 1e-8;
                } else {
                    const double scaled =
                        std::abs(r.lhs) /
                        std::sqrt(h[size_t(n)] * h[size_t(m)]);
                    worst = std::max(worst, scaled);
                    ok = ok && scaled <= 1e-10;
                }
            }
    }
    return ok;
}

// --------------------------------------------------------------- criterion 4
// q-Charlier: same-parameter orthogonality and cross-parameter vanishing,
// n,m <= 6, a in {0.5,1.5,3}, q in {0.4,0.7}, residuals <= 1e-9.
bool criterion4(double& worst) {
    bool ok = true;
    worst = 0.0;
    for (double q : {0.4, 0.7}) {
        QBase<double> base(q);
        for (double a : {0.5, 1.5, 3.0})
            for (int n = 0; n <= 6; ++n)
                for (int m = 0; m <= 6; ++m)
                    for (CharlierKind kind :
                         {CharlierKind::same, CharlierKind::cross}) {
                        const auto r = q_charlier_orthogonality(n, m, a, base,
                                                                kind, 1e-9);
                        worst = std::max(worst, margin(r));
                        ok = ok && r.passed;
                    }
    }
    return ok;
}

// --------------------------------------------------------------- criterion 5
// Spectral construction at dim=80, sigma in {0,0.3,1.0}, q in {0.5,0.7}:
// the 10 largest-|lambda| eigenvalues match the two geometric branches to
// 1e-8; eigenvector norms match the closed form to rel 1e-8; dual
// orthogonality deltas hold to 1e-8.
bool criterion5(double& worst) {
    bool ok = true;
    worst = 0.0;
    for (double q : {0.5, 0.7})
        for (double sigma : {0.0, 0.3, 1.0}) {
            QBase<double> base(q);
            TruncatedRep rep(80, sigma, base);
            for (const auto& r : spectrum_check(rep, 10, 1e-8)) {
                worst = std::max(worst, margin(r));
                ok = ok && r.passed;
            }
            const auto n = norms_and_dual_orthogonality(rep, 40, 8, 1e-8);
            worst = std::max(worst, margin(n));
            ok = ok && n.passed;
        }
    return ok;
}

// --------------------------------------------------------------- criterion 6
// Operator identity: l in {0..3}, sigma in {0.3,0.8}, q=0.5, dim=50,
// boundary band excluded; max entry deviation <= 1e-9, complex-mode
// imaginary leakage <= 1e-12.
bool criterion6(double& worst) {
    bool ok = true;
    worst = 0.0;
    QBase<double> base(0.5);
    for (Gauge g : {Gauge::real_gauged, Gauge::complex_mode})
        for (double sigma : {0.3, 0.8}) {
            TruncatedRep rep(50, sigma, base, g);
            for (int l = 0; l <= 3; ++l) {
                const auto r = operator_identity(l, rep, 1e-9);
                const double dev = r.truncation.at("max_abs_dev");
                worst = std::max(worst, dev);
                ok = ok && r.passed && dev <= 1e-9;
                if (g == Gauge::complex_mode)
                    ok = ok && r.truncation.at("imag_dev") <= 1e-12;
            }
        }
    return ok;
}

// --------------------------------------------------------------- criterion 7
// Special case (c=1, d=0 degeneration): l <= 4, p <= 6, q in {0.4,0.8},
// 10 seeded x, residual <= 1e-10.
bool criterion7(double& worst) {
    bool ok = true;
    worst = 0.0;
    SplitMix64 rng(0x5ca1ab1eULL);
    for (double q : {0.4, 0.8}) {
        QBase<double> base(q);
        for (int k = 0; k < 10; ++k) {
            const double x = rng.uniform();
            for (int l = 0; l <= 4; ++l)
                for (int p = 0; p <= 6; ++p) {
                    const auto r = special_case_little(l, p, x, base, 1e-10);
                    worst = std::max(worst, margin(r));
                    ok = ok && r.passed;
                }
        }
    }
    return ok;
}

// --------------------------------------------------------------- criterion 8
// Classical layer: addition and product identities for l <= 8 at 50 seeded
// draws, residual <= 1e-12; q -> 1 scans along p in {4,8,16,32} strictly
// decreasing with final error < 0.05.
bool criterion8(double& worst) {
    bool ok = true;
    worst = 0.0;
    SplitMix64 rng(20240819ULL);
    for (int i = 0; i < 50; ++i) {
        const int l = i % 9;
        const double x = rng.uniform(-0.85, 0.85);
        const double y = rng.uniform(-0.85, 0.85);
        const double t = rng.uniform(-1.0, 1.0);
        const auto ra = classical_addition(l, x, y, t, 1e-12);
        worst = std::max(worst, margin(ra));
        ok = ok && ra.passed;
        const int m = static_cast<int>(rng.integer(0, l));
        const auto rp = classical_product(l, m, x, y, 1e-12);
        worst = std::max(worst, margin(rp));
        ok = ok && rp.passed;
    }

    const std::vector<int> pvals{4, 8, 16, 32};
    std::vector<LimitScanResult> scans;
    {
        LimitScanConfig cfg{0.5, pvals, "big", 0.05, 100000};
        LimitFamilyParams fp;
        fp.n = 3;
        fp.c = 1.2;
        fp.d = 0.8;
        scans.push_back(limit_family_scan(cfg, LimitFamily::big_q_jacobi, fp));
    }
    {
        LimitScanConfig cfg{0.5, pvals, "little", 0.05, 100000};
        LimitFamilyParams fp;
        fp.n = 1;
        scans.push_back(
            limit_family_scan(cfg, LimitFamily::little_q_jacobi, fp));
        fp.n = 2;
        fp.alpha = 1.0;
        scans.push_back(
            limit_family_scan(cfg, LimitFamily::little_q_jacobi, fp));
    }
    {
        LimitScanConfig cfg{0.5, pvals, "dual", 0.05, 100000};
        LimitFamilyParams fp;
        fp.l = 2;
        fp.m = 1;
        fp.c = 1.0;
        fp.d = 0.5;
        scans.push_back(
            limit_family_scan(cfg, LimitFamily::dual_q_krawtchouk, fp));
    }
    scans.push_back(ratio_asymptotic(1, 2.0, 0.5, 1.0, 1.0, pvals));
    scans.push_back(ratio_asymptotic(2, -1.7, 0.5, 1.0, 1.0, pvals));
    scans.push_back(kernel_limit_scan([](double z) { return z; }, 1, 0.5, 1.0,
                                      1.0, pvals));
    for (const auto& s : scans) {
        const double fin =
            s.max_error_per_p.empty() ? 1.0 : s.max_error_per_p.back();
        ok = ok && s.monotone_decreasing && fin < 0.05 && s.skipped.empty();
    }
    return ok;
}

// --------------------------------------------------------------- criterion 9
// Cross-path consistency: the three monic evaluation paths agree to 1e-10 on
// 100 seeded draws, and the scalar-identity/addition-formula substitution
// gives coinciding relative residuals to 1e-10.
bool criterion9(double& worst) {
    bool ok = true;
    worst = 0.0;
    SplitMix64 rng(20240817ULL);
    for (int i = 0; i < 100; ++i) {
        const int n = static_cast<int>(rng.integer(0, 8));
        const double q = rng.uniform(0.3, 0.85);
        const double c = rng.uniform(0.05, 2.0);
        const double d = rng.uniform(0.05, 2.0);
        const double x =
            rng.uniform(0.3, c + 1.0) * (rng.next() % 2 ? 1.0 : -1.0);
        QBase<double> base(q);
        const double r =
            monic_big_q_jacobi00(n, x, c, d, base, MonicPath::recurrence);
        const double sc =
            monic_big_q_jacobi00(n, x, c, d, base, MonicPath::series_c);
        const double sd =
            monic_big_q_jacobi00(n, x, c, d, base, MonicPath::series_d);
        const double scale =
            std::max({std::abs(r), std::abs(sc), std::abs(sd), 1e-300});
        const double dev =
            std::max(std::abs(sc - r), std::abs(sd - r)) / scale;
        worst = std::max(worst, dev);
        ok = ok && dev <= 1e-10;
    }

    SplitMix64 rng2(0x1a2b3c4dULL);
    for (int i = 0; i < 10; ++i) {
        const double Q = rng2.uniform(0.3, 0.8);
        const double c = rng2.uniform(0.3, 1.5);
        const double d = rng2.uniform(0.3, 1.5);
        const double x = rng2.uniform(-d, c);
        const double sigma = std::log(c / d) / std::log(Q);
        const QBase<double> bQ(Q);
        const QBase<double> broot(std::sqrt(Q));
        for (int l : {1, 2, 3})
            for (int p : {0, 2, 5}) {
                const auto r_addition = verify_addition(
                    AdditionParams<double>{l, p, x, c, d, bQ}, 1e-8);
                const auto r_scalar =
                    scalar_spectral_identity(l, p, sigma, x / d, broot, 1e-8);
                const double gap =
                    std::abs(r_scalar.rel_residual - r_addition.rel_residual);
                worst = std::max(worst, gap);
                ok = ok && r_addition.passed && r_scalar.passed && gap <= 1e-10;
            }
    }
    return ok;
}

struct Criterion {
    int index;
    const char* name;
    bool (*run)(double&);
    double budget_s;
};

}  // namespace

int main() {
    const Criterion criteria[] = {
        {1, "addition formula sweep", criterion1, 60.0},
        {2, "product formula with variant pairing", criterion2, 60.0},
        {3, "orthogonality matrix", criterion3, 30.0},
        {4, "q-Charlier relations", criterion4, 10.0},
        {5, "spectral construction", criterion5, 30.0},
        {6, "operator identity", criterion6, 30.0},
        {7, "special-case degeneration", criterion7, 10.0},
        {8, "classical layer and q->1 scans", criterion8, 120.0},
        {9, "cross-path consistency", criterion9, 120.0},
    };
    int failures = 0;
    for (const auto& c : criteria) {
        const auto t0 = Clock::now();
        double worst = 0.0;
        bool ok = false;
        std::string note;
        try {
            ok = c.run(worst);
        } catch (const std::exception& e) {
            ok = false;
            note = std::string("  exception: ") + e.what();
        }
        const double dt = elapsed_s(t0);
        if (!ok) ++failures;
        std::printf("[%s] criterion %d: %s (worst %.3e, %.2fs / budget %.0fs)%s\n",
                    ok ? "PASS" : "FAIL", c.index, c.name, worst, dt,
                    c.budget_s, note.c_str());
        std::fflush(stdout);
    }
    std::printf("%d of 9 criteria passed\n", 9 - failures);
    return failures;
}
