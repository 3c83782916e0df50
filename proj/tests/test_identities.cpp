#include <cmath>
#include <vector>

#include "doctest.h"
#include "qleg/identities.hpp"
#include "qleg/sweep.hpp"

using namespace qleg;

namespace {
const QBase<double> q05(0.5);
}

// ---------------------------------------------------------------------------
// Orthogonality of the monic a=b=0 family
// ---------------------------------------------------------------------------

TEST_CASE("orthogonality: n=m=0 reduces to the plain weight integral") {
    auto r = orthogonality_big00(0, 0, 1.0, 1.0, q05);
    // Both sides must equal (1-q)(q;q)_inf(-1;q)_inf(-q;q)_inf.
    double want = 0.5 * qpochhammer_infinite(0.5, q05) *
                  qpochhammer_infinite(-1.0, q05) *
                  qpochhammer_infinite(-0.5, q05);
    CHECK(r.lhs == doctest::Approx(want).epsilon(1e-12));
    CHECK(r.rhs == doctest::Approx(want).epsilon(1e-14));
    CHECK(r.passed);
    CHECK(r.identity_id == "orthogonality_big00");
    CHECK(r.precision == "double");
    CHECK(r.truncation.at("integral_nodes") > 0);
}

TEST_CASE("orthogonality: off-diagonal entries vanish absolutely") {
    auto r = orthogonality_big00(0, 1, 1.0, 1.0, q05);
    CHECK(r.rhs == 0.0);
    CHECK(std::abs(r.lhs) < 1e-12);
    CHECK(r.passed);  // absolute branch of the residual policy
}

TEST_CASE("orthogonality: diagonal closed form at n=3") {
    auto r = orthogonality_big00(3, 3, 0.8, 0.2, QBase<double>(0.6));
    CHECK(r.rel_residual <= 1e-8);
    CHECK(r.passed);
}

TEST_CASE("orthogonality: 6x6 Gram matrix is diagonal with closed-form norms") {
    QBase<double> base(0.55);
    double c = 1.3, d = 0.6;
    double h0 = big00_norm(0, c, d, base);
    for (int n = 0; n <= 5; ++n)
        for (int m = 0; m <= n; ++m) {
            auto r = orthogonality_big00(n, m, c, d, base);
            if (n == m) {
                CHECK(r.rel_residual <= 1e-9);
            } else {
                CHECK(std::abs(r.lhs) <= 1e-10 * h0);
            }
            CHECK(r.passed);
        }
}

// ---------------------------------------------------------------------------
// q-Charlier orthogonality
// ---------------------------------------------------------------------------

TEST_CASE("q-Charlier same: n=m=0 is Euler's sum") {
    auto r = q_charlier_orthogonality(0, 0, 1.5, q05, CharlierKind::same);
    double want = qpochhammer_infinite(-1.5, q05);
    CHECK(r.lhs == doctest::Approx(want).epsilon(1e-12));
    CHECK(r.rhs == doctest::Approx(want).epsilon(1e-14));
    CHECK(r.passed);
    CHECK(r.truncation.at("sum_terms") > 5);
}

TEST_CASE("q-Charlier same: off-diagonal vanishes") {
    auto r = q_charlier_orthogonality(0, 1, 1.5, q05, CharlierKind::same);
    CHECK(r.rhs == 0.0);
    CHECK(std::abs(r.lhs) < 1e-12);
    CHECK(r.passed);
}

TEST_CASE("q-Charlier cross: reciprocal-parameter sum vanishes") {
    auto r = q_charlier_orthogonality(1, 2, 1.5, q05, CharlierKind::cross);
    CHECK(r.identity_id == "q_charlier_cross");
    CHECK(std::abs(r.lhs) <= 1e-10);
    CHECK(r.passed);
}

TEST_CASE("q-Charlier: full grid n,m <= 3 in double") {
    QBase<double> base(0.4);
    for (double a : {0.5, 1.5})
        for (int n = 0; n <= 3; ++n)
            for (int m = 0; m <= 3; ++m) {
                auto same =
                    q_charlier_orthogonality(n, m, a, base, CharlierKind::same);
                CHECK(same.passed);
                auto cross = q_charlier_orthogonality(n, m, a, base,
                                                      CharlierKind::cross);
                CHECK(std::abs(cross.lhs) <= 1e-9);
            }
}

TEST_CASE("q-Charlier: worst acceptance cell in extended precision") {
    // n=m=6, a=3, q=0.7 cancels ~19 digits; extended absorbs it whole.
    QBase<Extended> base(Extended(0.7));
    auto same = q_charlier_orthogonality(6, 6, Extended(3), base,
                                         CharlierKind::same, 1e-30);
    CHECK(same.precision == "extended");
    CHECK(same.rel_residual <= 1e-30);
    auto cross =
        q_charlier_orthogonality(6, 5, Extended(3), base, CharlierKind::cross);
    CHECK(std::abs(cross.lhs) <= 1e-25);
}

// ---------------------------------------------------------------------------
// Squared eigenvector norms
// ---------------------------------------------------------------------------

TEST_CASE("h_norm: x=0 closed form is a single infinite product") {
    double sigma = 0.3;
    QBase<double> b2(0.25);
    double want = qpochhammer_infinite(-std::pow(0.5, -2 * sigma), b2);
    CHECK(h_norm(0, sigma, q05, HNormPath::closed) ==
          doctest::Approx(want).epsilon(1e-13));
    // The x=0 defining sum is Euler's identity in base q^2.
    CHECK(h_norm(0, sigma, q05, HNormPath::direct) ==
          doctest::Approx(want).epsilon(1e-12));
}

TEST_CASE("h_norm: direct sum meets closed form") {
    long terms = 0;
    double direct = h_norm(2, 0.3, q05, HNormPath::direct, &terms);
    double closed = h_norm(2, 0.3, q05, HNormPath::closed);
    CHECK(direct == doctest::Approx(closed).epsilon(1e-10));
    CHECK(terms > 3);
}

TEST_CASE("h_norm: direct/closed agreement across x, sigma, q; positivity") {
    for (double q : {0.5, 0.75})
        for (double sigma : {-0.4, 0.0, 0.3, 1.0}) {
            QBase<double> base(q);
            for (int x = 0; x <= 5; ++x) {
                double closed = h_norm(x, sigma, base, HNormPath::closed);
                double direct = h_norm(x, sigma, base, HNormPath::direct);
                CHECK(closed > 0.0);
                CHECK(direct ==
                      doctest::Approx(closed).epsilon(1e-11));
            }
        }
}

// ---------------------------------------------------------------------------
// Addition formula
// ---------------------------------------------------------------------------

TEST_CASE("addition: l=0 collapses to the monic polynomial itself") {
    QBase<double> base(0.5);
    for (int p : {0, 3})
        for (double x : {-0.7, 0.2, 1.1}) {
            AdditionParams<double> ap{0, p, x, 1.0, 1.0, base};
            double monic = monic_big_q_jacobi00(p, x, 1.0, 1.0, base);
            CHECK(addition_lhs(ap) == doctest::Approx(monic).epsilon(1e-13));
            CHECK(addition_rhs(ap) == doctest::Approx(monic).epsilon(1e-13));
        }
}

TEST_CASE("addition: p=0 drops the descending sum entirely") {
    AdditionParams<double> ap{2, 0, 0.3, 1.0, 1.0, q05};
    auto r = verify_addition(ap, 1e-12);
    CHECK(r.passed);
    CHECK(r.rel_residual <= 1e-12);
}

TEST_CASE("addition: pinned point in double and extended") {
    AdditionParams<double> ap{3, 2, -0.1, 0.8, 0.2, QBase<double>(0.6)};
    auto r = verify_addition(ap, 1e-8);
    CHECK(r.passed);
    CHECK(r.rel_residual <= 1e-8);

    AdditionParams<Extended> ax{3,
                                2,
                                Extended(-0.1),
                                Extended(0.8),
                                Extended(0.2),
                                QBase<Extended>(Extended(0.6))};
    auto rx = verify_addition(ax, 1e-20);
    CHECK(rx.passed);
    CHECK(rx.rel_residual <= 1e-20);
    CHECK(rx.precision == "extended");
}

TEST_CASE("addition: seeded sweep over l, p, c, d, x") {
    SplitMix64 rng(20240818);
    for (double q : {0.3, 0.7}) {
        QBase<double> base(q);
        for (int l = 0; l <= 4; ++l)
            for (int p : {0, 2, 5})
                for (int rep = 0; rep < 5; ++rep) {
                    double c = rng.uniform(0.05, 2.0);
                    double d = rng.uniform(0.05, 2.0);
                    for (int j = 0; j < 3; ++j) {
                        double x = rng.uniform(-d - 1.0, c + 1.0);
                        AdditionParams<double> ap{l, p, x, c, d, base};
                        auto r = verify_addition(ap, 1e-8);
                        CHECK(r.passed);
                    }
                }
    }
}

TEST_CASE("addition: l=6 in extended precision") {
    QBase<Extended> base(Extended(0.5));
    AdditionParams<Extended> ap{6,
                                4,
                                Extended(0.45),
                                Extended(1.3),
                                Extended(0.7),
                                base};
    auto r = verify_addition(ap, 1e-20);
    CHECK(r.passed);
    CHECK(r.rel_residual <= 1e-20);
}

TEST_CASE("addition: lhs - rhs is the zero polynomial in x") {
    // Both sides are degree l+p polynomials in x; a Newton fit of the
    // difference at l+p+1 nodes must have all coefficients at the noise
    // level of the lhs coefficients.
    QBase<double> base(0.55);
    int l = 2, p = 3;
    double c = 1.2, d = 0.4;
    int npts = l + p + 1;
    double lo = -d - 1.0, hi = c + 1.0;
    std::vector<double> xs(npts), diff(npts), lhsv(npts);
    for (int i = 0; i < npts; ++i) {
        xs[i] = (lo + hi) / 2 +
                (hi - lo) / 2 * std::cos(M_PI * (2.0 * i + 1) / (2.0 * npts));
        AdditionParams<double> ap{l, p, xs[i], c, d, base};
        lhsv[i] = addition_lhs(ap);
        diff[i] = lhsv[i] - addition_rhs(ap);
    }
    for (int lv = 1; lv < npts; ++lv)
        for (int i = npts - 1; i >= lv; --i) {
            diff[i] = (diff[i] - diff[i - 1]) / (xs[i] - xs[i - lv]);
            lhsv[i] = (lhsv[i] - lhsv[i - 1]) / (xs[i] - xs[i - lv]);
        }
    double scale = 0;
    for (double v : lhsv) scale = std::max(scale, std::abs(v));
    for (double v : diff) CHECK(std::abs(v) <= 1e-9 * scale);
}

// ---------------------------------------------------------------------------
// Special case at c=1, d=0
// ---------------------------------------------------------------------------

TEST_CASE("special case: l=0 is the shifted factorial on both sides") {
    int p = 3;
    double x = 0.7;
    auto r = special_case_little(0, p, x, q05);
    double want = qpochhammer_finite(std::pow(0.5, 1 - p) * x, q05, p);
    CHECK(r.lhs == doctest::Approx(want).epsilon(1e-13));
    CHECK(r.rhs == doctest::Approx(want).epsilon(1e-13));
    CHECK(r.passed);
}

TEST_CASE("special case: pinned points") {
    auto r1 = special_case_little(1, 0, 0.4, q05, 1e-12);
    CHECK(r1.passed);
    CHECK(r1.rel_residual <= 1e-12);
    auto r2 = special_case_little(2, 3, -0.2, QBase<double>(0.7));
    CHECK(r2.passed);
    CHECK(r2.rel_residual <= 1e-10);
}

TEST_CASE("special case: worst acceptance cell in extended precision") {
    // (q^{1-p-m}x;q)_{p+m} reaches ~q^{-45} at l=4, p=6, q=0.4.
    QBase<Extended> base(Extended(0.4));
    auto r = special_case_little(4, 6, Extended(0.8), base, 1e-30);
    CHECK(r.passed);
    CHECK(r.rel_residual <= 1e-30);
}

// ---------------------------------------------------------------------------
// Product formula
// ---------------------------------------------------------------------------

TEST_CASE("product: l=m=p=0 reduces to the weight normalization") {
    auto res = product_formula(0, 0, 0, 1.0, 1.0, q05, 1e-10);
    CHECK(res.main.lhs == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(res.main.rel_residual <= 1e-10);
    CHECK(res.main.passed);
    REQUIRE(res.variant.has_value());
    CHECK(res.variant->rel_residual <= 1e-10);
}

TEST_CASE("product: m=l pins the integral to 1/C") {
    int l = 3, p = 2;
    double c = 1.1, d = 0.6;
    auto res = product_formula(l, l, p, c, d, q05);
    CHECK(res.main.lhs == doctest::Approx(1.0).epsilon(1e-14));
    // rhs = C * integral, so the integral itself must equal 1/C.
    CHECK(res.main.rhs == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(res.main.passed);
}

TEST_CASE("product: pinned point l=2, m=1, p=2") {
    auto res = product_formula(2, 1, 2, 1.0, 0.5, q05);
    CHECK(res.main.rel_residual <= 1e-8);
    CHECK(res.main.passed);
    REQUIRE(res.variant.has_value());
    CHECK(res.variant->passed);
}

TEST_CASE("product: printed constant equals expansion-coefficient route") {
    // Independent derivation of C: dividing the expansion prefactor by the
    // ascending coefficient and the closed-form norm h_{p+m} must reproduce
    // the printed constant exactly.
    for (double q : {0.4, 0.65}) {
        QBase<double> base(q);
        double c = 1.4, d = 0.3;
        for (int l = 0; l <= 3; ++l)
            for (int m = 0; m <= l; ++m)
                for (int p : {0, 1, 3}) {
                    double printed = product_constant(l, m, p, c, d, base);
                    double route =
                        detail::addition_prefactor(l, c, d, base) /
                        (detail::asc_coefficient(l, m, c, base) *
                         big00_norm(p + m, c, d, base));
                    CHECK(printed == doctest::Approx(route).epsilon(1e-12));
                }
    }
}

TEST_CASE("product: ascending and descending pairings agree") {
    // Integrating the expansion against P-hat_{p+m} at p, and against
    // P-hat_{p-m} at p+m, probes the same product value; the reports must
    // agree on both sides.
    QBase<double> base(0.6);
    double c = 1.2, d = 0.8;
    for (int l : {1, 3})
        for (int m = 0; m <= l; ++m)
            for (int p : {0, 2}) {
                auto main = product_formula(l, m, p, c, d, base);
                auto other = product_formula(l, m, p + m, c, d, base);
                REQUIRE(other.variant.has_value());
                CHECK(main.main.lhs ==
                      doctest::Approx(other.variant->lhs).epsilon(1e-12));
                CHECK(main.main.rhs ==
                      doctest::Approx(other.variant->rhs).epsilon(1e-8));
            }
}

TEST_CASE("product: m=0 pairing reproduces the families product") {
    QBase<double> base(0.5);
    double c = 1.0, d = 0.5;
    for (int l : {1, 2, 4})
        for (int p : {0, 3}) {
            auto res = product_formula(l, 0, p, c, d, base);
            double want =
                detail::addition_R(l, 0, c, d, base) *
                little_q_jacobi(l, std::pow(0.5, p), 1.0, 1.0, base);
            CHECK(res.main.lhs == doctest::Approx(want).epsilon(1e-13));
            CHECK(res.main.passed);
        }
}

TEST_CASE("product: m > l is rejected") {
    CHECK_THROWS_AS(product_formula(1, 2, 0, 1.0, 1.0, q05), DomainError);
}
