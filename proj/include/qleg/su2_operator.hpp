#pragma once
// Finite truncations of the infinite-dimensional *-representation of the
// quantum SU(2) generators: the tridiagonal self-adjoint operator pi(rho),
// its explicit eigenvectors, the spectral decomposition, and the operator /
// scalar forms of the spherical-element identity.
//
// Everything here works in double precision; the spectral data is
// exponentially graded, so the interesting failure mode is scale separation
// (factors that individually overflow while their product is O(1)), not a
// shortage of digits.

#include <Eigen/Dense>

#include <vector>

#include "qleg/qcore.hpp"
#include "qleg/report.hpp"

namespace qleg {

enum class Gauge {
    complex_mode,  // Hermitian tridiagonal with purely imaginary off-diagonals
    real_gauged,   // basis rescaled e_n -> i^n e_n; real symmetric tridiagonal
};

/// Finite cut of the representation space, spanned by e_0 .. e_{dim-1}.
struct TruncatedRep {
    int dim;
    double sigma;
    QBase<double> base;
    Gauge gauge;

    TruncatedRep(int dim_, double sigma_, const QBase<double>& base_,
                 Gauge gauge_ = Gauge::real_gauged)
        : dim(dim_), sigma(sigma_), base(base_), gauge(gauge_) {
        if (dim < 2) throw DomainError("TruncatedRep: dim must be >= 2");
    }
};

enum class Branch { neg, pos };

/// One point of the point spectrum: lambda = -q^{2x} on the neg branch or
/// q^{2 sigma + 2x} on the pos branch, together with the closed-form squared
/// eigenvector norm h (the neg branch uses the closed form with sigma
/// negated).
struct SpectralPoint {
    double lambda;
    Branch branch;
    int x;
    double h;
};

SpectralPoint spectral_point(Branch branch, int x, double sigma,
                             const QBase<double>& base);

/// Real (gauged) eigenvector coefficients for a spectral lambda, indexed by
/// basis level n. Trailing entries are exact zeros once the coefficients
/// have decayed below eps relative to their peak; the true tail is
/// super-exponentially small there.
struct EigvecCoefficients {
    std::vector<double> p;
};

/// Real symmetric tridiagonal matrix of pi(rho) in the gauged basis:
/// diagonal -q^{2n}(1-q^{2 sigma}), off-diagonal q^{sigma+n} sqrt(1-q^{2n+2}).
Eigen::MatrixXd build_rho_matrix(const TruncatedRep& rep);

/// Hermitian tridiagonal matrix of pi(rho) in the standard basis: the
/// off-diagonals are purely imaginary, -i q^{sigma+n-1} sqrt(1-q^{2n}) below
/// and +i q^{sigma+n} sqrt(1-q^{2n+2}) above the column-n diagonal entry
/// -q^{2n}(1-q^{2 sigma}). Unitarily equivalent to the gauged matrix via
/// conjugation by diag(i^n).
Eigen::MatrixXcd build_rho_matrix_complex(const TruncatedRep& rep);

EigvecCoefficients eigvec(const SpectralPoint& pt, const TruncatedRep& rep);

/// Compare the `count` largest-magnitude eigenvalues of the truncated matrix
/// against the union of the two geometric branches. One report per
/// eigenvalue, both lists sorted by value so degenerate-magnitude pairs line
/// up deterministically.
std::vector<VerificationReport> spectrum_check(const TruncatedRep& rep,
                                               int count, double tol = 1e-8);

/// Checks, in one sweep: the eigenvector norms against the closed form, the
/// vanishing of all cross inner products (within and across branches) for
/// x, y <= xmax, the dual orthogonality sums for n, m <= nmax, and the
/// identification of each branch sum with one half of the q-integral form of
/// the weight. Returns the sub-check with the worst margin; the aggregate
/// extremes are recorded in the truncation map.
VerificationReport norms_and_dual_orthogonality(const TruncatedRep& rep,
                                                int xmax, int nmax,
                                                double tol = 1e-8);

/// The single nonzero amplitude of the corepresentation matrix element
/// acting on basis level p: target = p + m for m >= 0, p - |m| for m < 0.
/// target < 0 flags the zero vector (annihilated below the bottom level).
/// The amplitude is the standard-basis scalar; it is real in either gauge.
struct MatrixElementAction {
    int target;
    double amplitude;
};

MatrixElementAction matrix_element_action(int l, int m, int p,
                                          const TruncatedRep& rep);

/// Spherical-element identity at spin l: the q^{-m/2}-weighted sum of the
/// 2l+1 matrix-element operators equals C_l(sigma) times the degree-l big
/// q-Legendre polynomial of the tridiagonal operator. Compared entrywise on
/// the top-left (dim-l)^2 block; deviations are absolute (the identity pins
/// every entry, including the zero ones). In complex mode the report also
/// records the worst gauge-phase leakage (imaginary part after rotating each
/// entry back to the real gauge).
VerificationReport operator_identity(int l, const TruncatedRep& rep,
                                     double tol = 1e-9);

/// Scalar shadow of the spherical-element identity: both sides paired with
/// an eigenvector and divided by the common inner-product factor. Polynomial
/// in lambda, so lambda may be spectral or not.
VerificationReport scalar_spectral_identity(int l, int p, double sigma,
                                       double lambda,
                                       const QBase<double>& base,
                                       double tol = 1e-10);
VerificationReport scalar_spectral_identity(int l, int p, double sigma,
                                       const SpectralPoint& pt,
                                       const QBase<double>& base,
                                       double tol = 1e-10);

namespace detail {

/// c^{l,sigma}_m with the i^m phase stripped:
/// q^{-(l+sigma)m + m^2/2} / sqrt((q^2;q^2)_{l+m} (q^2;q^2)_{l-m})
/// times the dual family member R_{l-m} at the lattice point x = l.
/// Depends on m only through |m| (the symmetry in m is definitional).
double clm_real(int l, int m, double sigma, const QBase<double>& base);

/// d^l_m = q^{-m(l-m)} / (q^2;q^2)_m * sqrt((q^2;q^2)_{l+m}/(q^2;q^2)_{l-m}),
/// m >= 0.
double dlm_constant(int l, int m, const QBase<double>& base);

/// C_l(sigma) = (-1)^l q^{-l^2-l} (-q^{2-2 sigma};q^2)_l / (q^{2l+2};q^2)_l.
double cl_constant(int l, double sigma, const QBase<double>& base);

/// Gauged eigenvector coefficients t_n for an eigenvalue lambda, iterated
/// directly in the gauged three-term recurrence. The closed form
/// t_n = q^{-sigma n} q^{-n(n-1)/2} (q^2;q^2)_n^{-1/2} * Phat_n(lambda)
/// is the same sequence, but its two factors overflow/underflow separately
/// past n ~ 45 at q = 0.5, so they are never formed. Zero-fills the tail
/// once the sequence has completed its decay inside the window.
std::vector<double> gauged_coefficients(double lambda, double sigma,
                                        const QBase<double>& base, int dim);

/// Same, for the spectral eigenvalue of (branch, x), which is formed in
/// extended precision internally: handing over a double-rounded lambda
/// perturbs it off the point spectrum by ~1e-16 relative, which seeds the
/// dominant solution at the same level no matter how precisely the
/// recurrence itself is carried out.
std::vector<double> gauged_coefficients(Branch branch, int x, double sigma,
                                        const QBase<double>& base, int dim);

}  // namespace detail

}  // namespace qleg
