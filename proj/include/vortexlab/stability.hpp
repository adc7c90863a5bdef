#pragma once

#include <complex>
#include <string>
#include <vector>

#include "vortexlab/operators.hpp"

namespace vortexlab {

struct EigenSolution {
    std::complex<double> lambda;
    SpectralField eigenfield;  // real part of the eigenvector, unit L2 norm
    ParityClass cls = ParityClass::E1;
    FluidParams params;
    int K = 0;
};

struct NeutralPoint {
    double nu_c = 0.0;
    double mu_c = 0.0;
    ParityClass cls = ParityClass::E1;
    int K = 0;
    double bracket_width = 0.0;
    // Mode-set shape used when the point is refined or its eigenfunction is
    // extracted. Curve tracing uses the triangular set; branch construction
    // needs the square set so the downstream Galerkin system closes exactly.
    Truncation::Shape shape = Truncation::Shape::triangular;
};

struct DetResult {
    int sign = 0;  // -1, 0, +1
    double log_abs = 0.0;
};

struct CurveTrace {
    std::vector<NeutralPoint> points;   // sorted by nu ascending
    std::vector<std::string> warnings;  // one entry per failed ray
};

/// (-mu Delta + nu Delta^2) psi: coefficient beta (mu + nu beta) a_{nm}.
SpectralField dissipation_apply(const SpectralField& psi, const FluidParams& p);

/// Eigenpair of the class a-matrix (triangular truncation n+m <= K) with
/// maximal real part; ties broken toward larger |Im|.
EigenSolution leading_eigenvalue(const FluidParams& p, ParityClass cls, int K);

/// Sign and log-magnitude of det(assemble_b_matrix) by pivoted LU.
DetResult truncated_det(const FluidParams& p, ParityClass cls, int K);

/// Largest t <= 10 with a neutral leading eigenvalue along (nu,mu) = t*(dnu,dmu),
/// located by bisection on the eigenvalue sign to bracket width < tol.
/// Throws std::runtime_error when the ray has no crossing.
NeutralPoint critical_on_ray(double dnu, double dmu, ParityClass cls, int K,
                             double tol = 1e-6);

/// Neutral points on n_points rays with angles uniformly covering [0, pi/2];
/// rays without a crossing are skipped with a warning record.
CurveTrace trace_neutral_curve(ParityClass cls, int K, int n_points,
                               double tol = 1e-6);

/// Snap mu_c so the leading eigenvalue is zero to machine precision (the
/// friction term shifts the whole spectrum rigidly: lambda(nu,mu) = lambda(nu,0) - mu).
NeutralPoint refine_critical(const NeutralPoint& np);

/// Null vector of the a-matrix at a neutral point by inverse iteration,
/// normalized so the principal coefficient (a11 / a12 / a21 per class) is +1.
/// Throws on a degenerate null space (two smallest singular values coincide).
SpectralField null_eigenfunction(const NeutralPoint& np);

/// Coefficient map a*_{nm} = (beta_{nm} - 2) a_{mn}.
SpectralField conjugate_eigenfunction(const SpectralField& psi_c);

/// Relative L2 residual of the adjoint problem at psi_star (should vanish when
/// psi_star spans the adjoint null space at the given parameters).
double adjoint_residual(const SpectralField& psi_star, const FluidParams& p, int K);

/// ((-mu Delta + nu Delta^2) psi_c, psi*_c); strictly nonzero at a simple
/// critical point, negative on the odd-odd neutral curve.
double nondegeneracy_pairing(const SpectralField& psi_c, const SpectralField& psi_star,
                             const FluidParams& p);

/// Relative residual of the weighted coefficient identity
/// sum beta (lambda + mu + nu beta) (beta - 2) a^2 = 0 satisfied by real eigenpairs.
double energy_identity_residual(const SpectralField& f, const FluidParams& p,
                                double lambda);

}  // namespace vortexlab
