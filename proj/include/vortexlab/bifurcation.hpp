#pragma once

#include "vortexlab/stability.hpp"

namespace vortexlab {

/// One sample of the secondary branch psi = psi0 + eps psi_c + eps^2 psi_i at
/// parameters (1 + eps sigma) * (nu_c, mu_c).
struct BranchPoint {
    double epsilon = 0.0;
    double sigma = 0.0;
    SpectralField psi_i;
    SpectralField psi_total;
    FluidParams params;
    double residual = 0.0;
    int iterations = 0;
    bool converged = false;
};

/// L2 norm of the steady operator applied to psi, Galerkin-truncated to the
/// full square set n,m <= K:
///   (-mu D + nu D^2)(psi - psi0) + J(psi0, (2+D)(psi - psi0)) + J(psi - psi0, D(psi - psi0)).
double steady_residual(const SpectralField& psi, const FluidParams& p, int K);

/// Branch forcing F_eps(sigma, psi_i) =
///   -eps sigma (-mu_c D + nu_c D^2) psi_i - J(psi_c + eps psi_i, D(psi_c + eps psi_i)),
/// restricted to the truncation tr.
SpectralField f_epsilon(double sigma, const SpectralField& psi_i, double epsilon,
                        const SpectralField& psi_c, const FluidParams& pc,
                        const Truncation& tr);

/// Solve L x = rhs with (x, psi_c) = 0 through the bordered system
/// [L, c; c^T, 0]; throws when rhs fails the solvability condition
/// (rhs, psi_star) = 0.
SpectralField bordered_solve(const SpectralField& rhs, const SpectralField& psi_c,
                             const SpectralField& psi_star, const FluidParams& pc,
                             const Truncation& tr);

/// Picard iteration of the branch map from (sigma, psi_i) = (sigma0, psi_i0)
/// until the increment |d sigma| + ||d psi_i||_H4 drops below tol.
BranchPoint fixed_point(double epsilon, const SpectralField& psi_c,
                        const SpectralField& psi_star, const FluidParams& pc, int K,
                        double tol = 1e-12, int max_iter = 200, double sigma0 = 0.0,
                        const SpectralField& psi_i0 = {});

/// fixed_point per epsilon with warm starts from the previous point; failed
/// points are kept in the output with converged = false.
std::vector<BranchPoint> sweep_branch(const std::vector<double>& eps_list,
                                      const SpectralField& psi_c,
                                      const SpectralField& psi_star,
                                      const FluidParams& pc, int K,
                                      double tol = 1e-12, int max_iter = 200);

/// Residual of the assembled branch field when (sigma, psi_i) are frozen at
/// their eps = 0 values; decays like eps^3 along the true branch.
double precorrection_defect(double epsilon, const SpectralField& psi_c,
                            const BranchPoint& at_zero, const FluidParams& pc, int K);

}  // namespace vortexlab
