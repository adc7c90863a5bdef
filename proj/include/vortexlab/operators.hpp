#pragma once

#include <Eigen/Dense>

#include "vortexlab/basis.hpp"
#include "vortexlab/params.hpp"

namespace vortexlab {

/// Dense matrix of the linearized operator restricted to a mode set.  In
/// a-coordinates the entries act on the raw coefficients a_{nm} and eigenvalues
/// are growth rates; in b-coordinates rows are rescaled so the off-diagonal
/// coupling entries are integers.
struct StabilityMatrix {
    Eigen::MatrixXd entries;
    std::vector<Mode> ordering;
    enum class Coords { a, b } coords = Coords::a;
    FluidParams params;

    int index_of(Mode mo) const {
        for (int i = 0; i < static_cast<int>(ordering.size()); ++i)
            if (ordering[i] == mo) return i;
        return -1;
    }
};

/// b-coordinate diagonal entry alpha_{nm} = 8 beta (mu + nu beta) / (beta - 2).
inline double alpha_coeff(Mode mo, const FluidParams& p) {
    const double b = beta(mo);
    return 8.0 * b * (p.mu + p.nu * b) / (b - 2.0);
}

/// Exact sine-coefficient expansion of J(f,g) = f_x g_y - f_y g_x by
/// product-to-sum identities; negative output frequencies fold back with a sign
/// flip (sin(-u) = -sin u) and zero frequencies vanish.
SpectralField jacobian_brackets(const SpectralField& f, const SpectralField& g);

/// J(psi0, (Delta + c) psi) via the sparse (n,m) -> (n+-2, m+-2) stencil.
/// Equals jacobian_brackets(basic_flow(), shifted_laplacian(psi, c)).
SpectralField shear_coupling(const SpectralField& psi, double c);

/// Coupling matrix C of the a-coordinate row identity
///   beta (lambda + mu + nu beta) a_{nm} + (C a)_{nm} = 0.
Eigen::MatrixXd coupling_matrix(const std::vector<Mode>& ordering);

/// Evolution matrix M = -diag(mu + nu beta) - diag(1/beta) C; eigenvalues of M
/// are the growth rates lambda on the given truncation.
StabilityMatrix assemble_a_matrix(const FluidParams& p, const Truncation& trunc);

/// Integer-stencil matrix acting on b_{nm} = (beta-2) a_{nm} over the class
/// modes with n+m <= K; diagonal alpha_{nm}, off-diagonal entries integers.
StabilityMatrix assemble_b_matrix(const FluidParams& p, ParityClass cls, int K);

/// Adjoint of the a-matrix under the orthonormal inner product:
/// M* = diag(1/beta) M^T diag(beta), so (L phi, chi) = (phi, L* chi) exactly.
StabilityMatrix adjoint_a_matrix(const FluidParams& p, const Truncation& trunc);

/// Coefficient vector of a field over an ordering (missing modes are 0).
Eigen::VectorXd to_vector(const SpectralField& f, const std::vector<Mode>& ordering);
SpectralField from_vector(const Eigen::VectorXd& v, const std::vector<Mode>& ordering);

}  // namespace vortexlab
