#include "vortexlab/bifurcation.hpp"

#include <cmath>

namespace vortexlab {

namespace {

/// Linearized steady operator at the critical parameters, applied in
/// coefficient space: L psi = (-mu D + nu D^2) psi + J(psi0, (2+D) psi).
SpectralField apply_linear(const SpectralField& psi, const FluidParams& p) {
    return dissipation_apply(psi, p) + shear_coupling(psi, 2.0);
}

Truncation sigma_square(const SpectralField& psi_c, int K) {
    Truncation tr = full_square(K);
    tr.closure = Truncation::Closure::sigma;
    tr.cls = parity_class(psi_c.coeffs.begin()->first);
    return tr;
}

}  // namespace

double steady_residual(const SpectralField& psi, const FluidParams& p, int K) {
    const SpectralField d = psi - basic_flow();
    const SpectralField r =
        dissipation_apply(d, p) + shear_coupling(d, 2.0) + jacobian_brackets(d, laplacian(d));
    return l2_norm(r.restricted(full_square(K)));
}

SpectralField f_epsilon(double sigma, const SpectralField& psi_i, double epsilon,
                        const SpectralField& psi_c, const FluidParams& pc,
                        const Truncation& tr) {
    const SpectralField u = psi_c + epsilon * psi_i;
    SpectralField f = (-1.0) * jacobian_brackets(u, laplacian(u));
    if (epsilon != 0.0 && sigma != 0.0)
        f = f - (epsilon * sigma) * dissipation_apply(psi_i, pc);
    return f.restricted(tr);
}

SpectralField bordered_solve(const SpectralField& rhs, const SpectralField& psi_c,
                             const SpectralField& psi_star, const FluidParams& pc,
                             const Truncation& tr) {
    const double mismatch = std::abs(inner_product(rhs, psi_star));
    const double scale = std::max(1.0, l2_norm(rhs) * l2_norm(psi_star));
    if (mismatch > 1e-10 * scale)
        throw std::runtime_error("bordered_solve: right-hand side violates solvability");

    const std::vector<Mode> ordering = tr.modes();
    const int N = static_cast<int>(ordering.size());
    const Eigen::MatrixXd C = coupling_matrix(ordering);
    Eigen::MatrixXd B = Eigen::MatrixXd::Zero(N + 1, N + 1);
    for (int i = 0; i < N; ++i) {
        const double b = beta(ordering[i]);
        B(i, i) = b * (pc.mu + pc.nu * b);
        B.block(i, 0, 1, N) += C.row(i);
    }
    const Eigen::VectorXd c = to_vector(psi_c, ordering);
    B.block(0, N, N, 1) = c;
    B.block(N, 0, 1, N) = c.transpose();

    Eigen::VectorXd r(N + 1);
    r.head(N) = to_vector(rhs, ordering);
    r(N) = 0.0;
    const Eigen::VectorXd x = Eigen::PartialPivLU<Eigen::MatrixXd>(B).solve(r);
    return from_vector(x.head(N), ordering);
}

BranchPoint fixed_point(double epsilon, const SpectralField& psi_c,
                        const SpectralField& psi_star, const FluidParams& pc, int K,
                        double tol, int max_iter, double sigma0,
                        const SpectralField& psi_i0) {
    const Truncation tr = sigma_square(psi_c, K);
    const double denom = nondegeneracy_pairing(psi_c, psi_star, pc);
    if (denom == 0.0) throw std::runtime_error("fixed_point: degenerate pairing");
    const SpectralField d_psi_c = dissipation_apply(psi_c, pc);

    BranchPoint bp;
    bp.epsilon = epsilon;
    double sigma = sigma0;
    SpectralField psi_i = psi_i0.restricted(tr);
    for (int it = 1; it <= max_iter; ++it) {
        const SpectralField f = f_epsilon(sigma, psi_i, epsilon, psi_c, pc, tr);
        const double sigma_next = inner_product(f, psi_star) / denom;
        const SpectralField rhs = f - sigma_next * d_psi_c;
        const SpectralField psi_next = bordered_solve(rhs, psi_c, psi_star, pc, tr);
        const double step = std::abs(sigma_next - sigma) + h4_norm(psi_next - psi_i);
        sigma = sigma_next;
        psi_i = psi_next;
        bp.iterations = it;
        if (step < tol) {
            bp.converged = true;
            break;
        }
    }
    bp.sigma = sigma;
    bp.psi_i = psi_i;
    bp.params = {pc.nu * (1.0 + epsilon * sigma), pc.mu * (1.0 + epsilon * sigma)};
    bp.psi_total = basic_flow() + epsilon * psi_c + (epsilon * epsilon) * psi_i;
    bp.residual = steady_residual(bp.psi_total, bp.params, K);
    return bp;
}

std::vector<BranchPoint> sweep_branch(const std::vector<double>& eps_list,
                                      const SpectralField& psi_c,
                                      const SpectralField& psi_star,
                                      const FluidParams& pc, int K, double tol,
                                      int max_iter) {
    std::vector<BranchPoint> out;
    double sigma0 = 0.0;
    SpectralField psi_i0;
    for (double eps : eps_list) {
        BranchPoint bp =
            fixed_point(eps, psi_c, psi_star, pc, K, tol, max_iter, sigma0, psi_i0);
        if (bp.converged) {
            sigma0 = bp.sigma;
            psi_i0 = bp.psi_i;
        }
        out.push_back(std::move(bp));
    }
    return out;
}

double precorrection_defect(double epsilon, const SpectralField& psi_c,
                            const BranchPoint& at_zero, const FluidParams& pc, int K) {
    const SpectralField psi =
        basic_flow() + epsilon * psi_c + (epsilon * epsilon) * at_zero.psi_i;
    const FluidParams p{pc.nu * (1.0 + epsilon * at_zero.sigma),
                        pc.mu * (1.0 + epsilon * at_zero.sigma)};
    return steady_residual(psi, p, K);
}

}  // namespace vortexlab
