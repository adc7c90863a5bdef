#include "vortexlab/stability.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace vortexlab {

namespace {

Mode principal_mode(ParityClass cls) {
    switch (cls) {
        case ParityClass::E1: return {1, 1};
        case ParityClass::E2: return {1, 2};
        case ParityClass::E3: return {2, 1};
        default: throw std::invalid_argument("no principal mode for class EE");
    }
}

double leading_real_part(const FluidParams& p, const Truncation& tr) {
    const StabilityMatrix sm = assemble_a_matrix(p, tr);
    return Eigen::EigenSolver<Eigen::MatrixXd>(sm.entries, false)
        .eigenvalues()
        .real()
        .maxCoeff();
}

Truncation point_truncation(const NeutralPoint& np) {
    return {np.K, np.shape, Truncation::Closure::pure_class, np.cls};
}

}  // namespace

SpectralField dissipation_apply(const SpectralField& psi, const FluidParams& p) {
    SpectralField out;
    for (const auto& [mo, v] : psi.coeffs) {
        const double b = beta(mo);
        out.coeffs.emplace(mo, b * (p.mu + p.nu * b) * v);
    }
    return out;
}

EigenSolution leading_eigenvalue(const FluidParams& p, ParityClass cls, int K) {
    const StabilityMatrix sm = assemble_a_matrix(p, pure_tri(cls, K));
    Eigen::EigenSolver<Eigen::MatrixXd> es(sm.entries);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("leading_eigenvalue: eigensolver failed");
    const auto& ev = es.eigenvalues();
    int best = 0;
    for (int i = 1; i < ev.size(); ++i) {
        const double dre = ev(i).real() - ev(best).real();
        if (dre > 1e-12 ||
            (std::abs(dre) <= 1e-12 && std::abs(ev(i).imag()) > std::abs(ev(best).imag())))
            best = i;
    }
    EigenSolution sol;
    sol.lambda = ev(best);
    sol.cls = cls;
    sol.params = p;
    sol.K = K;
    Eigen::VectorXd v = es.eigenvectors().col(best).real();
    const double norm = v.norm();
    if (norm > 0.0) v /= norm;
    // Deterministic sign: first nonzero component positive.
    for (int i = 0; i < v.size(); ++i) {
        if (v(i) != 0.0) {
            if (v(i) < 0.0) v = -v;
            break;
        }
    }
    sol.eigenfield = from_vector(v, sm.ordering);
    return sol;
}

DetResult truncated_det(const FluidParams& p, ParityClass cls, int K) {
    const StabilityMatrix sm = assemble_b_matrix(p, cls, K);
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(sm.entries);
    DetResult r;
    r.sign = lu.permutationP().determinant() > 0 ? 1 : -1;
    for (int i = 0; i < sm.entries.rows(); ++i) {
        const double d = lu.matrixLU()(i, i);
        if (std::abs(d) < 1e-300) return {0, -std::numeric_limits<double>::infinity()};
        if (d < 0.0) r.sign = -r.sign;
        r.log_abs += std::log(std::abs(d));
    }
    return r;
}

NeutralPoint critical_on_ray(double dnu, double dmu, ParityClass cls, int K, double tol) {
    if (dnu < 0.0 || dmu < 0.0 || (dnu == 0.0 && dmu == 0.0))
        throw std::invalid_argument("critical_on_ray: direction must be nonnegative, nonzero");
    const double len = std::hypot(dnu, dmu);
    dnu /= len;
    dmu /= len;
    auto grow = [&](double t) {
        return leading_real_part({t * dnu, t * dmu}, pure_tri(cls, K));
    };

    // Walk inward from t = 10 (dissipation-dominated, stable) until the leading
    // eigenvalue turns positive: coarse linear sweep first, then a geometric
    // tail so thin unstable windows near the origin are not stepped over.
    double hi = 10.0;
    double lo = -1.0;
    double t_prev = hi;
    bool found = false;
    for (double t = hi - 0.05; t >= 0.1 - 1e-12 && !found; t -= 0.05) {
        if (grow(t) > 0.0) { lo = t; hi = t_prev; found = true; }
        t_prev = t;
    }
    for (double t = 0.1 * 0.7; t > 1e-6 && !found; t *= 0.7) {
        if (grow(t) > 0.0) { lo = t; hi = t_prev; found = true; }
        t_prev = t;
    }
    if (!found) {
        std::ostringstream msg;
        msg << "critical_on_ray: no eigenvalue crossing on ray (" << dnu << "," << dmu
            << ") for " << parity_name(cls) << " K=" << K;
        throw std::runtime_error(msg.str());
    }
    for (int it = 0; it < 80 && hi - lo > tol; ++it) {
        const double mid = 0.5 * (lo + hi);
        (grow(mid) > 0.0 ? lo : hi) = mid;
    }
    const double t_c = 0.5 * (lo + hi);
    return {t_c * dnu, t_c * dmu, cls, K, hi - lo};
}

CurveTrace trace_neutral_curve(ParityClass cls, int K, int n_points, double tol) {
    if (n_points < 2) throw std::invalid_argument("trace_neutral_curve: n_points < 2");
    CurveTrace out;
    for (int i = 0; i < n_points; ++i) {
        const double theta = 0.5 * std::numbers::pi * i / (n_points - 1);
        try {
            out.points.push_back(
                critical_on_ray(std::cos(theta), std::sin(theta), cls, K, tol));
        } catch (const std::runtime_error& e) {
            out.warnings.emplace_back(e.what());
        }
    }
    std::sort(out.points.begin(), out.points.end(),
              [](const NeutralPoint& a, const NeutralPoint& b) { return a.nu_c < b.nu_c; });
    return out;
}

NeutralPoint refine_critical(const NeutralPoint& np) {
    NeutralPoint r = np;
    // The friction term contributes -mu to every eigenvalue, so one additive
    // correction lands exactly on the crossing.
    r.mu_c += leading_real_part({np.nu_c, np.mu_c}, point_truncation(np));
    r.bracket_width = 0.0;
    return r;
}

SpectralField null_eigenfunction(const NeutralPoint& np) {
    const StabilityMatrix sm =
        assemble_a_matrix({np.nu_c, np.mu_c}, point_truncation(np));
    const int N = static_cast<int>(sm.ordering.size());

    Eigen::BDCSVD<Eigen::MatrixXd> svd(sm.entries);
    const auto& sv = svd.singularValues();
    if (N >= 2 && std::abs(sv(N - 1) - sv(N - 2)) <= 1e-8 * sv(N - 2))
        throw std::runtime_error("null_eigenfunction: degenerate null space");

    Eigen::PartialPivLU<Eigen::MatrixXd> lu(sm.entries);
    Eigen::VectorXd v = Eigen::VectorXd::Ones(N);
    v.normalize();
    double rayleigh = 1.0;
    for (int it = 0; it < 100; ++it) {
        Eigen::VectorXd w = lu.solve(v);
        const double nw = w.norm();
        if (!std::isfinite(nw) || nw == 0.0) break;
        w /= nw;
        rayleigh = w.dot(sm.entries * w);
        const double change = std::min((w - v).norm(), (w + v).norm());
        v = w;
        if (change < 1e-14) break;
    }
    // One step of iterative refinement toward the exact null direction.
    v = lu.solve(v).normalized();
    (void)rayleigh;

    const int pi = sm.index_of(principal_mode(np.cls));
    if (pi < 0 || v(pi) == 0.0)
        throw std::runtime_error("null_eigenfunction: principal coefficient vanished");
    v /= v(pi);
    return from_vector(v, sm.ordering);
}

SpectralField conjugate_eigenfunction(const SpectralField& psi_c) {
    SpectralField out;
    for (const auto& [mo, v] : psi_c.coeffs) {
        const Mode sw{mo.m, mo.n};
        out.add(sw, (beta(sw) - 2.0) * v);
    }
    return out;
}

double adjoint_residual(const SpectralField& psi_star, const FluidParams& p, int K) {
    if (psi_star.coeffs.empty()) throw std::invalid_argument("adjoint_residual: empty field");
    const ParityClass cls = parity_class(psi_star.coeffs.begin()->first);
    const StabilityMatrix sm = adjoint_a_matrix(p, pure_tri(cls, K));
    const Eigen::VectorXd x = to_vector(psi_star, sm.ordering);
    return (sm.entries * x).norm() / x.norm();
}

double nondegeneracy_pairing(const SpectralField& psi_c, const SpectralField& psi_star,
                             const FluidParams& p) {
    return inner_product(dissipation_apply(psi_c, p), psi_star);
}

double energy_identity_residual(const SpectralField& f, const FluidParams& p,
                                double lambda) {
    double sum = 0.0, scale = 0.0;
    for (const auto& [mo, a] : f.coeffs) {
        const double b = beta(mo);
        const double term = b * (lambda + p.mu + p.nu * b) * (b - 2.0) * a * a;
        sum += term;
        scale += std::abs(term);
    }
    return scale > 0.0 ? std::abs(sum) / scale : 0.0;
}

}  // namespace vortexlab
