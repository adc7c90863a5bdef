// End-to-end checks of the numerical contracts this toolkit is built around.
// Each criterion prints exactly one PASS/FAIL line; the exit code is the number
// of failed criteria.

#include <Eigen/Dense>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <random>
#include <vector>

#include "vortexlab/bifurcation.hpp"
#include "vortexlab/dynamics.hpp"
#include "vortexlab/io.hpp"
#include "vortexlab/params.hpp"

using namespace vortexlab;

namespace {

int g_failures = 0;
std::vector<std::string> g_details;

void detail(const std::string& s) { g_details.push_back(s); }

void report(int id, const std::string& what, bool ok, double seconds) {
    std::printf("criterion %2d: %s - %s (%.1f s)\n", id, ok ? "PASS" : "FAIL",
                what.c_str(), seconds);
    for (const auto& d : g_details) std::printf("              %s\n", d.c_str());
    g_details.clear();
    if (!ok) ++g_failures;
    std::fflush(stdout);
}

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    }
};

bool close_rel(double got, double want, double tol) {
    return std::abs(got - want) <= tol * std::abs(want);
}

// ---------------------------------------------------------------- criterion 1

bool c1_reference_operator() {
    const FluidParams p{0.1, 0.2};
    const StabilityMatrix sm = assemble_b_matrix(p, ParityClass::E1, 8);
    if (sm.entries.rows() != 10) {
        detail("expected a 10x10 operator");
        return false;
    }
    auto al = [&](int n, int m) { return alpha_coeff({n, m}, p); };
    const double a11 = al(1, 1), a13 = al(1, 3), a31 = al(3, 1), a15 = al(1, 5),
                 a51 = al(5, 1), a33 = al(3, 3), a17 = al(1, 7), a71 = al(7, 1),
                 a35 = al(3, 5), a53 = al(5, 3);
    const double ref[10][10] = {
        {a11, -2, 2, 0, 0, 0, 0, 0, 0, 0},  {2, a13, -4, -4, 0, 0, 0, 0, 2, 0},
        {-2, 4, a31, 0, 4, 0, 0, 0, 0, -2}, {0, 4, 0, a15, 0, -6, -6, 0, 0, 0},
        {0, 0, -4, 0, a51, 6, 0, 6, 0, 0},  {0, 0, 0, 6, -6, a33, 0, 0, 0, 0},
        {0, 0, 0, 6, 0, 0, a17, 0, -8, 0},  {0, 0, 0, 0, -6, 0, 0, a71, 0, 8},
        {0, -2, 0, 0, 0, 0, 8, 0, a35, -8}, {0, 0, 2, 0, 0, 0, 0, -8, 8, a53},
    };
    bool ok = true;
    for (int i = 0; i < 10; ++i)
        for (int j = 0; j < 10; ++j) {
            if (i == j)
                ok &= close_rel(sm.entries(i, j), ref[i][j], 1e-14);
            else
                ok &= sm.entries(i, j) == ref[i][j];
        }
    if (!ok) detail("entry mismatch against the explicit 10x10 operator");
    return ok;
}

// ---------------------------------------------------------------- criterion 2

bool c2_small_determinant() {
    bool ok = true;
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> dist(0.01, 0.5);
    for (int trial = 0; trial < 100; ++trial) {
        const FluidParams p{dist(rng), dist(rng)};
        const double a11 = alpha_coeff({1, 1}, p), a13 = alpha_coeff({1, 3}, p),
                     a31 = alpha_coeff({3, 1}, p);
        const double want = a11 * a13 * a31 + 16 * a11 + 4 * a13 + 4 * a31;
        const double got = assemble_b_matrix(p, ParityClass::E1, 4).entries.determinant();
        if (!close_rel(got, want, 1e-12)) {
            detail("determinant mismatch at nu=" + io::num17(p.nu) +
                   " mu=" + io::num17(p.mu));
            ok = false;
            break;
        }
    }
    const NeutralPoint root = critical_on_ray(0.0, 1.0, ParityClass::E1, 4, 1e-9);
    const double want_root = std::sqrt(832.0 / 12800.0);
    if (std::abs(root.mu_c - want_root) > 1e-6) {
        detail("three-mode friction root " + io::num17(root.mu_c) + " vs " +
               io::num17(want_root));
        ok = false;
    }
    return ok;
}

// ---------------------------------------------------------------- criterion 3

bool c3_coarse_roots() {
    const NeutralPoint mu_axis = critical_on_ray(0.0, 1.0, ParityClass::E1, 8, 1e-8);
    const NeutralPoint nu_axis = critical_on_ray(1.0, 0.0, ParityClass::E1, 8, 1e-8);
    bool ok = true;
    if (std::abs(mu_axis.mu_c - 0.236) > 0.002) {
        detail("mu-axis root " + io::num17(mu_axis.mu_c) + " outside 0.236 +/- 0.002");
        ok = false;
    }
    if (std::abs(nu_axis.nu_c - 0.237) > 0.002) {
        detail("nu-axis root " + io::num17(nu_axis.nu_c) + " outside 0.237 +/- 0.002");
        ok = false;
    }
    return ok;
}

// ---------------------------------------------------------------- criterion 4

bool endpoint_check(double dnu, double dmu, ParityClass cls, double want, double tol,
                    const std::string& label) {
    try {
        const NeutralPoint np = critical_on_ray(dnu, dmu, cls, 40, 1e-7);
        const double got = dmu == 0.0 ? np.nu_c : np.mu_c;
        if (close_rel(got, want, tol)) return true;
        detail(label + ": computed " + io::num17(got) + ", expected " + io::num17(want) +
               " within " + io::num6(100 * tol) + "%");
    } catch (const std::exception& e) {
        detail(label + ": " + e.what());
    }
    return false;
}

bool c4_converged_endpoints() {
    bool ok = true;
    ok &= endpoint_check(1, 0, ParityClass::E1, 0.2371, 0.01, "odd-odd nu-axis");
    ok &= endpoint_check(0, 1, ParityClass::E1, 0.2310, 0.01, "odd-odd mu-axis");
    ok &= endpoint_check(1, 0, ParityClass::E2, 0.0415, 0.02, "odd-even nu-axis");
    ok &= endpoint_check(0, 1, ParityClass::E2, 0.01515, 0.02, "odd-even mu-axis");
    // the two mixed-parity curves must agree ray by ray
    for (auto [dnu, dmu] : {std::pair{1.0, 0.0}, {1.0, 0.2}, {1.0, 0.5}, {0.0, 1.0}}) {
        bool t2 = true, t3 = true;
        NeutralPoint p2, p3;
        try {
            p2 = critical_on_ray(dnu, dmu, ParityClass::E2, 40, 1e-7);
        } catch (const std::exception&) {
            t2 = false;
        }
        try {
            p3 = critical_on_ray(dnu, dmu, ParityClass::E3, 40, 1e-7);
        } catch (const std::exception&) {
            t3 = false;
        }
        if (t2 != t3 ||
            (t2 && (std::abs(p2.nu_c - p3.nu_c) > 1e-5 ||
                    std::abs(p2.mu_c - p3.mu_c) > 1e-5))) {
            detail("mixed-parity curves disagree on ray (" + io::num6(dnu) + "," +
                   io::num6(dmu) + ")");
            ok = false;
        }
    }
    return ok;
}

// ---------------------------------------------------------------- criterion 5

bool c5_parameter_transform() {
    bool ok = true;
    auto fwd = [&](double nu, double mu, double re, double rh, double re_tol,
                   double rh_tol) {
        const DimensionlessNumbers d = re_rh_from_nu_mu({nu, mu});
        if (std::abs(*d.re - re) > re_tol || std::abs(*d.rh - rh) > rh_tol) {
            detail("forward (" + io::num6(nu) + "," + io::num6(mu) + ") gave Re=" +
                   io::num6(*d.re) + " Rh=" + io::num6(*d.rh));
            ok = false;
        }
    };
    auto inv = [&](double re, double rh, double nu, double mu) {
        const FluidParams p = nu_mu_from_re_rh(re, rh);
        if (std::abs(p.nu - nu) > 5e-5 || std::abs(p.mu - mu) > 5e-5) {
            detail("inverse (" + io::num6(re) + "," + io::num6(rh) + ") gave nu=" +
                   io::num6(p.nu) + " mu=" + io::num6(p.mu));
            ok = false;
        }
    };
    fwd(0.0005, 0.23, 24158, 1.33, 1.0, 0.005);
    fwd(0.00054, 0.2315, 22446, 1.326, 1.0, 0.0005);
    fwd(0.00054, 0.0177, 6378, 4.929, 1.0, 0.0005);
    inv(700, 1.55, 0.0173, 0.1982);
    inv(700, 7, 0.0058, 0.0148);
    for (auto [nu, mu] : {std::pair{0.0005, 0.23}, {0.00054, 0.0177}, {0.0173, 0.1982}}) {
        const DimensionlessNumbers d = re_rh_from_nu_mu({nu, mu});
        const FluidParams back = nu_mu_from_re_rh(*d.re, *d.rh);
        if (!close_rel(back.nu, nu, 1e-9) || !close_rel(back.mu, mu, 1e-9)) {
            detail("round trip drift at (" + io::num6(nu) + "," + io::num6(mu) + ")");
            ok = false;
        }
    }
    return ok;
}

// ---------------------------------------------------------------- criterion 6

Mode principal_mode(ParityClass cls) {
    if (cls == ParityClass::E2) return {1, 2};
    if (cls == ParityClass::E3) return {2, 1};
    return {1, 1};
}

bool c6_spectral_identities() {
    bool ok = true;
    for (ParityClass cls : {ParityClass::E1, ParityClass::E2, ParityClass::E3}) {
        const int points = cls == ParityClass::E1 ? 9 : 5;
        const CurveTrace trace = trace_neutral_curve(cls, 40, points, 1e-6);
        if (trace.points.empty()) {
            detail(std::string(parity_name(cls)) + ": no neutral points traced");
            ok = false;
            continue;
        }
        for (NeutralPoint np : trace.points) {
            np = refine_critical(np);
            const FluidParams p{np.nu_c, np.mu_c};
            const SpectralField psi_c = null_eigenfunction(np);
            const double energy_res = energy_identity_residual(psi_c, p, 0.0);
            // class identity: the single below-threshold mode balances the rest
            const Mode pm = principal_mode(cls);
            double lhs = 0.0, rhs = 0.0;
            for (const auto& [mo, a] : psi_c.coeffs) {
                const double b = beta(mo);
                const double term = b * (p.mu + p.nu * b) * (b - 2.0) * a * a;
                (mo == pm ? lhs : rhs) += term;
            }
            const double class_res = std::abs(lhs + rhs) / std::abs(lhs);
            const SpectralField psi_star = conjugate_eigenfunction(psi_c);
            const double adj_res = adjoint_residual(psi_star, p, np.K);
            const double pairing = nondegeneracy_pairing(psi_c, psi_star, p);
            const bool point_ok =
                energy_res < 1e-9 && class_res < 1e-9 && adj_res < 1e-8 &&
                (cls != ParityClass::E1 || pairing < 0.0);
            if (!point_ok) {
                detail(std::string(parity_name(cls)) + " (" + io::num6(np.nu_c) + "," +
                       io::num6(np.mu_c) + "): energy " + io::num6(energy_res) +
                       ", class " + io::num6(class_res) + ", adjoint " +
                       io::num6(adj_res) + ", pairing " + io::num6(pairing));
                ok = false;
            }
        }
    }
    return ok;
}

// ---------------------------------------------------------------- criterion 7

bool c7_branch() {
    bool ok = true;
    NeutralPoint np;
    np.nu_c = 0.00054;
    np.mu_c = 0.23;
    np.cls = ParityClass::E1;
    np.K = 16;
    np.shape = Truncation::Shape::square;
    np = refine_critical(np);
    const FluidParams pc{np.nu_c, np.mu_c};
    const SpectralField psi_c = null_eigenfunction(np);
    const SpectralField psi_star = conjugate_eigenfunction(psi_c);

    const BranchPoint at_zero = fixed_point(0.0, psi_c, psi_star, pc, np.K);
    if (!at_zero.converged || std::abs(at_zero.sigma) > 1e-10) {
        detail("zero-amplitude point: sigma = " + io::num17(at_zero.sigma));
        ok = false;
    }
    for (double eps : {0.01, 0.02, 0.05}) {
        const BranchPoint bp = fixed_point(eps, psi_c, psi_star, pc, np.K);
        const double ortho = std::abs(inner_product(bp.psi_i, psi_c));
        if (!bp.converged || bp.residual > 1e-8 || ortho > 1e-12) {
            detail("eps=" + io::num6(eps) + ": converged=" +
                   (bp.converged ? "yes" : "no") + " residual=" + io::num6(bp.residual) +
                   " ortho=" + io::num6(ortho));
            ok = false;
        }
    }
    const double d1 = precorrection_defect(0.01, psi_c, at_zero, pc, np.K);
    const double d2 = precorrection_defect(0.02, psi_c, at_zero, pc, np.K);
    if (d1 <= 0 || d2 / d1 < 5.5 || d2 / d1 > 10.5) {
        detail("defect ratio " + io::num6(d2 / d1) + " not consistent with cubic decay");
        ok = false;
    }
    return ok;
}

// ------------------------------------------------------------- criteria 8 & 9

bool c8_secondary_attractor() {
    const FluidParams p{0.0005, 0.23};
    EvolveConfig cfg;
    cfg.params = p;
    cfg.K = 41;
    cfg.dt = 2.5e-3;  // explicit-advection stability needs dt < ~3e-3 here
    cfg.t_max = 9000.0;
    cfg.steady_tol = 1e-9;
    cfg.snapshot_stride = 1 << 30;

    // the unperturbed flow must sit exactly on the fixed point
    Integrator probe(cfg);
    probe.set_state(basic_flow());
    for (int i = 0; i < 10; ++i) probe.step();
    if (probe.rate_norm() > 1e-12) {
        detail("basic flow drifts: rate " + io::num6(probe.rate_norm()));
        return false;
    }

    SpectralField init = basic_flow();
    init.add({1, 1}, -0.1);
    const EvolveResult res = evolve_to_steady(init, cfg);
    const double a11 = res.final_field.at({1, 1});
    detail("K=41: t_end " + io::num6(res.t_end) + ", a11 " + io::num6(a11) +
           ", rate " + io::num6(res.samples.back().rate_norm));
    if (res.converged && a11 < -0.01) return true;
    if (!res.converged)
        detail("no steady state before t_max");
    else
        detail("relaxed back to the four-vortex state instead of the secondary flow");
    // Attribution run: at a truncation comparable to the original analysis the
    // stability boundary sits above mu = 0.23 and the secondary state is the
    // attractor; at the converged truncation the boundary has moved below it.
    cfg.K = 16;
    cfg.t_max = 12000.0;
    const EvolveResult coarse = evolve_to_steady(init, cfg);
    detail("K=16 reference: t_end " + io::num6(coarse.t_end) + ", a11 " +
           io::num6(coarse.final_field.at({1, 1})) +
           (coarse.converged ? " (steady)" : " (not steady)"));
    return false;
}

bool c9_merging_cascade() {
    bool ok = true;
    std::vector<int> counts;
    for (double rh : {1.55, 3.0, 5.0, 7.0}) {
        EvolveConfig cfg;
        cfg.params = nu_mu_from_re_rh(700, rh);
        cfg.K = 41;
        cfg.dt = 1e-2;
        cfg.t_max = 3000.0;
        cfg.steady_tol = 1e-9;
        cfg.snapshot_stride = 1 << 30;
        SpectralField init = basic_flow();
        init.add({1, 1}, 0.1);
        const EvolveResult res = evolve_to_steady(init, cfg);
        const int count = vortex_census(res.final_field).count;
        counts.push_back(count);
        detail("Rh=" + io::num6(rh) + ": " + std::to_string(count) + " vortices, " +
               (res.converged ? "steady" : "NOT steady") + " at t=" +
               io::num6(res.t_end));
        if (!res.converged) ok = false;
    }
    for (size_t i = 1; i < counts.size(); ++i)
        if (counts[i] > counts[i - 1]) ok = false;
    if (counts.back() != 2) ok = false;
    return ok;
}

// --------------------------------------------------------------- criterion 10

bool c10_linearized_growth() {
    const FluidParams p{0.02, 0.02};
    const int K = 16;
    const Truncation tr{K, Truncation::Shape::square, Truncation::Closure::pure_class,
                        ParityClass::E1};
    const StabilityMatrix sm = assemble_a_matrix(p, tr);
    Eigen::EigenSolver<Eigen::MatrixXd> es(sm.entries);
    int lead = 0;
    for (int i = 1; i < es.eigenvalues().size(); ++i)
        if (es.eigenvalues()(i).real() > es.eigenvalues()(lead).real()) lead = i;
    const double lambda = es.eigenvalues()(lead).real();
    if (std::abs(es.eigenvalues()(lead).imag()) > 1e-12) {
        detail("leading mode unexpectedly oscillatory");
        return false;
    }
    Eigen::VectorXd v = es.eigenvectors().col(lead).real();
    v /= v.norm();

    EvolveConfig cfg;
    cfg.params = p;
    cfg.K = K;
    cfg.dt = 1e-3;
    Integrator it(cfg);
    const double delta = 1e-8;
    SpectralField init = basic_flow();
    for (size_t i = 0; i < sm.ordering.size(); ++i)
        init.add(sm.ordering[i], delta * v(i));
    it.set_state(init);
    Eigen::MatrixXd pert0 = it.raw_state();
    pert0(1, 1) -= 1.0;  // remove the basic-flow coefficient at mode (2,2)
    it.step();
    Eigen::MatrixXd pert1 = it.raw_state();
    pert1(1, 1) -= 1.0;
    const double growth =
        (pert0.cwiseProduct(pert1 - pert0)).sum() / (cfg.dt * pert0.squaredNorm());
    const double rel = std::abs(growth - lambda) / std::abs(lambda);
    detail("spectral " + io::num17(lambda) + ", one-step " + io::num17(growth) +
           ", relative gap " + io::num6(rel));
    return rel < 1e-4;
}

}  // namespace

int main() {
    struct Item {
        int id;
        const char* what;
        bool (*fn)();
    };
    const Item items[] = {
        {1, "coarse coupling operator matches the explicit 10x10 form", c1_reference_operator},
        {2, "three-mode determinant closed form and friction root", c2_small_determinant},
        {3, "ten-mode axis intercepts", c3_coarse_roots},
        {4, "converged neutral-curve endpoints (K=40)", c4_converged_endpoints},
        {5, "parameter transform against tabulated pairs", c5_parameter_transform},
        {6, "spectral identities along the neutral curves", c6_spectral_identities},
        {7, "secondary-branch fixed point", c7_branch},
        {8, "secondary-flow capture by time evolution", c8_secondary_attractor},
        {9, "vortex merging cascade at Re=700", c9_merging_cascade},
        {10, "linearized time step agrees with the spectral growth rate",
         c10_linearized_growth},
    };
    for (const Item& item : items) {
        Timer t;
        bool ok = false;
        try {
            ok = item.fn();
        } catch (const std::exception& e) {
            detail(std::string("exception: ") + e.what());
        }
        report(item.id, item.what, ok, t.seconds());
    }
    std::printf("%d of 10 criteria failed\n", g_failures);
    return g_failures;
}
