#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <fstream>
#include <iostream>

#include "vortexlab/bifurcation.hpp"
#include "vortexlab/dynamics.hpp"
#include "vortexlab/io.hpp"
#include "vortexlab/params.hpp"
#include "vortexlab/stability.hpp"

namespace vl = vortexlab;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitBlowUp = 3;
constexpr int kExitNoConverge = 4;

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    }
};

vl::ParityClass parse_class(const std::string& s) {
    if (s == "E1") return vl::ParityClass::E1;
    if (s == "E2") return vl::ParityClass::E2;
    if (s == "E3") return vl::ParityClass::E3;
    throw CLI::ValidationError("--class", "expected E1, E2 or E3");
}

/// Fill an option from the JSON config when it was not given on the command
/// line (CLI flags take precedence over the config file, which beats defaults).
template <typename T>
void config_fill(const CLI::App& cmd, const std::string& flag, const json& cfg,
                 const std::string& key, T& value) {
    if (cmd.count(flag) == 0 && cfg.contains(key)) value = cfg.at(key).get<T>();
}

json load_config(const std::string& path) {
    if (path.empty()) return json::object();
    std::ifstream in(path);
    if (!in) throw CLI::ValidationError("--config", "cannot open " + path);
    return json::parse(in);
}

json params_json(const vl::FluidParams& p) {
    json j;
    j["nu"] = p.nu;
    j["mu"] = p.mu;
    const vl::DimensionlessNumbers d = vl::re_rh_from_nu_mu(p);
    j["re"] = d.re ? json(*d.re) : json("unbounded");
    j["rh"] = d.rh ? json(*d.rh) : json("unbounded");
    return j;
}

int cmd_transform(double nu, double mu, double re, double rh, bool have_numu,
                  bool have_rerh, const fs::path& out_dir) {
    Timer timer;
    vl::FluidParams p;
    if (have_numu)
        p = {nu, mu};
    else
        p = vl::nu_mu_from_re_rh(re, rh);
    const vl::DimensionlessNumbers d = vl::re_rh_from_nu_mu(p);
    std::cout << "nu = " << vl::io::num6(p.nu) << "\nmu = " << vl::io::num6(p.mu)
              << "\nRe = " << (d.re ? vl::io::num6(*d.re) : "unbounded")
              << "\nRh = " << (d.rh ? vl::io::num6(*d.rh) : "unbounded") << "\n";
    vl::io::write_manifest(out_dir / "transform_manifest.json", "transform",
                           params_json(p), {}, timer.seconds());
    (void)have_rerh;
    return 0;
}

int cmd_neutral(vl::ParityClass cls, int K, int points, double tol,
                const fs::path& out_dir) {
    Timer timer;
    const vl::CurveTrace trace = vl::trace_neutral_curve(cls, K, points, tol);
    const std::string tag = vl::parity_name(cls);
    const fs::path csv = out_dir / ("neutral_" + tag + ".csv");
    const fs::path gp = out_dir / ("neutral_" + tag + ".gp");
    vl::io::write_neutral_csv(csv, trace);
    vl::io::write_curve_script(gp, {csv});
    json params{{"class", tag}, {"K", K}, {"points", points}, {"tol", tol}};
    vl::io::write_manifest(out_dir / ("neutral_" + tag + "_manifest.json"), "neutral",
                           params, {csv, gp}, timer.seconds());
    for (const auto& w : trace.warnings) std::cerr << "warning: " << w << "\n";
    std::cout << "wrote " << csv.string() << " (" << trace.points.size() << " points, "
              << trace.warnings.size() << " skipped rays)\n";
    return 0;
}

int cmd_eigenfunction(vl::ParityClass cls, double nu_c, double mu_c, int K,
                      int display_K, int grid_n, const fs::path& out_dir) {
    Timer timer;
    vl::NeutralPoint np{nu_c, mu_c, cls, K, 0.0};
    np = vl::refine_critical(np);
    const vl::EigenSolution lead = vl::leading_eigenvalue({np.nu_c, np.mu_c}, cls, K);
    if (np.mu_c < 0.0 || std::abs(lead.lambda.real()) >= 1e-4) {
        std::cerr << "point is not on the neutral curve: leading Re lambda = "
                  << lead.lambda.real() << " after refinement\n";
        return kExitNoConverge;
    }
    const vl::SpectralField psi_c = vl::null_eigenfunction(np);
    const std::string tag = vl::parity_name(cls);
    const fs::path coeffs = out_dir / ("eigenfunction_" + tag + ".csv");
    const fs::path display = out_dir / ("eigenfunction_" + tag + "_display.csv");
    const fs::path field = out_dir / ("eigenfunction_" + tag + "_field.csv");
    const fs::path gp = out_dir / ("eigenfunction_" + tag + ".gp");
    vl::io::write_coeff_csv(coeffs, psi_c);
    vl::io::write_coeff_csv(display, psi_c.restricted(vl::full_square(display_K)));
    vl::io::write_field_csv(field, psi_c, grid_n);
    vl::io::write_contour_script(gp, field, grid_n);
    json params{{"class", tag},         {"nu_c", np.nu_c},   {"mu_c", np.mu_c},
                {"K", K},               {"display_K", display_K}, {"grid_n", grid_n}};
    vl::io::write_manifest(out_dir / ("eigenfunction_" + tag + "_manifest.json"),
                           "eigenfunction", params, {coeffs, display, field, gp},
                           timer.seconds());
    std::cout << "critical point (" << vl::io::num6(np.nu_c) << ", "
              << vl::io::num6(np.mu_c) << "), wrote " << coeffs.string() << "\n";
    return 0;
}

int cmd_bifurcate(vl::ParityClass cls, double nu_c, double mu_c,
                  std::vector<double> eps_list, const std::string& direction, int K,
                  double tol, int max_iter, const fs::path& out_dir) {
    Timer timer;
    // The branch construction closes on the square mode set, so the critical
    // point and its eigenfunction are taken from the square eigenproblem.
    vl::NeutralPoint np{nu_c, mu_c, cls, K, 0.0, vl::Truncation::Shape::square};
    np = vl::refine_critical(np);
    vl::SpectralField psi_c = vl::null_eigenfunction(np);
    if (direction == "-") psi_c.scale(-1.0);
    const vl::SpectralField psi_star = vl::conjugate_eigenfunction(psi_c);
    const vl::FluidParams pc{np.nu_c, np.mu_c};

    std::sort(eps_list.begin(), eps_list.end());
    const std::vector<vl::BranchPoint> branch =
        vl::sweep_branch(eps_list, psi_c, psi_star, pc, K, tol, max_iter);

    const fs::path csv = out_dir / "branch.csv";
    {
        if (csv.has_parent_path()) fs::create_directories(csv.parent_path());
        std::ofstream out(csv);
        out << "epsilon,sigma,nu,mu,residual,iters,status\n";
        for (const auto& bp : branch)
            out << vl::io::num17(bp.epsilon) << ',' << vl::io::num17(bp.sigma) << ','
                << vl::io::num17(bp.params.nu) << ',' << vl::io::num17(bp.params.mu)
                << ',' << vl::io::num17(bp.residual) << ',' << bp.iterations << ','
                << (bp.converged ? "OK" : "FAIL") << '\n';
    }
    std::vector<fs::path> outputs{csv};
    for (size_t i = 0; i < branch.size(); ++i) {
        const fs::path f = out_dir / ("branch_field_" + std::to_string(i) + ".csv");
        vl::io::write_coeff_csv(f, branch[i].psi_total);
        outputs.push_back(f);
    }
    json params{{"class", vl::parity_name(cls)}, {"nu_c", np.nu_c}, {"mu_c", np.mu_c},
                {"eps_list", eps_list},          {"direction", direction},
                {"K", K},                        {"tol", tol}};
    vl::io::write_manifest(out_dir / "bifurcate_manifest.json", "bifurcate", params,
                           outputs, timer.seconds());
    const bool any_fail =
        std::any_of(branch.begin(), branch.end(),
                    [](const vl::BranchPoint& b) { return !b.converged; });
    std::cout << "wrote " << csv.string() << "\n";
    return any_fail ? kExitNoConverge : 0;
}

int cmd_evolve(const vl::FluidParams& p, const std::string& init_spec, double dt,
               double t_max, int K, double steady_tol, int stride, bool census,
               int grid_n, const fs::path& out_dir) {
    Timer timer;
    vl::SpectralField init = vl::basic_flow();
    if (init_spec == "paper-minus")
        init.add({1, 1}, -0.1);
    else if (init_spec == "paper-plus")
        init.add({1, 1}, 0.1);
    else if (init_spec.rfind("file:", 0) == 0)
        init = vl::io::read_coeff_csv(init_spec.substr(5));
    else if (init_spec != "basic")
        throw CLI::ValidationError("--init", "expected basic|paper-minus|paper-plus|file:PATH");

    vl::EvolveConfig cfg;
    cfg.params = p;
    cfg.K = K;
    cfg.dt = dt;
    cfg.t_max = t_max;
    cfg.steady_tol = steady_tol;
    cfg.snapshot_stride = stride;

    const fs::path traj = out_dir / "trajectory.csv";
    if (traj.has_parent_path()) fs::create_directories(traj.parent_path());
    std::ofstream tout(traj);
    tout << "t,rate_norm,energy,vortex_count\n";
    vl::SpectralField last_snapshot = init;
    auto on_snapshot = [&](const vl::TrajectorySample& s, const vl::SpectralField& f) {
        const vl::VortexCensus c = vl::vortex_census(f, grid_n);
        tout << vl::io::num17(s.t) << ',' << vl::io::num17(s.rate_norm) << ','
             << vl::io::num17(s.energy) << ',' << c.count << '\n';
        last_snapshot = f;
    };

    int exit_code = 0;
    vl::SpectralField final_field;
    bool converged = false;
    try {
        vl::EvolveResult res = vl::evolve_to_steady(init, cfg, on_snapshot);
        final_field = res.final_field;
        converged = res.converged;
        if (!converged) exit_code = kExitNoConverge;
    } catch (const vl::BlowUpError& e) {
        std::cerr << "blow-up: " << e.what() << " (last good snapshot saved)\n";
        final_field = last_snapshot;
        exit_code = kExitBlowUp;
    }
    tout.close();

    const fs::path field_csv = out_dir / "final_field.csv";
    const fs::path coeff_csv = out_dir / "final_coeffs.csv";
    const fs::path gp = out_dir / "final_field.gp";
    vl::io::write_coeff_csv(coeff_csv, final_field);
    vl::io::write_field_csv(field_csv, final_field, grid_n);
    vl::io::write_contour_script(gp, field_csv, grid_n);
    if (census) {
        const vl::VortexCensus c = vl::vortex_census(final_field, grid_n);
        std::cout << "vortex_count = " << c.count << "\n";
    }
    json params = params_json(p);
    params["init"] = init_spec;
    params["dt"] = dt;
    params["t_max"] = t_max;
    params["K"] = K;
    params["steady_tol"] = steady_tol;
    vl::io::write_manifest(out_dir / "evolve_manifest.json", "evolve", params,
                           {traj, field_csv, coeff_csv, gp}, timer.seconds());
    std::cout << (converged ? "converged" : "not converged") << "\n";
    return exit_code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spectral stability, bifurcation and evolution toolkit for the "
                 "four-vortex base flow"};
    app.require_subcommand(1);
    std::string config_path, out_dir = ".";
    app.add_option("--config", config_path, "JSON config file (flags take precedence)");
    app.add_option("--out", out_dir, "output directory");

    // transform
    auto* t = app.add_subcommand("transform", "convert between (nu,mu) and (Re,Rh)");
    double nu = 0, mu = 0, re = 0, rh = 0;
    t->add_option("--nu", nu);
    t->add_option("--mu", mu);
    t->add_option("--re", re);
    t->add_option("--rh", rh);

    // neutral
    auto* n = app.add_subcommand("neutral", "trace a neutral stability curve");
    std::string cls_s = "E1";
    int K = 40, points = 17;
    double tol = 1e-6;
    n->add_option("--class", cls_s);
    n->add_option("--K", K);
    n->add_option("--points", points);
    n->add_option("--tol", tol);

    // eigenfunction
    auto* e = app.add_subcommand("eigenfunction", "critical eigenfunction at a neutral point");
    double nu_c = 0, mu_c = 0;
    int display_K = 11, grid_n = 128;
    e->add_option("--class", cls_s);
    e->add_option("--nu-c", nu_c)->required();
    e->add_option("--mu-c", mu_c)->required();
    e->add_option("--K", K);
    e->add_option("--display-K", display_K);
    e->add_option("--grid", grid_n);

    // bifurcate
    auto* b = app.add_subcommand("bifurcate", "secondary branch from a neutral point");
    std::vector<double> eps_list{0.01, 0.02, 0.05};
    std::string direction = "+";
    double fp_tol = 1e-12;
    int max_iter = 200;
    b->add_option("--class", cls_s);
    b->add_option("--nu-c", nu_c)->required();
    b->add_option("--mu-c", mu_c)->required();
    b->add_option("--eps-list", eps_list)->delimiter(',');
    b->add_option("--direction", direction)->check(CLI::IsMember({"+", "-"}));
    b->add_option("--K", K);
    b->add_option("--tol", fp_tol);
    b->add_option("--max-iter", max_iter);

    // evolve
    auto* v = app.add_subcommand("evolve", "time-integrate the truncated dynamics");
    std::string init_spec = "basic";
    double dt = 1e-2, t_max = 5000.0, steady_tol = 1e-9;
    int evolve_K = 41, stride = 1000;
    bool census = false;
    v->add_option("--nu", nu);
    v->add_option("--mu", mu);
    v->add_option("--re", re);
    v->add_option("--rh", rh);
    v->add_option("--init", init_spec);
    v->add_option("--dt", dt);
    v->add_option("--tmax", t_max);
    v->add_option("--K", evolve_K);
    v->add_option("--steady-tol", steady_tol);
    v->add_option("--stride", stride);
    v->add_option("--grid", grid_n);
    v->add_flag("--census", census);

    try {
        app.parse(argc, argv);
        const json cfg = load_config(config_path);

        if (t->parsed()) {
            const bool have_numu = t->count("--nu") && t->count("--mu");
            const bool have_rerh = t->count("--re") && t->count("--rh");
            if (have_numu == have_rerh)
                throw CLI::ValidationError("transform",
                                           "provide exactly one pair: --nu/--mu or --re/--rh");
            return cmd_transform(nu, mu, re, rh, have_numu, have_rerh, out_dir);
        }
        if (n->parsed()) {
            config_fill(*n, "--K", cfg, "K", K);
            config_fill(*n, "--points", cfg, "points", points);
            config_fill(*n, "--tol", cfg, "tol", tol);
            return cmd_neutral(parse_class(cls_s), K, points, tol, out_dir);
        }
        if (e->parsed()) {
            config_fill(*e, "--K", cfg, "K", K);
            config_fill(*e, "--display-K", cfg, "display_K", display_K);
            config_fill(*e, "--grid", cfg, "grid_n", grid_n);
            return cmd_eigenfunction(parse_class(cls_s), nu_c, mu_c, K, display_K,
                                     grid_n, out_dir);
        }
        if (b->parsed()) {
            config_fill(*b, "--K", cfg, "K", K);
            config_fill(*b, "--tol", cfg, "tol", fp_tol);
            config_fill(*b, "--max-iter", cfg, "max_iter", max_iter);
            return cmd_bifurcate(parse_class(cls_s), nu_c, mu_c, eps_list, direction, K,
                                 fp_tol, max_iter, out_dir);
        }
        if (v->parsed()) {
            const bool have_numu = v->count("--nu") && v->count("--mu");
            const bool have_rerh = v->count("--re") && v->count("--rh");
            if (have_numu == have_rerh)
                throw CLI::ValidationError("evolve",
                                           "provide exactly one pair: --nu/--mu or --re/--rh");
            const vl::FluidParams p =
                have_numu ? vl::FluidParams{nu, mu} : vl::nu_mu_from_re_rh(re, rh);
            config_fill(*v, "--dt", cfg, "dt", dt);
            config_fill(*v, "--tmax", cfg, "t_max", t_max);
            config_fill(*v, "--K", cfg, "K", evolve_K);
            config_fill(*v, "--steady-tol", cfg, "steady_tol", steady_tol);
            config_fill(*v, "--stride", cfg, "stride", stride);
            config_fill(*v, "--grid", cfg, "grid_n", grid_n);
            return cmd_evolve(p, init_spec, dt, t_max, evolve_K, steady_tol, stride,
                              census, grid_n, out_dir);
        }
    } catch (const CLI::ParseError& err) {
        const int code = app.exit(err);
        return code == 0 ? 0 : kExitUsage;
    } catch (const CLI::Error& err) {
        std::cerr << err.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument& err) {
        std::cerr << "error: " << err.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return kExitNoConverge;
    }
    return kExitUsage;
}
