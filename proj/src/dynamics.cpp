#include "vortexlab/dynamics.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace vortexlab {

// Collocation on the staggered nodes t_j = pi (j + 1/2) / M, which avoids the
// slow boundary-inclusive r2r kinds: synthesis is DCT-III/DST-III, analysis is
// DST-II, all of the friendly size M = 2K+2. Products of fields band-limited
// to K have sine frequencies up to 2K < 2M - K, so no aliasing reaches the
// retained coefficients and the evaluation is exact.
struct JacobianEval::Impl {
    int M;       // grid points per dimension
    double* fx;  // cos x, sin y
    double* gx;  // cos x, sin y
    double* fy;  // sin x, cos y
    double* gy;  // sin x, cos y
    double* ss;  // sin x, sin y
    fftw_plan pfx, pgx, pfy, pgy, pss;

    explicit Impl(int K) : M(2 * K + 2) {
        const size_t sz = static_cast<size_t>(M) * M;
        fx = fftw_alloc_real(sz);
        gx = fftw_alloc_real(sz);
        fy = fftw_alloc_real(sz);
        gy = fftw_alloc_real(sz);
        ss = fftw_alloc_real(sz);
        // Measured plans: the planning cost is paid once per truncation size and
        // the transforms sit in the inner loop of every time step.
        const unsigned flags = FFTW_MEASURE | FFTW_DESTROY_INPUT;
        pfx = fftw_plan_r2r_2d(M, M, fx, fx, FFTW_REDFT01, FFTW_RODFT01, flags);
        pgx = fftw_plan_r2r_2d(M, M, gx, gx, FFTW_REDFT01, FFTW_RODFT01, flags);
        pfy = fftw_plan_r2r_2d(M, M, fy, fy, FFTW_RODFT01, FFTW_REDFT01, flags);
        pgy = fftw_plan_r2r_2d(M, M, gy, gy, FFTW_RODFT01, FFTW_REDFT01, flags);
        pss = fftw_plan_r2r_2d(M, M, ss, ss, FFTW_RODFT10, FFTW_RODFT10, flags);
    }
    ~Impl() {
        for (fftw_plan p : {pfx, pgx, pfy, pgy, pss}) fftw_destroy_plan(p);
        for (double* b : {fx, gx, fy, gy, ss}) fftw_free(b);
    }
};

JacobianEval::JacobianEval(int K) : K_(K), impl_(std::make_unique<Impl>(K)) {
    if (K < 2) throw std::invalid_argument("JacobianEval: K < 2");
}

JacobianEval::~JacobianEval() = default;

void JacobianEval::apply(const Eigen::MatrixXd& a, Eigen::MatrixXd& out) {
    Impl& im = *impl_;
    const int K = K_, M = im.M;
    const size_t sz = static_cast<size_t>(M) * M;
    std::fill_n(im.fx, sz, 0.0);
    std::fill_n(im.gx, sz, 0.0);
    std::fill_n(im.fy, sz, 0.0);
    std::fill_n(im.gy, sz, 0.0);
    // psi = sum a sin(n tx) sin(m ty) with tx = x/2; g = Delta psi carries -beta.
    // Index conventions: cosine frequency n sits at index n, sine frequency n
    // at index n - 1.
    for (int n = 1; n <= K; ++n) {
        for (int m = 1; m <= K; ++m) {
            const double v = a(n - 1, m - 1);
            if (v == 0.0) continue;
            const double b = 0.25 * (n * n + m * m);
            im.fx[static_cast<size_t>(n) * M + (m - 1)] = v * n;
            im.gx[static_cast<size_t>(n) * M + (m - 1)] = -b * v * n;
            im.fy[static_cast<size_t>(n - 1) * M + m] = v * m;
            im.gy[static_cast<size_t>(n - 1) * M + m] = -b * v * m;
        }
    }
    fftw_execute(im.pfx);
    fftw_execute(im.pgx);
    fftw_execute(im.pfy);
    fftw_execute(im.pgy);
    // Pointwise J = f_x g_y - f_y g_x on the staggered nodes.
    for (size_t i = 0; i < sz; ++i)
        im.ss[i] = im.fx[i] * im.gy[i] - im.fy[i] * im.gx[i];
    fftw_execute(im.pss);
    // Half-angle chain rule gives d/dx = (1/2) d/dt per factor, i.e. 1/4
    // overall; the four synthesis transforms carry 2 per dimension (4*4 = 16)
    // and the two-dimensional sine projection carries M^2.
    const double scale = 1.0 / (4.0 * 16.0 * static_cast<double>(M) * M);
    out.resize(K, K);
    for (int n = 1; n <= K; ++n)
        for (int m = 1; m <= K; ++m)
            out(n - 1, m - 1) = scale * im.ss[static_cast<size_t>(n - 1) * M + (m - 1)];
}

Integrator::Integrator(const EvolveConfig& cfg) : cfg_(cfg), jac_(cfg.K) {
    const int K = cfg.K;
    a_ = Eigen::MatrixXd::Zero(K, K);
    jcoef_ = Eigen::MatrixXd::Zero(K, K);
    beta_.resize(K, K);
    for (int n = 1; n <= K; ++n)
        for (int m = 1; m <= K; ++m) beta_(n - 1, m - 1) = 0.25 * (n * n + m * m);
    damp_ = (cfg.params.mu + cfg.params.nu * beta_.array()).matrix();
    if (cfg.dt * damp_.maxCoeff() >= 10.0)
        throw std::invalid_argument("Integrator: dt * max(mu + nu beta) >= 10");
}

void Integrator::set_state(const SpectralField& init) {
    a_.setZero();
    for (const auto& [mo, v] : init.coeffs) {
        if (mo.n > cfg_.K || mo.m > cfg_.K)
            throw std::invalid_argument("Integrator: initial mode outside truncation");
        a_(mo.n - 1, mo.m - 1) = v;
    }
    t_ = 0.0;
    jac_fresh_ = false;
}

SpectralField Integrator::state() const {
    SpectralField f;
    for (int n = 1; n <= cfg_.K; ++n)
        for (int m = 1; m <= cfg_.K; ++m)
            if (a_(n - 1, m - 1) != 0.0) f.coeffs[{n, m}] = a_(n - 1, m - 1);
    return f;
}

double Integrator::rate_norm() {
    if (!jac_fresh_) {
        jac_.apply(a_, jcoef_);
        jac_fresh_ = true;
    }
    Eigen::ArrayXXd rate = -jcoef_.array() / beta_.array() - damp_.array() * a_.array();
    rate(1, 1) += damp_(1, 1);  // basic-flow forcing at mode (2,2)
    return std::sqrt(rate.square().sum());
}

void Integrator::step() {
    if (!jac_fresh_) jac_.apply(a_, jcoef_);
    jac_fresh_ = false;
    Eigen::ArrayXXd num = a_.array() + cfg_.dt * (-jcoef_.array() / beta_.array());
    num(1, 1) += cfg_.dt * damp_(1, 1);  // (mu + nu beta) a0 at mode (2,2)
    a_ = (num / (1.0 + cfg_.dt * damp_.array())).matrix();
    t_ += cfg_.dt;
    if (a_.cwiseAbs().maxCoeff() > 1e6)
        throw BlowUpError("step_imex: coefficient magnitude exceeded 1e6");
}

EvolveResult evolve_to_steady(
    const SpectralField& init, const EvolveConfig& cfg,
    const std::function<void(const TrajectorySample&, const SpectralField&)>& on_snapshot) {
    Integrator integ(cfg);
    integ.set_state(init);
    EvolveResult res;
    long step_count = 0;
    while (true) {
        const double rate = integ.rate_norm();
        const bool due = step_count % std::max(1, cfg.snapshot_stride) == 0;
        const bool done = rate < cfg.steady_tol || integ.t() >= cfg.t_max - 0.5 * cfg.dt;
        if (due || done) {
            TrajectorySample s{integ.t(), rate, integ.energy()};
            res.samples.push_back(s);
            if (on_snapshot) on_snapshot(s, integ.state());
        }
        if (done) {
            res.converged = rate < cfg.steady_tol;
            break;
        }
        integ.step();
        ++step_count;
    }
    res.final_field = integ.state();
    res.t_end = integ.t();
    return res;
}

VortexCensus vortex_census(const SpectralField& field, int grid_n, double rel_threshold,
                           double merge_radius) {
    if (grid_n < 64) throw std::invalid_argument("vortex_census: grid_n < 64");
    const FlowGrid g = evaluate_field(field, grid_n);
    double vmax = 0.0;
    for (double v : g.values) vmax = std::max(vmax, std::abs(v));
    VortexCensus census;
    census.threshold_used = rel_threshold * vmax;
    if (vmax == 0.0) return census;

    const double h = 2.0 * std::numbers::pi / grid_n;
    std::vector<VortexExtremum> found;
    for (int j = 1; j < grid_n - 1; ++j) {
        for (int i = 1; i < grid_n - 1; ++i) {
            const double c = g.at(i, j);
            if (std::abs(c) < census.threshold_used) continue;
            bool is_max = true, is_min = true;
            for (int dj = -1; dj <= 1 && (is_max || is_min); ++dj) {
                for (int di = -1; di <= 1; ++di) {
                    if (di == 0 && dj == 0) continue;
                    const double w = g.at(i + di, j + dj);
                    if (w >= c) is_max = false;
                    if (w <= c) is_min = false;
                }
            }
            if (is_max || is_min) found.push_back({i * h, j * h, c, c > 0 ? 1 : -1});
        }
    }
    std::sort(found.begin(), found.end(), [](const VortexExtremum& a, const VortexExtremum& b) {
        if (std::abs(a.psi) != std::abs(b.psi)) return std::abs(a.psi) > std::abs(b.psi);
        return std::pair{a.x, a.y} < std::pair{b.x, b.y};
    });
    for (const auto& e : found) {
        const bool close = std::any_of(
            census.extrema.begin(), census.extrema.end(), [&](const VortexExtremum& k) {
                return std::hypot(e.x - k.x, e.y - k.y) < merge_radius;
            });
        if (!close) census.extrema.push_back(e);
    }
    census.count = static_cast<int>(census.extrema.size());
    return census;
}

}  // namespace vortexlab
