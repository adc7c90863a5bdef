#pragma once

#include <Eigen/Dense>
#include <functional>
#include <memory>

#include "vortexlab/basis.hpp"
#include "vortexlab/params.hpp"

namespace vortexlab {

struct EvolveConfig {
    FluidParams params;
    int K = 41;               // full square truncation n,m <= K
    double dt = 1e-2;
    double t_max = 5000.0;
    double steady_tol = 1e-9;  // on ||da/dt||_2
    int snapshot_stride = 1000;
};

struct TrajectorySample {
    double t = 0.0;
    double rate_norm = 0.0;
    double energy = 0.0;
};

struct EvolveResult {
    std::vector<TrajectorySample> samples;
    SpectralField final_field;
    double t_end = 0.0;
    bool converged = false;
};

struct VortexExtremum {
    double x = 0.0, y = 0.0, psi = 0.0;
    int sign = 0;
};

struct VortexCensus {
    int count = 0;
    std::vector<VortexExtremum> extrema;
    double threshold_used = 0.0;
};

/// Thrown when a coefficient magnitude exceeds the blow-up guard.
struct BlowUpError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Evaluates the coefficients of J(psi, Delta psi) on the square truncation by
/// dealiased sine/cosine collocation; exact for band-limited inputs.
class JacobianEval {
  public:
    explicit JacobianEval(int K);
    ~JacobianEval();
    JacobianEval(const JacobianEval&) = delete;
    JacobianEval& operator=(const JacobianEval&) = delete;

    /// a and out are K x K, entry (i,j) the coefficient of mode (i+1, j+1).
    void apply(const Eigen::MatrixXd& a, Eigen::MatrixXd& out);
    int truncation() const { return K_; }

  private:
    struct Impl;
    int K_;
    std::unique_ptr<Impl> impl_;
};

/// Time stepper for the truncated vorticity dynamics: dissipation implicit,
/// advection explicit,
///   a^{n+1} = [a^n + dt (-J^n/beta + (mu + nu beta) a0)] / (1 + dt (mu + nu beta)),
/// with a0 the basic-flow coefficients.
class Integrator {
  public:
    explicit Integrator(const EvolveConfig& cfg);

    void set_state(const SpectralField& init);
    SpectralField state() const;
    const Eigen::MatrixXd& raw_state() const { return a_; }

    /// One IMEX step; throws BlowUpError when any |a| exceeds 1e6.
    void step();
    /// Instantaneous ||da/dt||_2 of the current state.
    double rate_norm();
    double energy() const { return a_.squaredNorm(); }
    double t() const { return t_; }

  private:
    EvolveConfig cfg_;
    JacobianEval jac_;
    Eigen::MatrixXd a_, jcoef_, beta_, damp_;
    double t_ = 0.0;
    bool jac_fresh_ = false;  // jcoef_ matches the current a_
};

/// Step until rate_norm < steady_tol or t >= t_max; snapshots every
/// snapshot_stride steps (and at the final state).
EvolveResult evolve_to_steady(
    const SpectralField& init, const EvolveConfig& cfg,
    const std::function<void(const TrajectorySample&, const SpectralField&)>& on_snapshot = {});

/// Strict local extrema of psi on the evaluation grid with |psi| above
/// rel_threshold * max|psi|, merged within merge_radius (keeping the larger).
VortexCensus vortex_census(const SpectralField& field, int grid_n = 256,
                           double rel_threshold = 0.15, double merge_radius = 0.3);

}  // namespace vortexlab
