#pragma once

#include <optional>
#include <stdexcept>

namespace vortexlab {

/// Dissipation parameters of the modified vorticity equation: viscosity nu and
/// bottom-friction coefficient mu.
struct FluidParams {
    double nu = 0.0;
    double mu = 0.0;
};

/// Reynolds / friction numbers of the laboratory scaling.  A component is
/// unbounded (empty optional) when the corresponding dissipation vanishes.
struct DimensionlessNumbers {
    std::optional<double> re;
    std::optional<double> rh;
};

/// Forward map: Rh = 2 sqrt(mu + 2 nu) / (mu pi), Re = 8 pi sqrt(mu + 2 nu) / nu.
DimensionlessNumbers re_rh_from_nu_mu(const FluidParams& p);

/// Closed-form inverse: s = 2/(pi Rh) + 16 pi/Re, mu = 2 s/(pi Rh), nu = 8 pi s/Re.
FluidParams nu_mu_from_re_rh(double re, double rh);

}  // namespace vortexlab
