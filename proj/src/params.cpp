#include "vortexlab/params.hpp"

#include <cmath>
#include <numbers>

namespace vortexlab {

DimensionlessNumbers re_rh_from_nu_mu(const FluidParams& p) {
    if (p.nu < 0.0 || p.mu < 0.0 || (p.nu == 0.0 && p.mu == 0.0))
        throw std::invalid_argument("re_rh_from_nu_mu: need nu, mu >= 0 and not both zero");
    const double s = std::sqrt(p.mu + 2.0 * p.nu);
    DimensionlessNumbers d;
    if (p.nu > 0.0) d.re = 8.0 * std::numbers::pi * s / p.nu;
    if (p.mu > 0.0) d.rh = 2.0 * s / (p.mu * std::numbers::pi);
    return d;
}

FluidParams nu_mu_from_re_rh(double re, double rh) {
    if (!(re > 0.0) || !(rh > 0.0))
        throw std::invalid_argument("nu_mu_from_re_rh: need Re > 0 and Rh > 0");
    const double pi = std::numbers::pi;
    const double s = 2.0 / (pi * rh) + 16.0 * pi / re;
    return {8.0 * pi * s / re, 2.0 * s / (pi * rh)};
}

}  // namespace vortexlab
