#include "vortexlab/basis.hpp"

#include <algorithm>
#include <numbers>

namespace vortexlab {

std::vector<Mode> Truncation::modes() const {
    std::vector<Mode> out;
    for (int n = 1; n <= K; ++n)
        for (int m = 1; m <= K; ++m)
            if (contains({n, m})) out.push_back({n, m});
    std::sort(out.begin(), out.end(), [](Mode a, Mode b) {
        const int sa = a.n + a.m, sb = b.n + b.m;
        if (sa != sb) return sa < sb;
        const int da = std::abs(a.n - a.m), db = std::abs(b.n - b.m);
        if (da != db) return da > db;
        return a.n < b.n;
    });
    return out;
}

SpectralField operator+(const SpectralField& a, const SpectralField& b) {
    SpectralField out = a;
    for (const auto& [mo, v] : b.coeffs) out.add(mo, v);
    return out;
}

SpectralField operator-(const SpectralField& a, const SpectralField& b) {
    SpectralField out = a;
    for (const auto& [mo, v] : b.coeffs) out.add(mo, -v);
    return out;
}

SpectralField operator*(double s, const SpectralField& a) {
    SpectralField out = a;
    out.scale(s);
    return out;
}

double inner_product(const SpectralField& f, const SpectralField& g) {
    // Orthonormal basis: sum over common modes.  Iterate the smaller map.
    const SpectralField& small = f.coeffs.size() <= g.coeffs.size() ? f : g;
    const SpectralField& large = f.coeffs.size() <= g.coeffs.size() ? g : f;
    double s = 0.0;
    for (const auto& [mo, v] : small.coeffs) s += v * large.at(mo);
    return s;
}

double l2_norm(const SpectralField& f) { return std::sqrt(inner_product(f, f)); }

double h4_norm(const SpectralField& f) {
    double s = 0.0;
    for (const auto& [mo, v] : f.coeffs) {
        const double w = 1.0 + beta(mo) * beta(mo);
        s += w * w * v * v;
    }
    return std::sqrt(s);
}

SpectralField laplacian(const SpectralField& f) { return shifted_laplacian(f, 0.0); }

SpectralField shifted_laplacian(const SpectralField& f, double c) {
    SpectralField out;
    for (const auto& [mo, v] : f.coeffs) {
        const double w = (c - beta(mo)) * v;
        if (w != 0.0) out.coeffs.emplace(mo, w);
    }
    return out;
}

FlowGrid evaluate_field(const SpectralField& f, int grid_n) {
    if (grid_n < 4) throw std::invalid_argument("evaluate_field: grid_n < 4");
    FlowGrid g;
    g.n = grid_n;
    g.values.assign(static_cast<size_t>(grid_n) * grid_n, 0.0);
    const double h = 2.0 * std::numbers::pi / grid_n;
    // Cache the 1-D sine tables per distinct frequency.
    std::map<int, std::vector<double>> table;
    auto sines = [&](int k) -> const std::vector<double>& {
        auto it = table.find(k);
        if (it != table.end()) return it->second;
        std::vector<double> t(grid_n);
        for (int j = 0; j < grid_n; ++j) t[j] = std::sin(0.5 * k * j * h);
        return table.emplace(k, std::move(t)).first->second;
    };
    for (const auto& [mo, v] : f.coeffs) {
        const auto& sx = sines(mo.n);
        const auto& sy = sines(mo.m);
        for (int j = 0; j < grid_n; ++j) {
            double* row = &g.values[static_cast<size_t>(j) * grid_n];
            const double vy = v * sy[j];
            for (int i = 0; i < grid_n; ++i) row[i] += vy * sx[i];
        }
    }
    return g;
}

}  // namespace vortexlab
