#pragma once

#include <cmath>
#include <compare>
#include <map>
#include <stdexcept>
#include <vector>

namespace vortexlab {

/// Half-frequency sine mode: the basis function sin(n x/2) sin(m y/2) on (0,2pi)^2.
struct Mode {
    int n = 1;
    int m = 1;
    auto operator<=>(const Mode&) const = default;
};

/// Laplacian symbol: -Delta sin(nx/2)sin(my/2) = beta * sin(nx/2)sin(my/2).
inline double beta(Mode mo) { return 0.25 * (mo.n * mo.n + mo.m * mo.m); }

enum class ParityClass { E1, E2, E3, EE };

inline ParityClass parity_class(Mode mo) {
    const bool n_odd = mo.n % 2 != 0;
    const bool m_odd = mo.m % 2 != 0;
    if (n_odd && m_odd) return ParityClass::E1;
    if (n_odd) return ParityClass::E2;
    if (m_odd) return ParityClass::E3;
    return ParityClass::EE;
}

inline const char* parity_name(ParityClass c) {
    switch (c) {
        case ParityClass::E1: return "E1";
        case ParityClass::E2: return "E2";
        case ParityClass::E3: return "E3";
        default: return "EE";
    }
}

/// Truncated mode set. Shape selects n,m <= K (square) or n+m <= K (triangular);
/// closure selects a single parity class, a class together with the even-even
/// modes it couples to nonlinearly, or every mode.
struct Truncation {
    enum class Shape { square, triangular };
    enum class Closure { pure_class, sigma, full };

    int K = 8;
    Shape shape = Shape::square;
    Closure closure = Closure::full;
    ParityClass cls = ParityClass::E1;

    bool contains(Mode mo) const {
        if (mo.n < 1 || mo.m < 1 || mo.n > K || mo.m > K) return false;
        if (shape == Shape::triangular && mo.n + mo.m > K) return false;
        if (closure == Closure::full) return true;
        const ParityClass pc = parity_class(mo);
        if (closure == Closure::pure_class) return pc == cls;
        return pc == cls || pc == ParityClass::EE;
    }

    /// Member modes in the canonical ordering (n+m ascending, |n-m| descending,
    /// n ascending), which reproduces the row ordering of the explicit small
    /// coupling matrices.
    std::vector<Mode> modes() const;
};

inline Truncation pure_tri(ParityClass cls, int K) {
    return {K, Truncation::Shape::triangular, Truncation::Closure::pure_class, cls};
}
inline Truncation pure_square(ParityClass cls, int K) {
    return {K, Truncation::Shape::square, Truncation::Closure::pure_class, cls};
}
inline Truncation sigma_tri(ParityClass cls, int K) {
    return {K, Truncation::Shape::triangular, Truncation::Closure::sigma, cls};
}
inline Truncation full_square(int K) {
    return {K, Truncation::Shape::square, Truncation::Closure::full, ParityClass::E1};
}

/// Finite sine expansion psi = sum a_{nm} sin(nx/2) sin(my/2); keys are kept
/// sorted so iteration (and therefore file output) is deterministic.
struct SpectralField {
    std::map<Mode, double> coeffs;

    double at(Mode mo) const {
        auto it = coeffs.find(mo);
        return it == coeffs.end() ? 0.0 : it->second;
    }
    void add(Mode mo, double v) {
        if (v == 0.0) return;
        auto [it, fresh] = coeffs.try_emplace(mo, v);
        if (!fresh) it->second += v;
    }
    void scale(double s) {
        for (auto& [mo, v] : coeffs) v *= s;
    }
    void drop_small(double eps) {
        for (auto it = coeffs.begin(); it != coeffs.end();)
            it = std::abs(it->second) <= eps ? coeffs.erase(it) : std::next(it);
    }
    SpectralField restricted(const Truncation& tr) const {
        SpectralField out;
        for (const auto& [mo, v] : coeffs)
            if (tr.contains(mo)) out.coeffs.emplace(mo, v);
        return out;
    }
};

SpectralField operator+(const SpectralField& a, const SpectralField& b);
SpectralField operator-(const SpectralField& a, const SpectralField& b);
SpectralField operator*(double s, const SpectralField& a);

/// The basic flow sin x sin y, i.e. mode (2,2).
inline SpectralField basic_flow() {
    SpectralField f;
    f.coeffs[{2, 2}] = 1.0;
    return f;
}

/// (1/pi^2) integral of f*g over the square; the basis is orthonormal under it.
double inner_product(const SpectralField& f, const SpectralField& g);
double l2_norm(const SpectralField& f);
double h4_norm(const SpectralField& f);

/// Apply Delta (each coefficient picks up -beta).
SpectralField laplacian(const SpectralField& f);
/// Apply (Delta + c).
SpectralField shifted_laplacian(const SpectralField& f, double c);

/// Pointwise samples on the uniform grid x_j = 2*pi*j/grid_n, j = 0..grid_n-1,
/// row-major with x varying fastest.
struct FlowGrid {
    int n = 0;
    std::vector<double> values;  // n*n entries
    double at(int i, int j) const { return values[static_cast<size_t>(j) * n + i]; }
};

FlowGrid evaluate_field(const SpectralField& f, int grid_n);

}  // namespace vortexlab
