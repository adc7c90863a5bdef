#include "vortexlab/operators.hpp"

#include <map>

namespace vortexlab {

namespace {

/// Fold a signed half-frequency pair onto the positive quadrant; returns false
/// when the contribution vanishes (a zero frequency).
bool fold(int& n, int& m, double& w) {
    if (n == 0 || m == 0) return false;
    if (n < 0) { n = -n; w = -w; }
    if (m < 0) { m = -m; w = -w; }
    return true;
}

void add_folded(SpectralField& out, int n, int m, double w) {
    if (fold(n, m, w)) out.add({n, m}, w);
}

}  // namespace

SpectralField jacobian_brackets(const SpectralField& f, const SpectralField& g) {
    SpectralField out;
    for (const auto& [fm, a] : f.coeffs) {
        const int n = fm.n, m = fm.m;
        for (const auto& [gm, b] : g.coeffs) {
            const int p = gm.n, q = gm.m;
            // f_x g_y: cos(nx/2)sin(my/2) * sin(px/2)cos(qy/2)
            const double w1 = a * b * n * q / 16.0;
            if (w1 != 0.0) {
                add_folded(out, p + n, m + q, w1);
                add_folded(out, p + n, m - q, w1);
                add_folded(out, p - n, m + q, w1);
                add_folded(out, p - n, m - q, w1);
            }
            // -f_y g_x: sin(nx/2)cos(my/2) * cos(px/2)sin(qy/2)
            const double w2 = -a * b * m * p / 16.0;
            if (w2 != 0.0) {
                add_folded(out, n + p, q + m, w2);
                add_folded(out, n + p, q - m, w2);
                add_folded(out, n - p, q + m, w2);
                add_folded(out, n - p, q - m, w2);
            }
        }
    }
    out.drop_small(0.0);
    return out;
}

SpectralField shear_coupling(const SpectralField& psi, double c) {
    // Emission form of the 4-neighbour stencil: the source mode (n,m) with
    // h = (c - beta) a sends weight to (n+-2, m+-2), folded at the edges.
    SpectralField out;
    for (const auto& [mo, a] : psi.coeffs) {
        const int n = mo.n, m = mo.m;
        const double h = (c - beta(mo)) * a;
        if (h == 0.0) continue;
        const double wd = (m - n) / 8.0;  // diagonal shifts (n+-2, m+-2)
        const double wa = (m + n) / 8.0;  // antidiagonal shifts (n+-2, m-+2)
        add_folded(out, n + 2, m + 2, wd * h);
        add_folded(out, n - 2, m - 2, -wd * h);
        add_folded(out, n + 2, m - 2, -wa * h);
        add_folded(out, n - 2, m + 2, wa * h);
    }
    out.drop_small(0.0);
    return out;
}

Eigen::MatrixXd coupling_matrix(const std::vector<Mode>& ordering) {
    const int N = static_cast<int>(ordering.size());
    std::map<Mode, int> idx;
    for (int i = 0; i < N; ++i) idx.emplace(ordering[i], i);
    Eigen::MatrixXd C = Eigen::MatrixXd::Zero(N, N);
    // Receiver form of the row identity: row (n,m) collects from (n-+2, m-+2)
    // with weights (n-m)/8 and (n+m)/8 times (beta_src - 2), folding source
    // index -1 back to +1 with a sign flip and dropping index 0.
    auto add = [&](int row, int sn, int sm, double w) {
        double s = w;
        if (sn == 0 || sm == 0) return;
        if (sn == -1) { sn = 1; s = -s; }
        if (sm == -1) { sm = 1; s = -s; }
        if (sn < 1 || sm < 1) return;
        auto it = idx.find({sn, sm});
        if (it == idx.end()) return;
        C(row, it->second) += s * (beta({sn, sm}) - 2.0);
    };
    for (int i = 0; i < N; ++i) {
        const int n = ordering[i].n, m = ordering[i].m;
        add(i, n - 2, m - 2, (n - m) / 8.0);
        add(i, n + 2, m + 2, -(n - m) / 8.0);
        add(i, n - 2, m + 2, (n + m) / 8.0);
        add(i, n + 2, m - 2, -(n + m) / 8.0);
    }
    return C;
}

StabilityMatrix assemble_a_matrix(const FluidParams& p, const Truncation& trunc) {
    StabilityMatrix sm;
    sm.ordering = trunc.modes();
    sm.coords = StabilityMatrix::Coords::a;
    sm.params = p;
    if (sm.ordering.empty()) throw std::invalid_argument("assemble_a_matrix: empty truncation");
    const int N = static_cast<int>(sm.ordering.size());
    const Eigen::MatrixXd C = coupling_matrix(sm.ordering);
    sm.entries = Eigen::MatrixXd::Zero(N, N);
    for (int i = 0; i < N; ++i) {
        const double b = beta(sm.ordering[i]);
        sm.entries(i, i) = -(p.mu + p.nu * b);
        sm.entries.row(i) -= C.row(i) / b;
    }
    return sm;
}

StabilityMatrix assemble_b_matrix(const FluidParams& p, ParityClass cls, int K) {
    StabilityMatrix sm;
    sm.ordering = pure_tri(cls, K).modes();
    sm.coords = StabilityMatrix::Coords::b;
    sm.params = p;
    if (sm.ordering.empty()) throw std::invalid_argument("assemble_b_matrix: empty truncation");
    const int N = static_cast<int>(sm.ordering.size());
    const Eigen::MatrixXd C = coupling_matrix(sm.ordering);
    sm.entries = Eigen::MatrixXd::Zero(N, N);
    for (int i = 0; i < N; ++i) {
        sm.entries(i, i) = alpha_coeff(sm.ordering[i], p);
        for (int j = 0; j < N; ++j) {
            if (i == j) continue;
            // a-row entry already carries (beta_j - 2); in b-coordinates the
            // unknown is b_j = (beta_j - 2) a_j, so the integer stencil is 8 C / (beta_j - 2).
            sm.entries(i, j) += 8.0 * C(i, j) / (beta(sm.ordering[j]) - 2.0);
        }
    }
    return sm;
}

StabilityMatrix adjoint_a_matrix(const FluidParams& p, const Truncation& trunc) {
    StabilityMatrix sm = assemble_a_matrix(p, trunc);
    const int N = static_cast<int>(sm.ordering.size());
    Eigen::VectorXd b(N);
    for (int i = 0; i < N; ++i) b(i) = beta(sm.ordering[i]);
    sm.entries = (b.cwiseInverse().asDiagonal() * sm.entries.transpose() * b.asDiagonal()).eval();
    return sm;
}

Eigen::VectorXd to_vector(const SpectralField& f, const std::vector<Mode>& ordering) {
    Eigen::VectorXd v(static_cast<int>(ordering.size()));
    for (int i = 0; i < v.size(); ++i) v(i) = f.at(ordering[i]);
    return v;
}

SpectralField from_vector(const Eigen::VectorXd& v, const std::vector<Mode>& ordering) {
    SpectralField f;
    for (int i = 0; i < v.size(); ++i)
        if (v(i) != 0.0) f.coeffs.emplace(ordering[i], v(i));
    return f;
}

}  // namespace vortexlab
