#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "ccsusy/parallel.hpp"
#include "ccsusy/solver.hpp"

namespace ccsusy {

/// Scattering matrix at one real wave number.
struct SMatrixPoint {
    double k = 0.0;
    Mat2c S;
};

/// One eigen-decomposition S = R(eps) diag(e^{2i d1}, e^{2i d2}) R(eps)^T.
/// When S is degenerate any eps reproduces it; the convention is eps = 0
/// (or the previous eps during curve tracking) with `degenerate` set, and
/// consumers must branch on the flag rather than the value.
struct Eigenphases {
    double delta1 = 0.0;
    double delta2 = 0.0;
    double epsilon = 0.0;
    bool degenerate = false;
};

/// S(k) = e^{il pi/2} F(-k) F(k)^{-1} e^{il pi/2} with l from the potential's
/// asymptotics (the transformed potential carries the swapped l).
inline SMatrixPoint s_matrix(const JostMatrix& J, const ChannelSpec& spec) {
    if (!J.has_neg)
        throw domain_error("s_matrix: needs F at both +k and -k (real k only)");
    if (!(J.k.real() > 0.0))
        throw domain_error("s_matrix: k must be positive");
    const double dF = std::abs(J.F.determinant());
    if (dF < 1e-12 * J.F.squaredNorm())
        throw pole_error("s_matrix: singular Jost matrix (bound state at this energy?)");

    Mat2c P = Mat2c::Zero();
    P(0, 0) = std::exp(complexd(0.0, 0.5 * M_PI * spec.l1));
    P(1, 1) = std::exp(complexd(0.0, 0.5 * M_PI * spec.l2));
    SMatrixPoint out;
    out.k = J.k.real();
    out.S = P * J.F_neg * J.F.inverse() * P;

    const double uni = (out.S * out.S.adjoint() - Mat2c::Identity()).norm();
    const double sym = (out.S - out.S.transpose()).norm();
    if (uni > 1e-6 || sym > 1e-6)
        throw numerical_error("s_matrix: unitarity/symmetry residual too large (" +
                              std::to_string(uni) + ", " + std::to_string(sym) + ")");
    return out;
}

/// R(eps) in the fixed sign convention [[cos, -sin], [sin, cos]].
inline Mat2d rotation(double eps) {
    Mat2d R;
    R << std::cos(eps), -std::sin(eps), std::sin(eps), std::cos(eps);
    return R;
}

/// Forward construction R(eps) diag(e^{2i d1}, e^{2i d2}) R(eps)^T.
inline Mat2c reconstruct_smatrix(double d1, double d2, double eps) {
    Mat2c D = Mat2c::Zero();
    D(0, 0) = std::exp(complexd(0.0, 2.0 * d1));
    D(1, 1) = std::exp(complexd(0.0, 2.0 * d2));
    const Mat2c R = rotation(eps).cast<complexd>();
    return R * D * R.transpose();
}

namespace detail {

inline double principal_half_pi(double x) { // fold into (-pi/2, pi/2]
    while (x > 0.5 * M_PI) x -= M_PI;
    while (x <= -0.5 * M_PI) x += M_PI;
    return x;
}

inline double unwrap_mod_pi(double x, double ref) {
    return x + M_PI * std::round((ref - x) / M_PI);
}

} // namespace detail

/// Extracts (delta1, delta2, eps) from a unitary symmetric S.
///
/// Branch conventions: without `prev`, eps in (-pi/4, pi/4] and
/// delta_j in (-pi/2, pi/2] (channels ordered by dominance of R's diagonal);
/// with `prev`, the branch and channel assignment continuous with it.
inline Eigenphases eigenphases(const SMatrixPoint& point,
                               const std::optional<Eigenphases>& prev = std::nullopt) {
    const Mat2c& S = point.S;
    const double uni = (S * S.adjoint() - Mat2c::Identity()).norm();
    const double sym = (S - S.transpose()).norm();
    if (uni > 1e-6 || sym > 1e-6)
        throw numerical_error("eigenphases: input violates unitarity/symmetry");

    const complexd u = S(0, 0) - S(1, 1);
    const complexd v = S(0, 1) + S(1, 0); // = 2 S12 for symmetric S

    Eigenphases out;
    // |lambda1 - lambda2| = sqrt(|u|^2 + |v|^2) exactly.
    if (std::sqrt(std::norm(u) + std::norm(v)) <= 1e-10) {
        out.degenerate = true;
        out.epsilon = prev ? prev->epsilon : 0.0;
        double d1 = 0.5 * std::arg(S(0, 0));
        double d2 = 0.5 * std::arg(S(1, 1));
        if (prev) {
            d1 = detail::unwrap_mod_pi(d1, prev->delta1);
            d2 = detail::unwrap_mod_pi(d2, prev->delta2);
        }
        out.delta1 = d1;
        out.delta2 = d2;
        return out;
    }

    // (u, v) = w (cos 2eps, sin 2eps) for a complex scalar w: divide out the
    // principal square root of u^2 + v^2; the residual imaginary parts
    // measure how far S is from exactly rotation-diagonalizable.
    const complexd w = std::sqrt(u * u + v * v);
    const double c2 = (u / w).real();
    const double s2 = (v / w).real();
    const double two_eps_raw = std::atan2(s2, c2);

    auto commit = [&S](double eps, const std::optional<Eigenphases>& ref) {
        Eigenphases e;
        e.epsilon = eps;
        const Mat2c R = rotation(eps).cast<complexd>();
        const Mat2c D = R.transpose() * S * R;
        e.delta1 = 0.5 * std::arg(D(0, 0));
        e.delta2 = 0.5 * std::arg(D(1, 1));
        if (ref) {
            e.delta1 = detail::unwrap_mod_pi(e.delta1, ref->delta1);
            e.delta2 = detail::unwrap_mod_pi(e.delta2, ref->delta2);
        }
        return e;
    };

    if (!prev) {
        double te = two_eps_raw;
        while (te > 0.5 * M_PI) te -= M_PI;
        while (te <= -0.5 * M_PI) te += M_PI;
        return commit(0.5 * te, std::nullopt);
    }

    // Candidate branches eps_raw + n pi/2; odd n swaps the channel order,
    // which the recomputed diagonal picks up automatically.
    const double n0 = std::round((2.0 * prev->epsilon - two_eps_raw) / M_PI);
    Eigenphases best;
    double best_de = 1e300;
    for (int dn = -1; dn <= 1; ++dn) {
        const double eps = 0.5 * (two_eps_raw + (n0 + dn) * M_PI);
        const double de = std::abs(eps - prev->epsilon);
        if (de < best_de) {
            best_de = de;
            best = commit(eps, prev);
        }
    }
    return best;
}

/// Eigenphase and mixing-angle curves with continuous branches over a k grid.
struct PhaseData {
    std::vector<double> k;
    std::vector<double> delta1, delta2, epsilon;
    std::vector<bool> degenerate;
    std::string channel_order;
};

/// Raw decompositions are computed in parallel; the branch-continuity pass is
/// sequential, seeded at the smallest k.
inline PhaseData phase_curves(const Potential& V, const std::vector<double>& k_grid,
                              const RadialGrid& grid, unsigned threads = 0) {
    if (k_grid.size() < 2)
        throw config_error("phase_curves: need at least 2 wave numbers");
    for (std::size_t i = 0; i < k_grid.size(); ++i) {
        if (!(k_grid[i] > 0.0) || (i > 0 && !(k_grid[i] > k_grid[i - 1])))
            throw config_error("phase_curves: k grid must be positive and ascending");
    }

    std::vector<SMatrixPoint> pts(k_grid.size());
    parallel_for(k_grid.size(), threads, [&](std::size_t i) {
        pts[i] = s_matrix(jost_matrix(V, k_grid[i], grid), V.spec());
    });

    PhaseData out;
    out.k = k_grid;
    out.delta1.resize(k_grid.size());
    out.delta2.resize(k_grid.size());
    out.epsilon.resize(k_grid.size());
    out.degenerate.resize(k_grid.size());
    out.channel_order =
        "adiabatic from k_min; channel 1 = dominant diagonal of R at the seed";

    std::optional<Eigenphases> prev;
    for (std::size_t i = 0; i < k_grid.size(); ++i) {
        const Eigenphases e = eigenphases(pts[i], prev);
        if (prev && !e.degenerate && !prev->degenerate) {
            const double dd =
                std::max(std::abs(e.delta1 - prev->delta1), std::abs(e.delta2 - prev->delta2));
            const double de = std::abs(e.epsilon - prev->epsilon);
            if (dd >= 0.45 * M_PI || de >= 0.225 * M_PI) {
                char msg[160];
                std::snprintf(msg, sizeof msg,
                              "phase_curves: branch tracking lost between k = %g and k = %g "
                              "(|d delta| = %.3f, |d eps| = %.3f); refine the k grid",
                              out.k[i - 1], out.k[i], dd, de);
                throw numerical_error(msg);
            }
        }
        out.delta1[i] = e.delta1;
        out.delta2[i] = e.delta2;
        out.epsilon[i] = e.epsilon;
        out.degenerate[i] = e.degenerate;
        prev = e;
    }
    return out;
}

/// Phase CSV: header k,delta1,delta2,epsilon; radians, 12 significant digits.
inline void write_phase_csv(const std::string& path, const PhaseData& data) {
    std::ofstream os(path);
    if (!os)
        throw config_error("write_phase_csv: cannot open '" + path + "' for writing");
    os << "k,delta1,delta2,epsilon\n";
    char line[160];
    for (std::size_t i = 0; i < data.k.size(); ++i) {
        std::snprintf(line, sizeof line, "%.12g,%.12g,%.12g,%.12g\n", data.k[i],
                      data.delta1[i], data.delta2[i], data.epsilon[i]);
        os << line;
    }
    if (!os) throw config_error("write_phase_csv: write failed");
}

} // namespace ccsusy
