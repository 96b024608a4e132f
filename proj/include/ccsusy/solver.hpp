#pragma once

#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ccsusy/grid.hpp"
#include "ccsusy/ode.hpp"
#include "ccsusy/potential.hpp"
#include "ccsusy/riccati.hpp"

namespace ccsusy {

/// A 2x2 matrix solution psi(k,r) with its radial derivative on a grid.
struct MatrixSolution {
    enum class Kind { jost, regular, transformed };

    complexd k;
    const RadialGrid* grid = nullptr;
    std::vector<Mat2c> psi;
    std::vector<Mat2c> dpsi;
    Kind kind = Kind::jost;
};

/// Jost matrix F(k); F_neg holds F(-k) and is populated for real k only.
struct JostMatrix {
    complexd k;
    Mat2c F;
    Mat2c F_neg;
    bool has_neg = false;
};

/// Matrix Wronskian W[u,v] = u^T v' - u^T' v.
inline Mat2c wronskian(const Mat2c& u, const Mat2c& du, const Mat2c& v, const Mat2c& dv) {
    return u.transpose() * dv - du.transpose() * v;
}

/// Free Jost solution diag(h_{l1}(kr), h_{l2}(kr)) and its r-derivative.
inline std::pair<Mat2c, Mat2c> free_jost_matrix(const ChannelSpec& spec, complexd k, double r) {
    if (k == complexd(0.0, 0.0))
        throw domain_error("free_jost_matrix: k must be nonzero");
    if (!(r > 0.0))
        throw domain_error("free_jost_matrix: r must be positive");
    const RiccatiValue h1 = riccati_hankel(spec.l1, k * r);
    const RiccatiValue h2 = riccati_hankel(spec.l2, k * r);
    Mat2c f = Mat2c::Zero(), df = Mat2c::Zero();
    f(0, 0) = h1.value;
    f(1, 1) = h2.value;
    df(0, 0) = k * h1.derivative;
    df(1, 1) = k * h2.derivative;
    return {f, df};
}

namespace detail {

inline void check_momentum_guard(complexd k, const RadialGrid& grid) {
    if (k == complexd(0.0, 0.0))
        throw domain_error("radial solve: k must be nonzero");
    if (2.0 * std::abs(k.imag()) * grid.r_max() > 600.0)
        throw config_error("radial solve: 2|Im k| r_max = " +
                           std::to_string(2.0 * std::abs(k.imag()) * grid.r_max()) +
                           " exceeds the overflow guard 600");
}

/// Walks the grid in either direction, storing psi and psi' at every node.
inline MatrixSolution integrate_grid(const Potential& V, complexd k, const RadialGrid& grid,
                                     Mat2c psi0, Mat2c dpsi0, bool outward,
                                     MatrixSolution::Kind kind) {
    const std::size_t n = grid.size();
    MatrixSolution sol;
    sol.k = k;
    sol.grid = &grid;
    sol.kind = kind;
    sol.psi.resize(n);
    sol.dpsi.resize(n);

    OdeState y;
    y.block<2, 2>(0, 0) = psi0;
    y.block<2, 2>(0, 2) = dpsi0;

    const complexd k2 = k * k;
    auto rhs = [&V, k2](double r, const OdeState& s) {
        OdeState d;
        const Mat2d v = V(r);
        d.block<2, 2>(0, 0) = s.block<2, 2>(0, 2);
        d.block<2, 2>(0, 2) =
            v.cast<complexd>() * s.block<2, 2>(0, 0) - k2 * s.block<2, 2>(0, 0);
        return d;
    };

    DormandPrince stepper;
    if (outward) {
        sol.psi[0] = psi0;
        sol.dpsi[0] = dpsi0;
        for (std::size_t i = 1; i < n; ++i) {
            stepper.integrate(rhs, grid.r[i - 1], grid.r[i], y);
            sol.psi[i] = y.block<2, 2>(0, 0);
            sol.dpsi[i] = y.block<2, 2>(0, 2);
        }
    } else {
        sol.psi[n - 1] = psi0;
        sol.dpsi[n - 1] = dpsi0;
        for (std::size_t i = n - 1; i-- > 0;) {
            stepper.integrate(rhs, grid.r[i + 1], grid.r[i], y);
            sol.psi[i] = y.block<2, 2>(0, 0);
            sol.dpsi[i] = y.block<2, 2>(0, 2);
        }
    }
    return sol;
}

} // namespace detail

/// Jost solution: integrated inward from r_max with free outgoing boundary
/// values.  Inward is the stable direction for Im k >= 0.
inline MatrixSolution jost_solution(const Potential& V, complexd k, const RadialGrid& grid) {
    detail::check_momentum_guard(k, grid);
    auto [f, df] = free_jost_matrix(V.spec(), k, grid.r_max());
    return detail::integrate_grid(V, k, grid, f, df, false, MatrixSolution::Kind::jost);
}

namespace detail {

/// Regular boundary values at r0.
///
/// Diagonal core: per-channel r^{nu+1}/(2nu+1)!! with the next-order term
/// (1 + c2 r^2), c2 = (V(r0) - nu(nu+1)/r0^2 - k^2)/(2(2nu+3)); the leading
/// power alone would commit ~k^2 r0^2/14 relative error, too coarse for the
/// 1e-8 Jost-matrix contract.  Non-diagonal core (marginal transform
/// outputs): columns along the eigenvectors of r0^2 V(r0) with the matching
/// local powers; any constant column mixing cancels in the S-matrix.
inline void regular_boundary(const Potential& V, complexd k, double r0, Mat2c& psi,
                             Mat2c& dpsi) {
    const Mat2d core = r0 * r0 * V(r0);
    const double off = std::abs(core(0, 1));
    psi.setZero();
    dpsi.setZero();
    if (off <= 1e-3 * (1.0 + std::abs(core(0, 0)) + std::abs(core(1, 1)))) {
        const int nu[2] = {V.spec().nu1, V.spec().nu2};
        for (int j = 0; j < 2; ++j) {
            const double norm = static_cast<double>(double_factorial(2 * nu[j] + 1));
            const double w0 =
                core(j, j) / (r0 * r0) - static_cast<double>(nu[j]) * (nu[j] + 1) / (r0 * r0);
            const complexd c2 = (w0 - k * k) / (2.0 * (2.0 * nu[j] + 3.0));
            psi(j, j) = std::pow(r0, nu[j] + 1) * (1.0 + c2 * r0 * r0) / norm;
            dpsi(j, j) = (static_cast<double>(nu[j] + 1) * std::pow(r0, nu[j]) +
                          (nu[j] + 3.0) * c2 * std::pow(r0, nu[j] + 2)) /
                         norm;
        }
        return;
    }
    Eigen::SelfAdjointEigenSolver<Mat2d> es(core);
    for (int j = 0; j < 2; ++j) {
        const double lam = es.eigenvalues()(j);
        if (1.0 + 4.0 * lam < 0.0)
            throw unphysical_error("regular boundary: core eigenvalue below -1/4, "
                                   "no power-behaved regular solution");
        const double mu = 0.5 * (-1.0 + std::sqrt(1.0 + 4.0 * lam));
        psi.col(j) = es.eigenvectors().col(j).cast<complexd>() * std::pow(r0, mu + 1.0);
        dpsi.col(j) =
            es.eigenvectors().col(j).cast<complexd>() * ((mu + 1.0) * std::pow(r0, mu));
    }
}

} // namespace detail

/// Regular solution: integrated outward from r_min with the leading-power
/// boundary; even in k by construction (only k^2 enters).
inline MatrixSolution regular_solution(const Potential& V, complexd k, const RadialGrid& grid) {
    detail::check_momentum_guard(k, grid);
    Mat2c psi, dpsi;
    detail::regular_boundary(V, k, grid.r_min(), psi, dpsi);
    return detail::integrate_grid(V, k, grid, psi, dpsi, true, MatrixSolution::Kind::regular);
}

/// Jost matrix F(k) = W[f(k,.), phi(k,.)], validated for r-constancy at
/// r_max and r_max/2.  For real k the value at -k is extracted from the same
/// regular solution (phi is even in k).
inline JostMatrix jost_matrix(const Potential& V, complexd k, const RadialGrid& grid) {
    const MatrixSolution phi = regular_solution(V, k, grid);
    const MatrixSolution f = jost_solution(V, k, grid);

    const std::size_t i_end = grid.size() - 1;
    const std::size_t i_mid = grid.nearest_index(0.5 * grid.r_max());

    const Mat2c F_end = wronskian(f.psi[i_end], f.dpsi[i_end], phi.psi[i_end], phi.dpsi[i_end]);
    const Mat2c F_mid = wronskian(f.psi[i_mid], f.dpsi[i_mid], phi.psi[i_mid], phi.dpsi[i_mid]);
    const double rel = (F_end - F_mid).norm() / std::max(F_end.norm(), 1e-300);
    if (rel > 1e-6)
        throw numerical_error("jost_matrix: Wronskian not constant in r (relative drift " +
                              std::to_string(rel) + "); grid too coarse");

    JostMatrix J;
    J.k = k;
    J.F = F_end;

    // Near-singular F: the Lemma hypothesis det F != 0 cannot be checked
    // physically here, so large condition numbers are rejected outright.
    Eigen::JacobiSVD<Mat2c> svd(J.F);
    const double smin = svd.singularValues()(1), smax = svd.singularValues()(0);
    if (!(smin > 0.0) || smax / smin > 1e12)
        throw pole_error("jost_matrix: F(k) is numerically singular at k = (" +
                         std::to_string(k.real()) + "," + std::to_string(k.imag()) + ")");

    if (std::abs(k.imag()) < 1e-14 * std::max(1.0, std::abs(k.real()))) {
        const MatrixSolution f_neg = jost_solution(V, -k, grid);
        J.F_neg =
            wronskian(f_neg.psi[i_end], f_neg.dpsi[i_end], phi.psi[i_end], phi.dpsi[i_end]);
        J.has_neg = true;
    }
    return J;
}

/// Relative Schrodinger residual |psi'' - (V - k^2) psi| at an interior grid
/// point, with psi'' from a fourth-order stencil on the derivative samples.
/// Needs four uniformly spaced neighbours, i.e. an index in the uniform part
/// of the grid.
inline double schrodinger_residual(const MatrixSolution& sol, const Potential& V,
                                   std::size_t i) {
    const auto& r = sol.grid->r;
    if (i < 2 || i + 2 >= r.size())
        throw domain_error("schrodinger_residual: index too close to the boundary");
    const double h = r[i + 1] - r[i];
    const double spread = std::abs(r[i + 2] - r[i - 2] - 4.0 * h);
    if (spread > 1e-9 * h)
        throw domain_error("schrodinger_residual: needs uniform spacing around the point");
    // psi'' from the stored first derivatives (4th-order central difference).
    const Mat2c d2 = (sol.dpsi[i - 2] - 8.0 * sol.dpsi[i - 1] + 8.0 * sol.dpsi[i + 1] -
                      sol.dpsi[i + 2]) /
                     (12.0 * h);
    const Mat2c rhs =
        (V(r[i]).cast<complexd>() - sol.k * sol.k * Mat2c::Identity()) * sol.psi[i];
    const double scale = rhs.norm() + std::norm(sol.k) * sol.psi[i].norm() + 1e-300;
    return (d2 - rhs).norm() / scale;
}

} // namespace ccsusy
