#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <memory>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "ccsusy/channel.hpp"
#include "ccsusy/errors.hpp"

namespace ccsusy {

using Mat2d = Eigen::Matrix2d;
using Mat2c = Eigen::Matrix2cd;
using Vec2c = Eigen::Vector2cd;

/// Full two-channel potential V(r) = V^int(r) + l(l+1)/r^2, units hbar^2/2mu = 1.
///
/// Immutable after construction; evaluation is thread-safe.  Below r_floor the
/// closed forms lose all digits to cancellation, so only the nu(nu+1)/r^2 core
/// is reported there.
class Potential {
public:
    static constexpr double r_floor = 1e-8;

    Potential(ChannelSpec spec, std::function<Mat2d(double)> eval,
              std::string provenance, std::string tail_decay)
        : spec_(spec), eval_(std::move(eval)),
          provenance_(std::move(provenance)), tail_decay_(std::move(tail_decay)) {}

    const ChannelSpec& spec() const { return spec_; }
    const std::string& provenance() const { return provenance_; }
    const std::string& tail_decay() const { return tail_decay_; }

    Mat2d operator()(double r) const {
        if (!(r > 0.0))
            throw domain_error("Potential: r must be positive");
        if (r < r_floor) {
            Mat2d core = Mat2d::Zero();
            core(0, 0) = static_cast<double>(spec_.nu1) * (spec_.nu1 + 1) / (r * r);
            core(1, 1) = static_cast<double>(spec_.nu2) * (spec_.nu2 + 1) / (r * r);
            return core;
        }
        return eval_(r);
    }

private:
    ChannelSpec spec_;
    std::function<Mat2d(double)> eval_;
    std::string provenance_;
    std::string tail_decay_;
};

/// Pure centrifugal potential diag(l(l+1))/r^2.  Requires nu = l.
inline Potential make_free(const ChannelSpec& spec) {
    if (spec.nu1 != spec.l1 || spec.nu2 != spec.l2)
        throw domain_error("make_free: free potential requires nu = l");
    const double c1 = static_cast<double>(spec.l1) * (spec.l1 + 1);
    const double c2 = static_cast<double>(spec.l2) * (spec.l2 + 1);
    return Potential(
        spec,
        [c1, c2](double r) {
            Mat2d v = Mat2d::Zero();
            v(0, 0) = c1 / (r * r);
            v(1, 1) = c2 / (r * r);
            return v;
        },
        "free", "none (pure centrifugal)");
}

namespace detail {

/// W[v1,v2] for v_j = sinh(kappa_j r), via the cancellation-free identity
/// W = (delta sinh(sigma r) - sigma sinh(delta r)) / 2 with sigma = k1+k2,
/// delta = k2-k1.  A power series takes over for sigma r <= 1 where the
/// closed form loses digits.
inline double bargmann_wronskian(double sr, double dr, double sigma, double delta) {
    if (sr <= 1.0) {
        // W = sum_{n>=1} (sigma delta / 2) (sigma^{2n} - delta^{2n}) r^{2n+1} / (2n+1)!
        // written in the scaled variables sr = sigma r, dr = delta r.  Every
        // term has the same sign.
        double sum = 0.0;
        double sp = sr * sr; // (sigma r)^{2n}
        double dp = dr * dr;
        double fact = 6.0;   // (2n+1)! at n = 1
        const double r = sr / sigma;
        for (int n = 1; n <= 40; ++n) {
            const double term = 0.5 * sigma * delta * (sp - dp) * r / fact;
            sum += term;
            if (std::abs(term) <= 1e-18 * std::abs(sum)) break;
            sp *= sr * sr;
            dp *= dr * dr;
            fact *= (2.0 * n + 2.0) * (2.0 * n + 3.0);
        }
        return sum;
    }
    return 0.5 * (delta * std::sinh(sr) - sigma * std::sinh(dr));
}

} // namespace detail

/// s-wave Bargmann potential -2 (ln W[sinh(k1 r), sinh(k2 r)])''.
///
/// Exact derivatives, never finite differences: W' = (k2^2-k1^2) sinh(k1 r)
/// sinh(k2 r) and W'' = (k2^2-k1^2)(k1 cosh(k1 r) sinh(k2 r) + k2 sinh(k1 r)
/// cosh(k2 r)).  Repulsive 6/r^2 core, no bound state, exponential tail.
inline double bargmann_s(double kappa1, double kappa2, double r) {
    if (!(kappa1 > 0.0) || !(kappa2 > 0.0))
        throw domain_error("bargmann_s: rates must be positive");
    if (kappa1 == kappa2)
        throw singularity_error("bargmann_s: kappa1 = kappa2 degenerates the Wronskian");
    if (!(r > 0.0))
        throw domain_error("bargmann_s: r must be positive");

    const double ka = std::min(kappa1, kappa2);
    const double kb = std::max(kappa1, kappa2);
    const double sigma = kappa1 + kappa2;
    const double delta = kappa2 - kappa1;

    if (ka * r > 8.0) {
        // Tail form V ~ 8 ka^2 (sigma/(kb-ka)) e^{-2 ka r}.  Past this point
        // the direct ratios drown in cancellation noise (~1e-14 absolute)
        // while the tail form is still accurate to O(e^{-2 ka r}) relative;
        // at the switch both agree to ~1e-6.
        return 8.0 * ka * ka * (sigma / (kb - ka)) * std::exp(-2.0 * ka * r);
    }

    const double w = detail::bargmann_wronskian(sigma * r, delta * r, sigma, delta);
    const double s1 = std::sinh(kappa1 * r), c1 = std::cosh(kappa1 * r);
    const double s2 = std::sinh(kappa2 * r), c2 = std::cosh(kappa2 * r);
    const double d2 = kappa2 * kappa2 - kappa1 * kappa1;
    const double wp = d2 * s1 * s2;
    const double wpp = d2 * (kappa1 * c1 * s2 + kappa2 * s1 * c2);
    const double lp = wp / w;
    return -2.0 * (wpp / w - lp * lp);
}

/// The s-d diagonal example potential: channel 1 purely centrifugal d wave,
/// channel 2 the Bargmann s-wave potential.  nu = (2,2), l = (2,0).
inline Potential make_example_v0(double kappa1, double kappa2) {
    if (!(kappa1 > 0.0) || !(kappa2 > 0.0))
        throw domain_error("make_example_v0: rates must be positive");
    if (kappa1 == kappa2)
        throw singularity_error("make_example_v0: kappa1 = kappa2 degenerates the Wronskian");
    ChannelSpec spec = ChannelSpec::make(2, 0, 2, 2);
    char buf[96];
    std::snprintf(buf, sizeof buf, "example-nf(kappa1=%g, kappa2=%g)", kappa1, kappa2);
    const double kmin = std::min(kappa1, kappa2);
    char tail[64];
    std::snprintf(tail, sizeof tail, "exponential, rate 2*%g beyond centrifugal", kmin);
    return Potential(
        spec,
        [kappa1, kappa2](double r) {
            Mat2d v = Mat2d::Zero();
            v(0, 0) = 6.0 / (r * r);
            v(1, 1) = bargmann_s(kappa1, kappa2, r);
            return v;
        },
        buf, tail);
}

// ---------------------------------------------------------------------------
// Potential-table file format: `# l1=<int> l2=<int> nu1=<int> nu2=<int>`
// followed by rows `r V11 V12 V22`, r strictly ascending.
// ---------------------------------------------------------------------------

namespace detail {

struct PotentialTable {
    ChannelSpec spec;
    std::vector<double> r, w11, w12, w22; // w = r^2 V
    double v11_first = 0.0, v12_first = 0.0, v22_first = 0.0;
};

inline double lagrange4(const std::vector<double>& x, const std::vector<double>& y,
                        std::size_t i0, double t) {
    double acc = 0.0;
    for (std::size_t a = 0; a < 4; ++a) {
        double w = y[i0 + a];
        for (std::size_t b = 0; b < 4; ++b) {
            if (a == b) continue;
            w *= (t - x[i0 + b]) / (x[i0 + a] - x[i0 + b]);
        }
        acc += w;
    }
    return acc;
}

/// Interpolation works on w = r^2 V, which is regular through the core and
/// flattens onto l(l+1) in the tail, then divides by r^2.  Pure centrifugal
/// parts are thus reproduced exactly between nodes.
inline Mat2d eval_table(const std::shared_ptr<const PotentialTable>& tab, double r) {
    const auto& rs = tab->r;
    Mat2d v;
    if (r < rs.front()) {
        // nu(nu+1)/r^2 core plus the constant that matches the first node.
        const double c1 = static_cast<double>(tab->spec.nu1) * (tab->spec.nu1 + 1);
        const double c2 = static_cast<double>(tab->spec.nu2) * (tab->spec.nu2 + 1);
        const double r0 = rs.front();
        v(0, 0) = c1 / (r * r) + (tab->v11_first - c1 / (r0 * r0));
        v(1, 1) = c2 / (r * r) + (tab->v22_first - c2 / (r0 * r0));
        v(0, 1) = v(1, 0) = tab->v12_first;
        return v;
    }
    if (r > rs.back()) {
        const double c1 = static_cast<double>(tab->spec.l1) * (tab->spec.l1 + 1);
        const double c2 = static_cast<double>(tab->spec.l2) * (tab->spec.l2 + 1);
        v.setZero();
        v(0, 0) = c1 / (r * r);
        v(1, 1) = c2 / (r * r);
        return v;
    }
    auto it = std::upper_bound(rs.begin(), rs.end(), r);
    std::size_t i = (it == rs.begin()) ? 0 : static_cast<std::size_t>(it - rs.begin()) - 1;
    std::size_t i0 = (i == 0) ? 0 : i - 1;
    if (i0 + 3 >= rs.size()) i0 = rs.size() - 4;
    const double a = lagrange4(rs, tab->w11, i0, r);
    const double b = lagrange4(rs, tab->w12, i0, r);
    const double c = lagrange4(rs, tab->w22, i0, r);
    const double inv_r2 = 1.0 / (r * r);
    v(0, 0) = a * inv_r2;
    v(0, 1) = v(1, 0) = b * inv_r2;
    v(1, 1) = c * inv_r2;
    return v;
}

} // namespace detail

/// Writes a sampled symmetric potential in the table format.
inline void save_potential_table(const std::string& path, const ChannelSpec& spec,
                                 const std::vector<double>& r,
                                 const std::vector<Mat2d>& v) {
    if (r.size() != v.size() || r.empty())
        throw domain_error("save_potential_table: inconsistent or empty data");
    std::ofstream os(path);
    if (!os)
        throw config_error("save_potential_table: cannot open '" + path + "' for writing");
    char line[256];
    std::snprintf(line, sizeof line, "# l1=%d l2=%d nu1=%d nu2=%d\n",
                  spec.l1, spec.l2, spec.nu1, spec.nu2);
    os << line;
    for (std::size_t i = 0; i < r.size(); ++i) {
        std::snprintf(line, sizeof line, "%.17g %.17g %.17g %.17g\n",
                      r[i], v[i](0, 0), v[i](0, 1), v[i](1, 1));
        os << line;
    }
    if (!os)
        throw config_error("save_potential_table: write to '" + path + "' failed");
}

/// Loads a potential table; cubic interpolation inside, nu(nu+1)/r^2 + const
/// below the first node, centrifugal tail above the last.
inline Potential load_tabulated(const std::string& path) {
    std::ifstream is(path);
    if (!is)
        throw config_error("load_tabulated: cannot open '" + path + "'");

    auto tab = std::make_shared<detail::PotentialTable>();
    bool have_spec = false;
    std::string line;
    int line_no = 0;
    while (std::getline(is, line)) {
        ++line_no;
        std::size_t first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        if (line[first] == '#') {
            int l1, l2, nu1, nu2;
            if (std::sscanf(line.c_str() + first, "# l1=%d l2=%d nu1=%d nu2=%d",
                            &l1, &l2, &nu1, &nu2) == 4) {
                try {
                    tab->spec = (nu1 >= l1 && nu2 >= l2)
                                    ? ChannelSpec::make(l1, l2, nu1, nu2)
                                    : ChannelSpec::make_marginal(l1, l2, nu1, nu2);
                } catch (const domain_error& e) {
                    throw parse_error(std::string("potential table header: ") + e.what(),
                                      line_no);
                }
                have_spec = true;
            }
            continue;
        }
        double r, a, b, c;
        std::istringstream ss(line);
        if (!(ss >> r >> a >> b)) throw parse_error("potential table: malformed row", line_no);
        if (!(ss >> c))
            throw parse_error("potential table: V12 column absent (need r V11 V12 V22)",
                              line_no);
        std::string trailing;
        if (ss >> trailing) throw parse_error("potential table: extra columns", line_no);
        if (!std::isfinite(r) || !std::isfinite(a) || !std::isfinite(b) || !std::isfinite(c))
            throw parse_error("potential table: non-finite entry", line_no);
        if (!tab->r.empty() && !(r > tab->r.back()))
            throw parse_error("potential table: r must be strictly increasing", line_no);
        if (!(r > 0.0)) throw parse_error("potential table: r must be positive", line_no);
        if (tab->r.empty()) {
            tab->v11_first = a;
            tab->v12_first = b;
            tab->v22_first = c;
        }
        tab->r.push_back(r);
        tab->w11.push_back(r * r * a);
        tab->w12.push_back(r * r * b);
        tab->w22.push_back(r * r * c);
    }
    if (!have_spec)
        throw parse_error("potential table: missing header '# l1=.. l2=.. nu1=.. nu2=..'", 0);
    if (tab->r.size() < 4)
        throw parse_error("potential table: need at least 4 rows", 0);

    ChannelSpec spec = tab->spec;
    std::shared_ptr<const detail::PotentialTable> ctab = tab;
    return Potential(
        spec, [ctab](double r) { return detail::eval_table(ctab, r); },
        "table(" + path + ")", "centrifugal beyond last node");
}

} // namespace ccsusy
