#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "ccsusy/errors.hpp"

namespace ccsusy {

/// Radial grid: log-spaced from r_min up to the knee, uniform above it.
struct RadialGrid {
    std::vector<double> r;
    double knee = 1.0;

    double r_min() const { return r.front(); }
    double r_max() const { return r.back(); }
    std::size_t size() const { return r.size(); }

    /// Index of the grid point closest to x.
    std::size_t nearest_index(double x) const {
        auto it = std::lower_bound(r.begin(), r.end(), x);
        if (it == r.begin()) return 0;
        if (it == r.end()) return r.size() - 1;
        std::size_t i = static_cast<std::size_t>(it - r.begin());
        return (x - r[i - 1] <= r[i] - x) ? i - 1 : i;
    }
};

/// Builds the standard composite grid.  About a third of the points cover
/// [r_min, knee] logarithmically; the rest span [knee, r_max] uniformly.
inline RadialGrid make_radial_grid(double r_min, double r_max, std::size_t n, double knee = 1.0) {
    if (!(r_min > 0.0))
        throw config_error("radial grid: r_min must be positive");
    if (r_min > 1e-3)
        throw config_error("radial grid: r_min must be <= 1e-3 to control the boundary "
                           "truncation error, got " + std::to_string(r_min));
    if (!(knee > r_min) || !(r_max > knee))
        throw config_error("radial grid: need r_min < knee < r_max");
    if (n < 16)
        throw config_error("radial grid: need at least 16 points");

    std::size_t n_log = std::max<std::size_t>(8, n / 3);
    if (n_log > n - 8) n_log = n - 8;
    const std::size_t n_uni = n - n_log;

    RadialGrid g;
    g.knee = knee;
    g.r.reserve(n);
    const double lga = std::log(r_min), lgb = std::log(knee);
    for (std::size_t i = 0; i < n_log; ++i)
        g.r.push_back(std::exp(lga + (lgb - lga) * static_cast<double>(i) /
                               static_cast<double>(n_log)));
    for (std::size_t i = 0; i < n_uni; ++i)
        g.r.push_back(knee + (r_max - knee) * static_cast<double>(i) /
                      static_cast<double>(n_uni - 1));
    g.r.back() = r_max;

    for (std::size_t i = 1; i < g.r.size(); ++i)
        if (!(g.r[i] > g.r[i - 1]))
            throw config_error("radial grid: points are not strictly increasing");
    return g;
}

/// Uniform wave-number grid.
inline std::vector<double> make_k_grid(double k_min, double k_max, std::size_t n) {
    if (!(k_min > 0.0) || !(k_max > k_min))
        throw config_error("k grid: need 0 < k_min < k_max");
    if (n < 2)
        throw config_error("k grid: need at least 2 points");
    std::vector<double> k(n);
    for (std::size_t i = 0; i < n; ++i)
        k[i] = k_min + (k_max - k_min) * static_cast<double>(i) / static_cast<double>(n - 1);
    return k;
}

} // namespace ccsusy
