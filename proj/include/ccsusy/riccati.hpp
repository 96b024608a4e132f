#pragma once

#include <complex>
#include <cstdint>

#include "ccsusy/errors.hpp"

namespace ccsusy {

using complexd = std::complex<double>;

/// Value and z-derivative of a Riccati-Hankel function at one point.
///
/// h_l(z) = i^{l+1} sqrt(pi z / 2) H^(1)_{l+1/2}(z).  For integer l this is
/// e^{iz} times a polynomial in 1/z, so it is entire in z away from z = 0 and
/// no branch handling is needed.
struct RiccatiValue {
    complexd value;
    complexd derivative; // d/dz
};

/// n!! for odd nonnegative n.  n <= 33 keeps the product inside int64.
inline std::int64_t double_factorial(int n) {
    if (n < 0 || n % 2 == 0)
        throw domain_error("double_factorial: n must be a nonnegative odd integer, got " +
                           std::to_string(n));
    if (n > 33)
        throw domain_error("double_factorial: n > 33 overflows 64-bit integers");
    std::int64_t acc = 1;
    for (int j = n; j >= 3; j -= 2) acc *= j;
    return acc;
}

inline constexpr int max_hankel_order = 20;

/// Outgoing Riccati-Hankel function h_l(z) and its derivative.
///
/// Built by the upward recurrence
///   h_{l+1}(z) = i (2l+1)/z h_l(z) + h_{l-1}(z),   h_{-1} = h_0 = e^{iz},
/// which is stable for this family, and the derivative identity
///   h_l'(z) = i h_{l-1}(z) - (l/z) h_l(z).
inline RiccatiValue riccati_hankel(int l, complexd z) {
    if (l < 0 || l > max_hankel_order)
        throw domain_error("riccati_hankel: order l must be in [0, " +
                           std::to_string(max_hankel_order) + "], got " + std::to_string(l));
    if (z == complexd(0.0, 0.0))
        throw singularity_error("riccati_hankel: z = 0 is a singular point");

    const complexd eiz = std::exp(complexd(0.0, 1.0) * z);
    complexd h_prev = eiz; // h_{-1}
    complexd h = eiz;      // h_0
    for (int j = 0; j < l; ++j) {
        const complexd h_next = complexd(0.0, 2.0 * j + 1.0) / z * h + h_prev;
        h_prev = h;
        h = h_next;
    }
    RiccatiValue out;
    out.value = h;
    out.derivative = complexd(0.0, 1.0) * h_prev - (static_cast<double>(l) / z) * h;
    return out;
}

} // namespace ccsusy
