#pragma once

#include <string>

#include "ccsusy/errors.hpp"

namespace ccsusy {

/// Partial waves and singularity indices of a two-channel problem.
///
/// l2 - l1 must be even (same parity) and physical potentials require
/// nu_j >= l_j.  A "marginal" spec waives the latter; it only appears as the
/// bookkeeping attached to the transform of a |nu1 - nu2| = 2 parent, whose
/// potential carries a non-diagonal core at the origin.
struct ChannelSpec {
    int l1 = 0, l2 = 0;
    int nu1 = 0, nu2 = 0;
    bool marginal = false;

    /// m in l2 = l1 + 2m.
    int m() const { return (l2 - l1) / 2; }

    int l(int channel) const { return channel == 0 ? l1 : l2; }
    int nu(int channel) const { return channel == 0 ? nu1 : nu2; }

    static ChannelSpec make(int l1, int l2, int nu1, int nu2) {
        validate_common(l1, l2, nu1, nu2);
        if (nu1 < l1 || nu2 < l2)
            throw domain_error("ChannelSpec: physical potentials require nu_j >= l_j, got nu=(" +
                               std::to_string(nu1) + "," + std::to_string(nu2) + "), l=(" +
                               std::to_string(l1) + "," + std::to_string(l2) + ")");
        return ChannelSpec{l1, l2, nu1, nu2, false};
    }

    /// Same shape checks but without nu_j >= l_j.
    static ChannelSpec make_marginal(int l1, int l2, int nu1, int nu2) {
        validate_common(l1, l2, nu1, nu2);
        return ChannelSpec{l1, l2, nu1, nu2, true};
    }

private:
    static void validate_common(int l1, int l2, int nu1, int nu2) {
        if (l1 < 0 || l2 < 0)
            throw domain_error("ChannelSpec: partial waves must be nonnegative");
        if (nu1 < 0 || nu2 < 0)
            throw domain_error("ChannelSpec: singularity indices must be nonnegative");
        if ((l2 - l1) % 2 != 0)
            throw domain_error("ChannelSpec: l1 and l2 must have the same parity, got l=(" +
                               std::to_string(l1) + "," + std::to_string(l2) + ")");
    }
};

inline bool operator==(const ChannelSpec& a, const ChannelSpec& b) {
    return a.l1 == b.l1 && a.l2 == b.l2 && a.nu1 == b.nu1 && a.nu2 == b.nu2;
}

} // namespace ccsusy
