#pragma once

#include <stdexcept>
#include <string>

namespace ccsusy {

/// Base class for every failure thrown by the library.
struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Argument outside the documented domain (wrong parity, order out of range, ...).
struct domain_error : error {
    using error::error;
};

/// Evaluation at a point where the quantity is singular (z = 0, kappa1 = kappa2).
struct singularity_error : error {
    using error::error;
};

/// A construction collapsed onto a degenerate configuration (a1 b2 = a2 b1, ...).
struct degeneracy_error : error {
    using error::error;
};

/// A numerical procedure failed to meet its accuracy contract.
struct numerical_error : error {
    using error::error;
};

/// Singular Jost matrix at real k (bound-state pole is out of scope).
struct pole_error : numerical_error {
    using numerical_error::numerical_error;
};

/// det W[u,u*] <= 0 or a similar regularity breakdown in the transform.
struct regularity_error : numerical_error {
    using numerical_error::numerical_error;
};

/// Run configuration rejected before any numerics were attempted.
struct config_error : error {
    using error::error;
};

/// Text input could not be parsed; carries a 1-based line number (0 = n/a).
struct parse_error : config_error {
    parse_error(const std::string& msg, int line_no)
        : config_error(line_no > 0 ? msg + " (line " + std::to_string(line_no) + ")" : msg),
          line(line_no) {}
    int line;
};

/// Case the theory excludes for physical potentials (|nu2 - nu1| = 2, ...).
struct unphysical_error : error {
    using error::error;
};

} // namespace ccsusy
