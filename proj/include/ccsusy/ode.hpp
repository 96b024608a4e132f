#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>

#include <Eigen/Dense>

#include "ccsusy/errors.hpp"

namespace ccsusy {

/// State of the first-order system: columns 0-1 hold psi, columns 2-3 psi'.
using OdeState = Eigen::Matrix<std::complex<double>, 2, 4>;

/// Embedded Dormand-Prince 5(4) stepper with elementwise error control.
///
/// Tolerances follow the solver contract: relative 1e-10, absolute 1e-12.
/// The step size persists across calls so a solve that walks a dense grid
/// does not restart the controller at every node.
class DormandPrince {
public:
    double rtol = 1e-10;
    double atol = 1e-12;
    long max_steps = 4000000;

    double worst_error() const { return worst_err_; }
    long steps_taken() const { return steps_; }

    /// Advances y from x to x_end (either direction); h_ is adapted in place.
    template <class Rhs>
    void integrate(Rhs&& f, double x, double x_end, OdeState& y) {
        if (x == x_end) return;
        const double dir = (x_end > x) ? 1.0 : -1.0;
        if (h_ == 0.0 || h_ * dir <= 0.0) h_ = dir * 0.01 * std::abs(x_end - x);

        OdeState k1 = f(x, y);
        while (dir * (x_end - x) > 0.0) {
            if (++steps_ > max_steps)
                throw numerical_error("ode: step limit exceeded (worst local error " +
                                      std::to_string(worst_err_) + ")");
            double h = h_;
            if (dir * (x + h - x_end) > 0.0) h = x_end - x;

            const OdeState k2 = f(x + 0.2 * h, OdeState(y + h * (0.2 * k1)));
            const OdeState k3 = f(x + 0.3 * h, OdeState(y + h * (3.0 / 40 * k1 + 9.0 / 40 * k2)));
            const OdeState k4 = f(x + 0.8 * h,
                                  OdeState(y + h * (44.0 / 45 * k1 - 56.0 / 15 * k2 + 32.0 / 9 * k3)));
            const OdeState k5 =
                f(x + 8.0 / 9 * h,
                  OdeState(y + h * (19372.0 / 6561 * k1 - 25360.0 / 2187 * k2 +
                                    64448.0 / 6561 * k3 - 212.0 / 729 * k4)));
            const OdeState k6 =
                f(x + h, OdeState(y + h * (9017.0 / 3168 * k1 - 355.0 / 33 * k2 +
                                           46732.0 / 5247 * k3 + 49.0 / 176 * k4 -
                                           5103.0 / 18656 * k5)));
            const OdeState ynew = y + h * (35.0 / 384 * k1 + 500.0 / 1113 * k3 +
                                           125.0 / 192 * k4 - 2187.0 / 6784 * k5 + 11.0 / 84 * k6);
            const OdeState k7 = f(x + h, ynew);
            const OdeState err =
                h * ((35.0 / 384 - 5179.0 / 57600) * k1 + (500.0 / 1113 - 7571.0 / 16695) * k3 +
                     (125.0 / 192 - 393.0 / 640) * k4 +
                     (-2187.0 / 6784 + 92097.0 / 339200) * k5 +
                     (11.0 / 84 - 187.0 / 2100) * k6 - 1.0 / 40 * k7);

            double enorm = 0.0;
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 4; ++j) {
                    const double sc =
                        atol + rtol * std::max(std::abs(y(i, j)), std::abs(ynew(i, j)));
                    enorm = std::max(enorm, std::abs(err(i, j)) / sc);
                }

            if (enorm <= 1.0) {
                x += h;
                y = ynew;
                k1 = k7; // FSAL
                worst_err_ = std::max(worst_err_, enorm * rtol);
            }
            const double fac =
                (enorm > 0.0) ? 0.9 * std::pow(enorm, -0.2) : 5.0;
            h_ = h * std::clamp(fac, 0.2, 5.0);
            if (std::abs(h_) < 1e-15 * (std::abs(x) + 1.0))
                throw numerical_error("ode: step size underflow at r = " + std::to_string(x));
        }
    }

private:
    double h_ = 0.0;
    double worst_err_ = 0.0;
    long steps_ = 0;
};

} // namespace ccsusy
