#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>

#include "ccsusy/riccati.hpp"

using namespace ccsusy;
using Catch::Approx;

namespace {

// Independent closed form: h_l(z) = e^{iz} sum_{m=0}^{l} i^m (l+m)! / (m! (l-m)! (2z)^m).
// Coefficients built from factorials only; no recurrence shared with the
// implementation under test.
complexd closed_form_hankel(int l, complexd z) {
    auto fact = [](int n) {
        double f = 1.0;
        for (int j = 2; j <= n; ++j) f *= j;
        return f;
    };
    complexd sum = 0.0;
    for (int m = 0; m <= l; ++m) {
        const complexd im = std::pow(complexd(0.0, 1.0), m);
        sum += im * fact(l + m) / (fact(m) * fact(l - m)) / std::pow(2.0 * z, m);
    }
    return std::exp(complexd(0.0, 1.0) * z) * sum;
}

} // namespace

TEST_CASE("double factorial") {
    CHECK(double_factorial(1) == 1);
    CHECK(double_factorial(5) == 15);
    CHECK(double_factorial(9) == 945);
    CHECK(double_factorial(33) == 6332659870762850625LL);
    CHECK_THROWS_AS(double_factorial(4), domain_error);
    CHECK_THROWS_AS(double_factorial(-1), domain_error);
    CHECK_THROWS_AS(double_factorial(35), domain_error);
}

TEST_CASE("riccati-hankel spot values") {
    // h_0(z) = e^{iz} is forced by the l = 0 reduction of the definition.
    auto h0 = riccati_hankel(0, 1.0);
    CHECK(h0.value.real() == Approx(std::cos(1.0)).epsilon(1e-14));
    CHECK(h0.value.imag() == Approx(std::sin(1.0)).epsilon(1e-14));

    // h_1(z) = e^{iz}(1 + i/z) at z = 2.
    auto h1 = riccati_hankel(1, 2.0);
    const complexd ref1 = std::exp(complexd(0, 2.0)) * complexd(1.0, 0.5);
    CHECK(std::abs(h1.value - ref1) < 1e-14);
    CHECK(h1.value.real() == Approx(-0.870796).margin(1e-6));
    CHECK(h1.value.imag() == Approx(0.701223).margin(1e-6));

    // h_2(z) = e^{iz}(1 + 3i/z - 3/z^2) at z = 1.
    auto h2 = riccati_hankel(2, 1.0);
    const complexd ref2 = std::exp(complexd(0, 1.0)) * complexd(-2.0, 3.0);
    CHECK(std::abs(h2.value - ref2) < 1e-14);
    CHECK(h2.value.real() == Approx(-3.605018).margin(1e-6));
    CHECK(h2.value.imag() == Approx(-0.062035).margin(1e-6));
}

TEST_CASE("riccati-hankel domain errors") {
    CHECK_THROWS_AS(riccati_hankel(0, complexd(0.0, 0.0)), singularity_error);
    CHECK_THROWS_AS(riccati_hankel(-1, 1.0), domain_error);
    CHECK_THROWS_AS(riccati_hankel(21, 1.0), domain_error);
}

TEST_CASE("recurrence matches closed forms, real and complex rays") {
    for (int l = 0; l <= 6; ++l) {
        for (int i = 0; i < 50; ++i) {
            const double x = 0.5 + (50.0 - 0.5) * i / 49.0;
            {
                auto h = riccati_hankel(l, x);
                const complexd ref = closed_form_hankel(l, x);
                CHECK(std::abs(h.value - ref) <= 1e-12 * std::abs(ref));
            }
            {
                const complexd z = x * std::exp(complexd(0.0, M_PI / 4.0));
                auto h = riccati_hankel(l, z);
                const complexd ref = closed_form_hankel(l, z);
                CHECK(std::abs(h.value - ref) <= 1e-12 * std::abs(ref));
            }
            {
                // Im z = 0.3 |z| ray from the recurrence invariant.
                const complexd z(x, 0.3 * x);
                auto h = riccati_hankel(l, z);
                const complexd ref = closed_form_hankel(l, z);
                CHECK(std::abs(h.value - ref) <= 1e-12 * std::abs(ref));
            }
        }
    }
}

TEST_CASE("derivative identity vs central differences") {
    for (int l = 0; l <= 5; ++l) {
        for (double x : {1.0, 3.7, 12.0, 40.0}) {
            const double step = 1e-6 * x;
            auto hp = riccati_hankel(l, x + step);
            auto hm = riccati_hankel(l, x - step);
            const complexd fd = (hp.value - hm.value) / (2.0 * step);
            auto h = riccati_hankel(l, x);
            CHECK(std::abs(h.derivative - fd) <= 1e-6 * std::abs(h.derivative));
        }
    }
}

TEST_CASE("free radial equation residual by finite differences") {
    // Fourth-order stencil; a 3-point one cannot reach 1e-8 against roundoff.
    for (int l = 0; l <= 4; ++l) {
        const double lam = static_cast<double>(l) * (l + 1);
        for (double x = 1.0; x <= 40.0; x += 3.9) {
            const double h = 1e-3;
            const complexd f0 = riccati_hankel(l, x).value;
            const complexd fp1 = riccati_hankel(l, x + h).value;
            const complexd fm1 = riccati_hankel(l, x - h).value;
            const complexd fp2 = riccati_hankel(l, x + 2 * h).value;
            const complexd fm2 = riccati_hankel(l, x - 2 * h).value;
            const complexd d2 =
                (-fp2 + 16.0 * fp1 - 30.0 * f0 + 16.0 * fm1 - fm2) / (12.0 * h * h);
            const complexd rhs = (lam / (x * x) - 1.0) * f0;
            CHECK(std::abs(d2 - rhs) / std::abs(f0) <= 1e-8);
        }
    }
}

TEST_CASE("outgoing asymptotics e^{iz}(1 + i Lambda / 2z)") {
    for (int l = 0; l <= 6; ++l) {
        const double lam = static_cast<double>(l) * (l + 1);
        // |h e^{-iz} - 1 - i Lambda/(2z)| <= C / z^2; C grows like Lambda^2.
        const double C = 2.0 * std::max(1.0, lam * lam);
        for (double z = 20.0; z <= 200.0; z *= 1.7) {
            const complexd h = riccati_hankel(l, z).value;
            const complexd rest =
                h * std::exp(complexd(0.0, -z)) - 1.0 - complexd(0.0, lam / (2.0 * z));
            CHECK(std::abs(rest) <= C / (z * z));
        }
    }
}
