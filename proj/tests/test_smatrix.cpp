#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <filesystem>
#include <fstream>
#include <random>

#include "ccsusy/smatrix.hpp"

using namespace ccsusy;
using Catch::Approx;

namespace {

const double kap1 = 0.232, kap2 = 0.944;

complexd example_s22(double k) {
    const complexd i(0, 1);
    return (k + i * kap1) * (k + i * kap2) / ((k - i * kap1) * (k - i * kap2));
}

double example_delta_s(double k) { return -std::atan(k / kap1) - std::atan(k / kap2); }

const RadialGrid& test_grid() {
    static RadialGrid g = make_radial_grid(1e-4, 60.0, 3000, 1.0);
    return g;
}

} // namespace

TEST_CASE("s-matrix from identity jost matrix") {
    JostMatrix J;
    J.k = 1.0;
    J.F = Mat2c::Identity();
    J.F_neg = Mat2c::Identity();
    J.has_neg = true;
    auto pt = s_matrix(J, ChannelSpec::make(0, 0, 0, 0));
    CHECK((pt.S - Mat2c::Identity()).norm() < 1e-14);

    J.F(0, 0) = 0.0; // singular
    CHECK_THROWS_AS(s_matrix(J, ChannelSpec::make(0, 0, 0, 0)), pole_error);
}

TEST_CASE("example potential s-matrix against the rational closed form") {
    auto V = make_example_v0(kap1, kap2);
    for (double k : {0.3, 1.0, 2.5}) {
        auto pt = s_matrix(jost_matrix(V, k, test_grid()), V.spec());
        CHECK(std::abs(pt.S(0, 0) - complexd(1.0, 0.0)) <= 1e-7);
        CHECK(std::abs(pt.S(0, 1)) <= 1e-9);
        CHECK(std::abs(pt.S(1, 1) - example_s22(k)) <= 1e-7);
        CHECK((pt.S * pt.S.adjoint() - Mat2c::Identity()).norm() <= 1e-8);
        CHECK((pt.S - pt.S.transpose()).norm() <= 1e-8);
    }
    auto pt1 = s_matrix(jost_matrix(V, 1.0, test_grid()), V.spec());
    CHECK(pt1.S(1, 1).real() == Approx(-0.38790).margin(5e-5));
    CHECK(pt1.S(1, 1).imag() == Approx(0.92171).margin(5e-5));
}

TEST_CASE("eigenphase extraction basics") {
    SMatrixPoint pt;
    pt.k = 1.0;

    pt.S = reconstruct_smatrix(0.0, 0.35, 0.0);
    auto e = eigenphases(pt);
    CHECK(e.delta1 == Approx(0.0).margin(1e-12));
    CHECK(e.delta2 == Approx(0.35).margin(1e-12));
    CHECK(e.epsilon == Approx(0.0).margin(1e-12));
    CHECK_FALSE(e.degenerate);

    // Forward construction is its own oracle.
    pt.S = reconstruct_smatrix(0.2, -0.5, 0.3);
    e = eigenphases(pt);
    CHECK(e.delta1 == Approx(0.2).margin(1e-12));
    CHECK(e.delta2 == Approx(-0.5).margin(1e-12));
    CHECK(e.epsilon == Approx(0.3).margin(1e-12));

    pt.S = Mat2c::Identity();
    e = eigenphases(pt);
    CHECK(e.degenerate);
    CHECK(e.delta1 == 0.0);
    CHECK(e.delta2 == 0.0);
    CHECK(e.epsilon == 0.0);
}

TEST_CASE("eigenphase round trip and eigenvalue preservation") {
    std::mt19937 rng(2024);
    std::uniform_real_distribution<double> Ud(-M_PI / 2 + 1e-3, M_PI / 2);
    std::uniform_real_distribution<double> Ue(-M_PI / 4 + 1e-3, M_PI / 4);
    int tested = 0;
    while (tested < 300) {
        const double d1 = Ud(rng), d2 = Ud(rng), eps = Ue(rng);
        if (std::abs(d1 - d2) < 1e-5 || std::abs(std::abs(d1 - d2) - M_PI) < 1e-5) continue;
        ++tested;
        SMatrixPoint pt;
        pt.k = 1.0;
        pt.S = reconstruct_smatrix(d1, d2, eps);
        const auto e = eigenphases(pt);
        CHECK_FALSE(e.degenerate);
        // The decomposition reproduces S...
        CHECK((reconstruct_smatrix(e.delta1, e.delta2, e.epsilon) - pt.S).norm() <= 1e-10);
        // ...and the eigenvalue multiset is preserved exactly.
        const complexd l1 = std::exp(complexd(0, 2 * e.delta1));
        const complexd l2 = std::exp(complexd(0, 2 * e.delta2));
        const complexd r1 = std::exp(complexd(0, 2 * d1));
        const complexd r2 = std::exp(complexd(0, 2 * d2));
        const double direct = std::max(std::abs(l1 - r1), std::abs(l2 - r2));
        const double crossed = std::max(std::abs(l1 - r2), std::abs(l2 - r1));
        CHECK(std::min(direct, crossed) <= 1e-10);
    }
}

TEST_CASE("phase curves of the example potential") {
    auto V = make_example_v0(kap1, kap2);
    std::vector<double> ks = make_k_grid(0.05, 5.0, 100);
    ks.push_back(0.232);
    ks.push_back(1.0);
    std::sort(ks.begin(), ks.end());
    ks.erase(std::unique(ks.begin(), ks.end()), ks.end());

    auto data = phase_curves(V, ks, test_grid());
    for (std::size_t i = 0; i < ks.size(); ++i) {
        // d wave: identity channel; s wave: the arctan formula, channel 2.
        CHECK(std::abs(data.delta1[i]) <= 1e-6);
        CHECK(std::abs(data.delta2[i] - example_delta_s(ks[i])) <= 1e-6);
        CHECK(std::abs(data.epsilon[i]) <= 1e-9);
    }
    const std::size_t i232 = std::lower_bound(ks.begin(), ks.end(), 0.232) - ks.begin();
    CHECK(data.delta2[i232] == Approx(-1.0262).margin(2e-4));
    const std::size_t i1 = std::lower_bound(ks.begin(), ks.end(), 1.0) - ks.begin();
    CHECK(data.delta2[i1] == Approx(-2.1570).margin(2e-4));
}

TEST_CASE("free potential gives all-zero degenerate phases") {
    auto V = make_free(ChannelSpec::make(0, 0, 0, 0));
    auto data = phase_curves(V, make_k_grid(0.1, 2.0, 8), test_grid());
    for (std::size_t i = 0; i < data.k.size(); ++i) {
        CHECK(data.degenerate[i]);
        CHECK(data.delta1[i] == Approx(0.0).margin(1e-9));
        CHECK(data.delta2[i] == Approx(0.0).margin(1e-9));
        CHECK(data.epsilon[i] == Approx(0.0).margin(1e-9));
    }
}

TEST_CASE("coarse k grid triggers a refinement error") {
    auto V = make_example_v0(kap1, kap2);
    const std::vector<double> ks = {0.2, 2.0, 4.0};
    try {
        phase_curves(V, ks, test_grid());
        FAIL("expected numerical_error");
    } catch (const numerical_error& e) {
        const std::string msg = e.what();
        CHECK(msg.find("0.2") != std::string::npos);
        CHECK(msg.find("2") != std::string::npos);
        CHECK(msg.find("refine") != std::string::npos);
    }
}

TEST_CASE("phase csv format") {
    PhaseData d;
    d.k = {0.5, 1.0};
    d.delta1 = {0.0, 0.1};
    d.delta2 = {-1.026360932, -2.15699918};
    d.epsilon = {0.0, 0.0};
    d.degenerate = {false, false};
    const auto path = std::filesystem::temp_directory_path() / "ccsusy_phases.csv";
    write_phase_csv(path.string(), d);
    std::ifstream is(path);
    std::string line;
    std::getline(is, line);
    CHECK(line == "k,delta1,delta2,epsilon");
    std::getline(is, line);
    CHECK(line == "0.5,0,-1.026360932,0");
    std::filesystem::remove(path);
}
