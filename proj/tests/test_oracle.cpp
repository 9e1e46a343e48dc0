#include <gtest/gtest.h>

#include "spectral/errors.hpp"
#include "spectral/oracle.hpp"

using namespace spectral;

// reference values from mpmath, frozen
TEST(Oracle, BesselK0) {
    auto a = oracle::bessel_k0({0.3, -1.2});
    EXPECT_NEAR(a.real(), -0.172889118201685, 1e-10);
    EXPECT_NEAR(a.imag(), 0.78255729015196, 1e-10);
    EXPECT_NEAR(oracle::bessel_k0(2.0).real(), 0.113893872749533, 1e-12);
    auto b = oracle::bessel_k0({0.05, 0.7});
    EXPECT_NEAR(b.real(), 0.322628999409024, 1e-8);
    EXPECT_NEAR(b.imag(), -1.2984475830992, 1e-8);
}

TEST(Oracle, BesselStepHalvingIsStable) {
    auto a = oracle::bessel_k0({0.4, 0.9}, 4e-3), b = oracle::bessel_k0({0.4, 0.9}, 2e-3);
    EXPECT_LT(std::abs(a - b), 1e-12);
}

// The oracle kernel is 2 pi times the inverse transform (1/2pi) int s J0(sr) / (sigma + (1 - s^2)^2) ds;
// the decay constant 1.335 / sqrt(sigma) is tight in that normalization.
TEST(Oracle, SwiftHohenbergKernel2D) {
    const double tp = 2 * M_PI;
    EXPECT_NEAR(oracle::sh_resolvent_kernel_2d(0.3, 0.0) / tp, 0.383632702571358, 1e-9);
    EXPECT_NEAR(oracle::sh_resolvent_kernel_2d(0.3, 1.5) / tp, 0.156932058479648, 1e-9);
    EXPECT_NEAR(oracle::sh_resolvent_kernel_2d(1.0, 3.0) / tp, -0.0173956846501242, 1e-9);
    EXPECT_LE(oracle::sh_resolvent_kernel_2d(0.3, 0.0), 1.335 / std::sqrt(0.3));
}

TEST(Oracle, DenseEigsSortedAndHermitianPath) {
    Eigen::MatrixXd a(3, 3);
    a << 2, 1, 0, 1, 2, 0, 0, 0, -1;
    auto ev = oracle::dense_eigs(a);
    ASSERT_EQ(ev.size(), 3u);
    EXPECT_NEAR(ev[0].real(), -1.0, 1e-14);
    EXPECT_NEAR(ev[1].real(), 1.0, 1e-14);
    EXPECT_NEAR(ev[2].real(), 3.0, 1e-14);
    Eigen::MatrixXcd r(2, 2);
    r << 0, -1, 1, 0;
    auto er = oracle::dense_eigs(r);
    EXPECT_NEAR(er[0].imag(), -1.0, 1e-14);
    EXPECT_NEAR(er[1].imag(), 1.0, 1e-14);
}

TEST(Oracle, Quadrature) {
    EXPECT_NEAR(oracle::quadrature([](double x) { return std::exp(-x); }, 0.0, 40.0), 1.0, 1e-12);
    // int_{|2 pi xi| <= R} (1 + s^2)^-2 over R^1 with ds / pi: (atan R + R/(1+R^2)) / (2 pi)
    double R = 5.0;
    double v = oracle::quadrature_L2([](double s) { return 1.0 / (1.0 + s * s); }, R, 1);
    EXPECT_NEAR(v, (std::atan(R) + R / (1 + R * R)) / (2 * M_PI), 1e-12);
}

TEST(Oracle, CountInDisk) {
    std::vector<std::complex<double>> e = {{0, 0}, {1, 0}, {1, 1}, {5, 0}};
    EXPECT_EQ(oracle::count_in_disk(e, {1, 0}, 1.0), 3);
    EXPECT_EQ(oracle::count_in_disk(e, {5, 0}, 0.1), 1);
}
