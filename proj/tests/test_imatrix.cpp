#include <gtest/gtest.h>

#include "spectral/oracle.hpp"
#include "support.hpp"

using namespace spectral;

namespace {

Eigen::MatrixXcd random_matrix(std::mt19937_64& rng, int n, double diag_boost) {
    std::normal_distribution<double> g;
    Eigen::MatrixXcd a(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a(i, j) = {g(rng), g(rng)};
    a += diag_boost * Eigen::MatrixXcd::Identity(n, n);
    return a;
}

}  // namespace

TEST(IMatrix, ShapesChecked) {
    IMatrix a(2, 3), b(2, 3);
    EXPECT_THROW(a * b, DimensionMismatch);
    EXPECT_THROW(a.block(1, 1, 2, 2), DimensionMismatch);
    EXPECT_THROW(verified_inverse(a), DimensionMismatch);
}

TEST(IMatrix, SingularMidpointRefused) {
    Eigen::MatrixXd s(2, 2);
    s << 1, 2, 2, 4;
    EXPECT_THROW(verified_inverse(IMatrix(s)), SingularityUnverified);
}

TEST(IMatrix, IdentityInverseIsExact) {
    auto inv = verified_inverse(IMatrix::identity(4));
    for (int i = 0; i < 4; ++i) EXPECT_TRUE(inv.inverse(i, i).re.contains(1.0));
    EXPECT_LT(inv.defect.hi(), 1e-14);
}

TEST(IMatrix, ScaleRowsAndCols) {
    IMatrix a = IMatrix::identity(2);
    IMatrix r = scale_rows(a, {ComplexBox(2.0), ComplexBox(3.0)});
    IMatrix c = scale_cols(a, {ComplexBox(2.0), ComplexBox(3.0)});
    EXPECT_TRUE(r(1, 1).re.contains(3.0));
    EXPECT_TRUE(c(0, 0).re.contains(2.0));
    EXPECT_THROW(scale_rows(a, {ComplexBox(1.0)}), DimensionMismatch);
}

// property: A * enclosure(A^-1) contains the identity
TEST(IMatrixProperty, InverseEnclosureContainsTrueInverse) {
    std::mt19937_64 rng(42);
    for (int trial = 0; trial < 60; ++trial) {
        int n = 2 + static_cast<int>(rng() % 14);
        Eigen::MatrixXcd a = random_matrix(rng, n, 3.0 * std::sqrt(n));
        IMatrix A(a);
        auto inv = verified_inverse(A);
        IMatrix prod = A * inv.inverse;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                ASSERT_TRUE(prod(i, j).re.contains(i == j ? 1.0 : 0.0)) << "trial " << trial;
                ASSERT_TRUE(prod(i, j).im.contains(0.0));
            }
        // the midpoint inverse is within the enclosure
        Eigen::MatrixXcd x = a.inverse();
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) EXPECT_LT(std::abs(inv.inverse(i, j).mid() - x(i, j)), 1e-10);
    }
}

TEST(IMatrixProperty, NormBoundsDominateOracle) {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 100; ++trial) {
        int n = 1 + static_cast<int>(rng() % 20);
        Eigen::MatrixXcd a = random_matrix(rng, n, 0.0);
        IMatrix A(a);
        double smax = oracle::sigma_max(a);
        EXPECT_GE(op_norm2_bound(A).hi(), smax * (1 - 1e-14));
        EXPECT_LE(op_norm2_bound(A).hi(), std::sqrt(double(n)) * smax * 1.01);
        double n1 = a.cwiseAbs().colwise().sum().maxCoeff();
        EXPECT_GE(norm1_bound(A).hi(), n1 * (1 - 1e-15));
    }
}

TEST(IMatrixProperty, ProductOfWideBoxesContainsSamples) {
    std::mt19937_64 rng(5);
    testsupport::TrialStats st;
    for (long k = 0; k < 4000; ++k) testsupport::containment_trial(rng, 13 + (k % 3), st);
    EXPECT_EQ(st.violations, 0) << st.first_failure;
}

// property: large products take the midpoint-radius route; sampled point
// products, evaluated in 50 digits, stay inside
TEST(IMatrixProperty, LargeProductEnclosesSampledProducts) {
    std::mt19937_64 rng(31);
    const int n = 140;
    for (bool complex_case : {false, true}) {
        IMatrix a(n, n), b(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                a(i, j) = complex_case ? testsupport::random_box(rng) : ComplexBox(testsupport::random_interval(rng));
                b(i, j) = complex_case ? testsupport::random_box(rng) : ComplexBox(testsupport::random_interval(rng));
            }
        IMatrix c = a * b;
        for (int trial = 0; trial < 3; ++trial) {
            std::vector<testsupport::HP> ar(n * n), ai(n * n), br(n * n), bi(n * n);
            for (int k = 0; k < n * n; ++k) {
                ar[k] = testsupport::sample(rng, a(k / n, k % n).re);
                ai[k] = testsupport::sample(rng, a(k / n, k % n).im);
                br[k] = testsupport::sample(rng, b(k / n, k % n).re);
                bi[k] = testsupport::sample(rng, b(k / n, k % n).im);
            }
            for (int e = 0; e < 20; ++e) {
                int i = static_cast<int>(rng() % n), j = static_cast<int>(rng() % n);
                testsupport::HP re = 0, im = 0;
                for (int k = 0; k < n; ++k) {
                    re += ar[i * n + k] * br[k * n + j] - ai[i * n + k] * bi[k * n + j];
                    im += ar[i * n + k] * bi[k * n + j] + ai[i * n + k] * br[k * n + j];
                }
                EXPECT_TRUE(testsupport::holds(c(i, j).re, re)) << i << "," << j;
                EXPECT_TRUE(testsupport::holds(c(i, j).im, im)) << i << "," << j;
            }
        }
    }
}

// point inputs: the midpoint-radius product stays within a few ulps of the exact one
TEST(IMatrix, LargePointProductIsTight) {
    std::mt19937_64 rng(8);
    Eigen::MatrixXd a = Eigen::MatrixXd::Random(150, 150), b = Eigen::MatrixXd::Random(150, 150);
    IMatrix c = IMatrix(a) * IMatrix(b);
    Eigen::MatrixXd ref = a * b;
    double worst = 0.0;
    for (int i = 0; i < 150; ++i)
        for (int j = 0; j < 150; ++j) {
            EXPECT_TRUE(c(i, j).re.contains(ref(i, j)));
            worst = std::max(worst, c(i, j).re.width());
        }
    EXPECT_LT(worst, 1e-11);
}
