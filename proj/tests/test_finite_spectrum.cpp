#include <gtest/gtest.h>

#include "gershgorin_support.hpp"
#include "toy.hpp"

using namespace spectral;

using testsupport::Toy;

namespace {

const Toy& toy() { return testsupport::standard_toy(); }

}  // namespace

TEST(Newton, ToyConverges) {
    ModelDescriptor md = toy().model;
    GridSpec g{1, 32, 20.0};
    FourierSeq seed = make_seed({"gaussian", 1.5, 2.0, ""}, g, Sector::parse("c", 1));
    NewtonResult r = newton_solve(md, seed);
    EXPECT_LE(r.iterations, 10);
    EXPECT_LT(r.residual, 1e-12);
    EXPECT_LT(r.residual_enclosure.hi(), 1e-12);
    // frozen from the first converged run
    EXPECT_NEAR(r.U0.at({0, 0}).mid(), 0.131859, 5e-6);
}

TEST(Newton, ResidualVanishesAtSolution) {
    auto res = newton_residual(toy().model, toy().U0);
    double s = 0.0;
    for (double v : res) s += v * v;
    EXPECT_LT(std::sqrt(s), 1e-12);
}

TEST(Newton, FailsFromZeroSeedGracefully) {
    // zero is a solution too; Newton stays there
    GridSpec g{1, 16, 10.0};
    FourierSeq z(g, Sector::parse("c", 1), 16);
    NewtonResult r = newton_solve(toy().model, z);
    EXPECT_LT(r.residual, 1e-14);
}

TEST(Jacobian, ToyRegimeSizes) {
    Jacobian jac = assemble_jacobian(toy().model, toy().U0, Sector::parse("c", 1));
    EXPECT_EQ(jac.n_in(), 33u);
    EXPECT_EQ(jac.n_ring(), 64u);
    EXPECT_TRUE(jac.self_adjoint);
    EXPECT_EQ(jac.kernel_radius, 64);
    EXPECT_GT(jac.tail_s_from, M_PI * 96 / 20.0);
}

TEST(Jacobian, BandIsSymmetricInOrthonormalCoordinates) {
    IMatrix A = assemble_band(toy().model, toy().U0, Sector::parse("c", 1), 40);
    Eigen::MatrixXcd m = A.mid();
    EXPECT_LT((m - m.adjoint()).cwiseAbs().maxCoeff(), 1e-13);
}

// property: even and odd sectors together carry the full-grid spectrum
TEST(JacobianProperty, SectorsSplitTheFullSpectrum) {
    const auto& t = toy();
    int R = 40;
    auto ec = oracle::dense_eigs(assemble_band(t.model, t.U0, Sector::parse("c", 1), R).mid());
    auto es = oracle::dense_eigs(assemble_band(t.model, t.U0, Sector::parse("s", 1), R).mid());
    auto ef = oracle::dense_eigs(assemble_band(t.model, t.U0, Sector::parse("full", 1), R).mid());
    std::vector<double> joint;
    for (auto z : ec) joint.push_back(z.real());
    for (auto z : es) joint.push_back(z.real());
    std::sort(joint.begin(), joint.end());
    ASSERT_EQ(joint.size(), ef.size());
    for (size_t i = 0; i < joint.size(); ++i) EXPECT_NEAR(joint[i], ef[i].real(), 1e-9 * (1 + std::fabs(joint[i])));
}

TEST(PseudoDiag, ToyShiftAndConditioning) {
    Jacobian jac = assemble_jacobian(toy().model, toy().U0, Sector::parse("c", 1));
    PseudoDiag pd = build_pseudo_diag(jac);
    EXPECT_TRUE(pd.S_plus_t_invertible);
    EXPECT_LT(pd.condition, 1.0 + 1e-8);
    EXPECT_LT(pd.PN_inv_defect.hi(), 1e-10);
    // t = -(max lambda + 1)
    EXPECT_NEAR(pd.t.re.mid(), -(pd.lambda.back().re.mid() + 1.0), 1e-9);
}

TEST(PseudoDiag, JordanBlockIsDegenerate) {
    Eigen::MatrixXd j(2, 2);
    j << 1.0, 1.0, 0.0, 1.0;
    EXPECT_THROW(build_pseudo_diag(jacobian_from_matrix(IMatrix(j))), DegenerateEigenbasis);
}

TEST(Disks, OverlapIsConservative) {
    Disk a{ComplexBox(0.0), Interval(1.0), {0, 0}, 0};
    Disk b{ComplexBox(2.0), Interval(1.0), {1, 0}, 0};
    Disk c{ComplexBox(Interval(1.95, 2.1)), Interval(0.99), {2, 0}, 0};
    EXPECT_TRUE(disks_overlap(a, b));  // touching counts
    EXPECT_TRUE(disks_overlap(a, c));  // uncertain counts
    Disk e{ComplexBox(5.0), Interval(1.0), {3, 0}, 0};
    EXPECT_FALSE(disks_overlap(a, e));
}

TEST(Disks, ToyClustersAndTail) {
    Jacobian jac = assemble_jacobian(toy().model, toy().U0, Sector::parse("c", 1));
    PseudoDiag pd = build_pseudo_diag(jac);
    DiskSet ds = cluster_disks(gershgorin_radii(pd, jac));
    EXPECT_TRUE(ds.tail.present);
    ASSERT_FALSE(ds.clusters.empty());
    // the two unstable directions form isolated clusters near 1.0 and 1.29
    int found = 0;
    for (const auto& c : ds.clusters)
        if (!c.touches_tail && c.hull.re.lo() > 0.9 && c.hull.re.hi() < 1.4) found += c.multiplicity();
    EXPECT_EQ(found, 2);
    auto j = disks_to_json(ds);
    EXPECT_EQ(j.at("schema"), "spectral-disks");
}

TEST(Disks, TailMeetsDisksFarOut) {
    Jacobian jac = assemble_jacobian(toy().model, toy().U0, Sector::parse("c", 1));
    PseudoDiag pd = build_pseudo_diag(jac);
    DiskSet ds = gershgorin_radii(pd, jac);
    Disk far{ComplexBox(toy().model.symbol(Interval(jac.tail_s_from + 1.0)) + jac.kernel_K0), Interval(0.1), {0, 0}, 0};
    EXPECT_TRUE(touches_tail(far, ds.tail, &toy().model));
    Disk near{ComplexBox(1.0), Interval(0.1), {0, 0}, 0};
    EXPECT_FALSE(touches_tail(near, ds.tail, &toy().model));
}

// property: disk unions contain the oracle spectrum with matching counts
TEST(GershgorinProperty, RandomOperatorsAgainstOracle) {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 25; ++trial) {
        int n = 20 + static_cast<int>(rng() % 40);
        auto A = testsupport::random_symbol_plus_conv(rng, n, trial % 2 == 0);
        auto r = testsupport::gershgorin_vs_oracle(A);
        EXPECT_TRUE(r.ok) << "trial " << trial << ": " << r.message;
    }
}
