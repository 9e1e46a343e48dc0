#include <gtest/gtest.h>

#include "spectral/json_io.hpp"
#include "spectral/model.hpp"
#include "spectral/oracle.hpp"
#include "support.hpp"

using namespace spectral;

namespace {

ModelDescriptor sh(double mu, int m = 1) { return sh_model(Interval(mu), Interval(-3.0), Interval(1.0), m); }

}  // namespace

TEST(Model, SwiftHohenbergSymbol) {
    ModelDescriptor md = sh(1.0);
    EXPECT_TRUE(md.symbol(Interval(1.0)).contains(-1.0));
    EXPECT_TRUE(md.symbol(Interval(0.0)).contains(-2.0));
    EXPECT_TRUE(md.symbol(Interval(2.0)).contains(-10.0));
    EXPECT_EQ(md.degree(), 3);
}

TEST(Model, EssentialSpectrumEdges) {
    EssentialSpectrum es = essential_spectrum(sh(0.28, 2));
    EXPECT_TRUE(es.unbounded_below());
    EXPECT_TRUE(es.edge().contains(-0.28));

    ModelDescriptor w = whitham_model(parse_interval_literal("0.5"), parse_interval_literal("0.8"));
    EssentialSpectrum ew = essential_spectrum(w);
    EXPECT_TRUE(ew.unbounded_above());
    EXPECT_TRUE(ew.edge().contains(0.2));
    EXPECT_LE(ew.edge().width(), 1e-12);

    ModelDescriptor gs = gray_scott_model(Interval(1.0) / Interval(9.0), Interval(10.0));
    EssentialSpectrum eg = essential_spectrum(gs);
    EXPECT_TRUE(eg.unbounded_below());
    EXPECT_TRUE(eg.edge().contains(-1.0));
}

TEST(Model, WhithamSmallTensionEdgeIsInterior) {
    // for T < 1/3 the dispersion dips below its value at 0
    ModelDescriptor w = whitham_model(Interval(0.2), Interval(0.8));
    EssentialSpectrum ew = essential_spectrum(w);
    EXPECT_LT(ew.edge().hi(), 0.2);
    EXPECT_GT(ew.edge().lo(), 0.12);
}

TEST(Model, TanhOverSNearZero) {
    for (double s : {0.0, 1e-9, 1e-4, 0.3, 5.0}) {
        Interval v = tanh_over_s(Interval(s));
        double ref = s == 0.0 ? 1.0 : std::tanh(s) / s;
        EXPECT_TRUE(v.contains(ref)) << s;
    }
}

TEST(Model, WhithamDispersionMatchesFormula) {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(1e-3, 30.0);
    for (int i = 0; i < 200; ++i) {
        double s = u(rng);
        double ref = std::sqrt(std::tanh(s) * (1 + 0.5 * s * s) / s);
        EXPECT_TRUE(whitham_mT(Interval(s), Interval(0.5)).contains(ref));
    }
}

// against scipy quad, frozen
TEST(Model, KappaEnclosesQuadratureValue) {
    struct Case {
        double mu;
        int m;
        double ref;
    } cases[] = {{1.0, 1, 0.512727514227092}, {0.3, 2, 2.870172733936277}, {0.28, 2, 3.241919049770543}};
    for (const auto& c : cases) {
        Interval k = sh(c.mu, c.m).kappa_value();
        EXPECT_GE(k.hi(), c.ref);
        EXPECT_LE(k.hi(), c.ref * 1.01) << c.mu;
    }
}

TEST(Model, ReciprocalL2NeedsIntegrability) {
    // l(s) = -1 - s^2 in 2D: 1/l^2 ~ s^-4 times s ds integrates, 1D too
    ModelDescriptor ok = polynomial_model({Interval(-1.0), Interval(-1.0)}, {{2, Interval(1.0)}}, 2);
    EXPECT_TRUE(ok.kappa.has_value());
    ModelDescriptor flat = constant_model(Interval(-1.0), 1);
    EXPECT_THROW(rigorous_L2_of_reciprocal(flat), TailNotIntegrable);
}

TEST(Model, DecayConstantsClosedForm) {
    // 2D: C = 1.335 / sqrt(mu + lambda), a = sqrt(sqrt(1 + mu + lambda) - 1) / 2
    DecayConstants d = sh_decay(Interval(0.28), Interval(0.05), 2);
    double s = 0.33;
    EXPECT_TRUE(d.C.contains(1.335 / std::sqrt(s)));
    EXPECT_TRUE(d.a.contains(std::sqrt(std::sqrt(1 + s) - 1) / 2));
    EXPECT_THROW(sh_decay(Interval(0.28), Interval(-0.3), 2), DecayDomainMismatch);
}

// property: the 1D kernel really decays at the stated rate (quadrature oracle)
TEST(ModelProperty, OneDimensionalDecayBound) {
    for (double sigma : {0.05, 0.3, 1.0, 3.0}) {
        DecayConstants d = sh_decay(Interval(sigma), Interval(0.0), 1);
        for (double x : {0.0, 0.5, 2.0, 5.0, 10.0}) {
            // f(x) = (1/pi) int_0^inf cos(kx) / (sigma + (1 - k^2)^2) dk
            double f = oracle::quadrature([&](double k) { return std::cos(k * x) / (sigma + std::pow(1 - k * k, 2)); },
                                          0.0, 60.0, 1e-11) / M_PI;
            EXPECT_LE(std::fabs(f), d.C.hi() * std::exp(-d.a.lo() * x) * (1 + 1e-6) + 1e-9) << sigma << " " << x;
        }
    }
}

TEST(Model, DecayTableLookup) {
    ModelDescriptor w = whitham_model(Interval(0.5), Interval(0.8));
    EXPECT_THROW(w.decay(Interval(0.1)), DecayDomainMismatch);
    w.decay_table.push_back({Interval(-1.0, 0.15), Interval(2.0), Interval(0.3)});
    EXPECT_TRUE(w.decay(Interval(0.1)).C.contains(2.0));
}

TEST(Model, DgKernelOfSwiftHohenberg) {
    // the nonlinear part is -(nu1 u^2 + nu2 u^3), so DG(u) = -(2 nu1 u + 3 nu2 u^2)
    ModelDescriptor md = sh(1.0);
    FourierSeq U({1, 4, 5.0}, Sector::parse("c", 1), 1);
    U.set({0, 0}, Interval(0.5));
    U.set({1, 0}, Interval(0.25));
    FourierSeq K = md.dg_kernel(U);
    // constant term: -(2*(-3)*0.5 + 3*(0.5^2 + 2*0.25^2))
    EXPECT_TRUE(K.at({0, 0}).contains(3.0 - 3.0 * (0.25 + 0.125)));
    EXPECT_THROW(gray_scott_model(Interval(0.1), Interval(10.0)).dg_kernel(U), UnsupportedModel);
}

TEST(Model, LipschitzGrowsWithRadius) {
    ModelDescriptor md = sh(1.0);
    Interval a = md.lipschitz_per_r0(Interval(1.0), Interval(1e-8));
    Interval b = md.lipschitz_per_r0(Interval(1.0), Interval(1e-2));
    EXPECT_LE(a.hi(), b.hi());
    EXPECT_GT(a.hi(), 0.0);
}

TEST(Model, SymbolDistanceAndSigmaDelta) {
    ModelDescriptor md = sh(1.0);
    // nearest symbol value to 0 is the edge -1
    EXPECT_TRUE(symbol_distance(md, ComplexBox(0.0)).contains(1.0));
    EXPECT_TRUE(sigma_delta_test(md, Interval(0.5), ComplexBox(0.0)));
    EXPECT_FALSE(sigma_delta_test(md, Interval(0.5), ComplexBox(-1.2)));
    EXPECT_LE(symbol_distance(md, ComplexBox(Interval(-5.0), Interval(0.5))).lo(), 0.5);
}

TEST(Model, JsonRoundTrip) {
    ModelDescriptor md = model_from_json(
        R"({"model":"swift_hohenberg","m":2,"params":{"mu":"0.28","nu1":"1.6","nu2":"-1"},"sectors":["cc","ss"]})");
    EXPECT_EQ(md.m, 2);
    EXPECT_TRUE(md.param("mu").contains(parse_interval_literal("0.28")));
    ModelDescriptor again = model_from_json(model_to_json(md));
    EXPECT_EQ(again.param("nu1"), md.param("nu1"));
    EXPECT_EQ(again.sectors, md.sectors);
    EXPECT_THROW(model_from_json(R"({"model":"unknown"})"), FormatError);
}

// property: bounds on the spectrum of a truncation hold for random toys
TEST(ModelProperty, SpectrumBoundsContainTruncationEigenvalues) {
    std::mt19937_64 rng(21);
    std::normal_distribution<double> g(0.0, 0.2);
    for (int trial = 0; trial < 15; ++trial) {
        ModelDescriptor md = sh(0.5 + 0.1 * trial);
        GridSpec grid{1, 12, 8.0};
        FourierSeq U(grid, Sector::parse("c", 1), 6);
        for (const auto& n : U.indices()) U.set(n, Interval(g(rng) * std::exp(-0.3 * n[0])));
        Interval up = spectrum_upper_bound(md, U, Interval(0.0));
        EXPECT_THROW(spectrum_lower_bound(md, U, Interval(0.0)), InvalidParameter);
        FourierSeq K = md.dg_kernel(U);
        // symmetric truncation on the full grid
        int R = 24;
        Eigen::MatrixXd A = Eigen::MatrixXd::Zero(2 * R + 1, 2 * R + 1);
        for (int i = -R; i <= R; ++i) {
            A(i + R, i + R) = md.symbol(Interval(M_PI * std::abs(i) / grid.d)).mid();
            for (int j = -R; j <= R; ++j)
                if (std::abs(i - j) <= K.radius()) A(i + R, j + R) += K.at({i - j, 0}).mid();
        }
        auto ev = oracle::dense_eigs(A);
        EXPECT_LE(ev.back().real(), up.hi());
    }
}
