#include <gtest/gtest.h>

#include "spectral/json_io.hpp"
#include "support.hpp"

using namespace spectral;
using testsupport::HP;
using testsupport::holds;

TEST(Interval, ConstructionRejectsBadEndpoints) {
    EXPECT_THROW(Interval(2.0, 1.0), InvalidInterval);
    EXPECT_THROW(Interval{std::nan("")}, InvalidInterval);
    EXPECT_THROW(Interval{INFINITY}, InvalidInterval);
    EXPECT_NO_THROW(Interval::from_below(1.0));
    EXPECT_EQ(Interval::from_above(2.0).lo(), -INFINITY);
}

TEST(Interval, DivisionByZeroContainingDivisor) {
    EXPECT_THROW(Interval(1.0) / Interval(-1.0, 1.0), DivisionByZeroInterval);
    EXPECT_THROW(iv_sqrt(Interval(-2.0, -1.0)), DomainError);
    EXPECT_THROW(log(Interval(0.0, 1.0)), DomainError);
}

TEST(Interval, UnboundedArithmeticRefused) {
    EXPECT_THROW(Interval::from_below(0.0) + Interval(1.0), UnboundedOperand);
}

TEST(Interval, TenthIsEnclosedStrictly) {
    Interval t = parse_interval_literal("0.1");
    EXPECT_TRUE(holds(t, HP("0.1")));
    EXPECT_LT(t.lo(), t.hi());
    Interval e = parse_interval_literal("0.5");
    EXPECT_TRUE(e.is_point());
}

TEST(Interval, HexLiteralIsExact) {
    Interval h = parse_interval_literal("0x1.8p-1");
    EXPECT_TRUE(h.is_point());
    EXPECT_EQ(h.lo(), 0.75);
}

TEST(Interval, ShortestDecimalRoundTrips) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-50, 50);
    for (int i = 0; i < 2000; ++i) {
        double x = std::ldexp(u(rng), static_cast<int>(rng() % 80) - 40);
        EXPECT_EQ(parse_double_exact(shortest_decimal(x)), x);
        EXPECT_EQ(parse_double_exact(hex_float(x)), x);
    }
}

TEST(Interval, PiEnclosure) {
    EXPECT_TRUE(holds(pi(), boost::math::constants::pi<HP>()));
    EXPECT_LT(pi().width(), 1e-15);
}

TEST(Interval, PowerOfSignStraddlingInterval) {
    Interval x(-2.0, 1.0);
    Interval s = sqr(x);
    EXPECT_EQ(s.lo(), 0.0);
    EXPECT_GE(s.hi(), 4.0);
    Interval c = pow(x, 3);
    EXPECT_LE(c.lo(), -8.0);
    EXPECT_GE(c.hi(), 1.0);
}

TEST(Interval, ComplexAbsAndConj) {
    ComplexBox z(Interval(3.0), Interval(4.0));
    EXPECT_TRUE(abs(z).contains(5.0));
    EXPECT_TRUE(conj(z).im.contains(-4.0));
    ComplexBox w = z / z;
    EXPECT_TRUE(w.re.contains(1.0));
    EXPECT_TRUE(w.im.contains(0.0));
}

TEST(Interval, JsonRoundTrip) {
    Interval x(-0.1, 0.3);
    EXPECT_EQ(interval_from_json(to_json(x)), x);
    EXPECT_EQ(interval_from_json(nlohmann::json("0x1p-3")), Interval(0.125));
    Interval d = interval_from_json(nlohmann::json(0.1));
    EXPECT_TRUE(holds(d, HP("0.1")));
}

// property: random containment across all operation families
TEST(IntervalProperty, RandomContainment) {
    std::mt19937_64 rng(0x5eed);
    testsupport::TrialStats st;
    for (long k = 0; k < 40000; ++k) testsupport::containment_trial(rng, k, st);
    EXPECT_EQ(st.violations, 0) << st.first_failure;
}

TEST(IntervalProperty, ElementaryFunctionsOnWideBoxes) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-6, 6);
    for (int i = 0; i < 3000; ++i) {
        double a = u(rng), b = u(rng);
        Interval x(std::min(a, b), std::max(a, b));
        Interval c = cos(x), s = sin(x);
        for (int k = 0; k <= 8; ++k) {
            HP v = HP(x.lo()) + (HP(x.hi()) - HP(x.lo())) * k / 8;
            ASSERT_TRUE(holds(c, boost::multiprecision::cos(v)));
            ASSERT_TRUE(holds(s, boost::multiprecision::sin(v)));
        }
        EXPECT_GE(c.lo(), -1.0);
        EXPECT_LE(s.hi(), 1.0);
    }
}
