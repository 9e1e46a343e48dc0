#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <string>

#include "spectral/errors.hpp"

namespace spectral {

inline double round_down(double x) { return std::nextafter(x, -std::numeric_limits<double>::infinity()); }
inline double round_up(double x) { return std::nextafter(x, std::numeric_limits<double>::infinity()); }

// Closed real interval [lo, hi]. Endpoints are widened by one ulp after every
// rounded operation; the hardware rounding mode is never touched.
class Interval {
public:
    constexpr Interval() = default;
    Interval(double v);  // NOLINT: implicit point intervals keep formulas readable
    Interval(double lo, double hi);

    static Interval entire();
    static Interval from_below(double lo);  // [lo, +inf)
    static Interval from_above(double hi);  // (-inf, hi]
    // Point enclosure of a value known to lie within k ulps of x.
    static Interval around(double x, int ulps = 1);

    double lo() const { return lo_; }
    double hi() const { return hi_; }
    double mid() const;
    double rad() const;
    double width() const;
    double mag() const;  // max |x|
    double mig() const;  // min |x|

    bool is_bounded() const { return std::isfinite(lo_) && std::isfinite(hi_); }
    bool is_point() const { return lo_ == hi_; }
    bool contains(double x) const { return lo_ <= x && x <= hi_; }
    bool contains(const Interval& o) const { return lo_ <= o.lo_ && o.hi_ <= hi_; }
    bool contains_zero() const { return lo_ <= 0.0 && 0.0 <= hi_; }
    bool certainly_positive() const { return lo_ > 0.0; }
    bool certainly_negative() const { return hi_ < 0.0; }
    bool certainly_less(const Interval& o) const { return hi_ < o.lo_; }

    Interval& operator+=(const Interval& o);
    Interval& operator-=(const Interval& o);
    Interval& operator*=(const Interval& o);
    Interval& operator/=(const Interval& o);

private:
    double lo_ = 0.0;
    double hi_ = 0.0;
};

bool operator==(const Interval& a, const Interval& b);
inline bool operator!=(const Interval& a, const Interval& b) { return !(a == b); }

Interval operator-(const Interval& a);
Interval operator+(const Interval& a, const Interval& b);
Interval operator-(const Interval& a, const Interval& b);
Interval operator*(const Interval& a, const Interval& b);
Interval operator/(const Interval& a, const Interval& b);

inline Interval iv_add(const Interval& a, const Interval& b) { return a + b; }
inline Interval iv_sub(const Interval& a, const Interval& b) { return a - b; }
inline Interval iv_mul(const Interval& a, const Interval& b) { return a * b; }
inline Interval iv_div(const Interval& a, const Interval& b) { return a / b; }
Interval iv_sqrt(const Interval& a);
Interval iv_abs(const Interval& a);

Interval sqr(const Interval& a);
Interval pow(const Interval& a, int k);
Interval hull(const Interval& a, const Interval& b);
Interval intersect(const Interval& a, const Interval& b);
Interval max(const Interval& a, const Interval& b);
Interval min(const Interval& a, const Interval& b);

// Elementary functions. libm results are widened by a few ulps to cover the
// documented glibc error bounds.
Interval exp(const Interval& a);
Interval log(const Interval& a);
Interval tanh(const Interval& a);
Interval sinh(const Interval& a);
Interval cosh(const Interval& a);
Interval cos(const Interval& a);
Interval sin(const Interval& a);
Interval atan(const Interval& a);

Interval pi();
Interval two_pi();

// Parses a decimal or hex-float literal into the tightest enclosing interval.
Interval parse_interval_literal(const std::string& text);
// Shortest decimal string that round-trips to the same binary64 value.
std::string shortest_decimal(double x);
std::string hex_float(double x);
double parse_double_exact(const std::string& text);

// Complex rectangle re + i im.
struct ComplexBox {
    Interval re;
    Interval im;

    ComplexBox() = default;
    ComplexBox(const Interval& r) : re(r), im(0.0) {}  // NOLINT
    ComplexBox(double r) : re(r), im(0.0) {}           // NOLINT
    ComplexBox(const Interval& r, const Interval& i) : re(r), im(i) {}
    ComplexBox(std::complex<double> z) : re(z.real()), im(z.imag()) {}  // NOLINT

    bool is_real() const { return im.lo() == 0.0 && im.hi() == 0.0; }
    Interval to_interval() const;
    std::complex<double> mid() const { return {re.mid(), im.mid()}; }
    bool contains(std::complex<double> z) const { return re.contains(z.real()) && im.contains(z.imag()); }
    bool contains(const ComplexBox& o) const { return re.contains(o.re) && im.contains(o.im); }
    double rad() const;  // radius of a disk centred at mid() covering the box
};

bool operator==(const ComplexBox& a, const ComplexBox& b);
ComplexBox operator-(const ComplexBox& a);
ComplexBox operator+(const ComplexBox& a, const ComplexBox& b);
ComplexBox operator-(const ComplexBox& a, const ComplexBox& b);
ComplexBox operator*(const ComplexBox& a, const ComplexBox& b);
ComplexBox operator/(const ComplexBox& a, const ComplexBox& b);
ComplexBox conj(const ComplexBox& a);
Interval abs(const ComplexBox& a);
Interval norm_sq(const ComplexBox& a);
ComplexBox hull(const ComplexBox& a, const ComplexBox& b);
ComplexBox expi(const Interval& theta);  // e^{i theta}

}  // namespace spectral
