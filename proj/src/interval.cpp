#include "spectral/interval.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <cstring>

namespace spectral {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Below this magnitude error-free transforms may lose the sign of the error
// term to underflow, so both endpoints are stepped unconditionally.
constexpr double kTiny = 0x1p-960;
// glibc documents at most 2 ulp error for the transcendental functions used.
constexpr int kLibmUlps = 3;

double step_down(double x, int k) {
    for (int i = 0; i < k; ++i) x = round_down(x);
    return x;
}

double step_up(double x, int k) {
    for (int i = 0; i < k; ++i) x = round_up(x);
    return x;
}

void require_bounded(const Interval& a) {
    if (!a.is_bounded()) throw UnboundedOperand("arithmetic on an unbounded interval");
}

// Lower and upper binary64 bounds of x + y, sharp when the sum is exact.
std::pair<double, double> sum_bounds(double x, double y) {
    double s = x + y;
    if (std::isinf(s)) return {s > 0 ? std::numeric_limits<double>::max() : -kInf, s > 0 ? kInf : std::numeric_limits<double>::lowest()};
    double bb = s - x;
    double e = (x - (s - bb)) + (y - bb);
    if (e == 0.0) return {s, s};
    return e > 0 ? std::pair{s, round_up(s)} : std::pair{round_down(s), s};
}

std::pair<double, double> prod_bounds(double x, double y) {
    double p = x * y;
    if (std::isinf(p)) return {p > 0 ? std::numeric_limits<double>::max() : -kInf, p > 0 ? kInf : std::numeric_limits<double>::lowest()};
    if (std::fabs(p) < kTiny) {
        if (x == 0.0 || y == 0.0) return {0.0, 0.0};
        return {round_down(p), round_up(p)};
    }
    double e = std::fma(x, y, -p);
    if (e == 0.0) return {p, p};
    return e > 0 ? std::pair{p, round_up(p)} : std::pair{round_down(p), p};
}

std::pair<double, double> quot_bounds(double x, double y) {
    double q = x / y;
    if (std::isinf(q)) return {q > 0 ? std::numeric_limits<double>::max() : -kInf, q > 0 ? kInf : std::numeric_limits<double>::lowest()};
    if (std::fabs(q) < kTiny || std::fabs(x) < kTiny) {
        if (x == 0.0) return {0.0, 0.0};
        return {round_down(q), round_up(q)};
    }
    double r = std::fma(-q, y, x);  // x - q*y exactly
    if (r == 0.0) return {q, q};
    bool above = (r > 0) == (y > 0);
    return above ? std::pair{q, round_up(q)} : std::pair{round_down(q), q};
}

std::pair<double, double> sqrt_bounds(double x) {
    double s = std::sqrt(x);
    if (x == 0.0) return {0.0, 0.0};
    if (x < kTiny) return {std::max(0.0, round_down(s)), round_up(s)};
    double r = std::fma(-s, s, x);
    if (r == 0.0) return {s, s};
    return r > 0 ? std::pair{s, round_up(s)} : std::pair{round_down(s), s};
}

Interval libm_monotone(double (*f)(double), const Interval& a, bool increasing) {
    double flo = f(a.lo());
    double fhi = f(a.hi());
    if (!increasing) std::swap(flo, fhi);
    return {step_down(flo, kLibmUlps), step_up(fhi, kLibmUlps)};
}

}  // namespace

Interval::Interval(double v) : lo_(v), hi_(v) {
    if (std::isnan(v)) throw InvalidInterval("NaN endpoint");
    if (std::isinf(v)) throw InvalidInterval("infinite point interval");
}

Interval::Interval(double lo, double hi) : lo_(lo), hi_(hi) {
    if (std::isnan(lo) || std::isnan(hi)) throw InvalidInterval("NaN endpoint");
    if (lo > hi) throw InvalidInterval("lo > hi");
    if (lo == kInf || hi == -kInf) throw InvalidInterval("empty unbounded interval");
}

Interval Interval::entire() { return {-kInf, kInf}; }
Interval Interval::from_below(double lo) { return {lo, kInf}; }
Interval Interval::from_above(double hi) { return {-kInf, hi}; }
Interval Interval::around(double x, int ulps) { return {step_down(x, ulps), step_up(x, ulps)}; }

double Interval::mid() const {
    if (!is_bounded()) throw UnboundedOperand("midpoint of unbounded interval");
    double m = 0.5 * lo_ + 0.5 * hi_;
    return std::clamp(m, lo_, hi_);
}

double Interval::rad() const {
    double m = mid();
    return round_up(std::max(m - lo_, hi_ - m));
}

double Interval::width() const { return round_up(hi_ - lo_); }
double Interval::mag() const { return std::max(std::fabs(lo_), std::fabs(hi_)); }
double Interval::mig() const { return contains_zero() ? 0.0 : std::min(std::fabs(lo_), std::fabs(hi_)); }

Interval& Interval::operator+=(const Interval& o) { return *this = *this + o; }
Interval& Interval::operator-=(const Interval& o) { return *this = *this - o; }
Interval& Interval::operator*=(const Interval& o) { return *this = *this * o; }
Interval& Interval::operator/=(const Interval& o) { return *this = *this / o; }

bool operator==(const Interval& a, const Interval& b) { return a.lo() == b.lo() && a.hi() == b.hi(); }

Interval operator-(const Interval& a) { return {-a.hi(), -a.lo()}; }

Interval operator+(const Interval& a, const Interval& b) {
    require_bounded(a);
    require_bounded(b);
    return {sum_bounds(a.lo(), b.lo()).first, sum_bounds(a.hi(), b.hi()).second};
}

Interval operator-(const Interval& a, const Interval& b) { return a + (-b); }

Interval operator*(const Interval& a, const Interval& b) {
    require_bounded(a);
    require_bounded(b);
    if (a.is_point() && b.is_point()) {
        auto [l, h] = prod_bounds(a.lo(), b.lo());
        return {l, h};
    }
    std::array<std::pair<double, double>, 4> p = {prod_bounds(a.lo(), b.lo()), prod_bounds(a.lo(), b.hi()),
                                                  prod_bounds(a.hi(), b.lo()), prod_bounds(a.hi(), b.hi())};
    double lo = p[0].first, hi = p[0].second;
    for (const auto& [l, h] : p) {
        lo = std::min(lo, l);
        hi = std::max(hi, h);
    }
    return {lo, hi};
}

Interval operator/(const Interval& a, const Interval& b) {
    require_bounded(a);
    require_bounded(b);
    if (b.contains_zero()) throw DivisionByZeroInterval("divisor interval contains 0");
    std::array<std::pair<double, double>, 4> q = {quot_bounds(a.lo(), b.lo()), quot_bounds(a.lo(), b.hi()),
                                                  quot_bounds(a.hi(), b.lo()), quot_bounds(a.hi(), b.hi())};
    double lo = q[0].first, hi = q[0].second;
    for (const auto& [l, h] : q) {
        lo = std::min(lo, l);
        hi = std::max(hi, h);
    }
    return {lo, hi};
}

Interval iv_sqrt(const Interval& a) {
    if (a.hi() < 0.0) throw DomainError("sqrt of a negative interval");
    if (std::isinf(a.hi())) throw UnboundedOperand("sqrt of unbounded interval");
    double lo = std::max(a.lo(), 0.0);
    return {sqrt_bounds(lo).first, sqrt_bounds(a.hi()).second};
}

Interval iv_abs(const Interval& a) {
    if (a.lo() >= 0.0) return a;
    if (a.hi() <= 0.0) return -a;
    return {0.0, std::max(-a.lo(), a.hi())};
}

Interval sqr(const Interval& a) {
    Interval m = iv_abs(a);
    require_bounded(m);
    return {prod_bounds(m.lo(), m.lo()).first, prod_bounds(m.hi(), m.hi()).second};
}

Interval pow(const Interval& a, int k) {
    if (k < 0) return Interval(1.0) / pow(a, -k);
    if (k == 0) return Interval(1.0);
    if (k % 2 == 0) {
        Interval s = sqr(a);
        return k == 2 ? s : pow(s, k / 2);
    }
    Interval r = a;
    for (int i = 1; i < k; ++i) r = r * a;
    if (a.lo() >= 0.0) return {std::max(r.lo(), 0.0), r.hi()};
    return r;
}

Interval hull(const Interval& a, const Interval& b) { return {std::min(a.lo(), b.lo()), std::max(a.hi(), b.hi())}; }

Interval intersect(const Interval& a, const Interval& b) {
    double lo = std::max(a.lo(), b.lo());
    double hi = std::min(a.hi(), b.hi());
    if (lo > hi) throw InvalidInterval("empty intersection");
    return {lo, hi};
}

Interval max(const Interval& a, const Interval& b) { return {std::max(a.lo(), b.lo()), std::max(a.hi(), b.hi())}; }
Interval min(const Interval& a, const Interval& b) { return {std::min(a.lo(), b.lo()), std::min(a.hi(), b.hi())}; }

Interval exp(const Interval& a) {
    require_bounded(a);
    Interval r = libm_monotone(static_cast<double (*)(double)>(std::exp), a, true);
    return {std::max(0.0, r.lo()), r.hi()};
}

Interval log(const Interval& a) {
    require_bounded(a);
    if (a.lo() <= 0.0) throw DomainError("log of an interval reaching 0");
    return libm_monotone(static_cast<double (*)(double)>(std::log), a, true);
}

Interval tanh(const Interval& a) {
    require_bounded(a);
    Interval r = libm_monotone(static_cast<double (*)(double)>(std::tanh), a, true);
    return {std::max(-1.0, r.lo()), std::min(1.0, r.hi())};
}

Interval sinh(const Interval& a) {
    require_bounded(a);
    return libm_monotone(static_cast<double (*)(double)>(std::sinh), a, true);
}

Interval cosh(const Interval& a) {
    require_bounded(a);
    double clo = a.contains_zero() ? 1.0 : std::cosh(a.mig());
    double chi = std::cosh(a.mag());
    return {std::max(1.0, step_down(clo, kLibmUlps)), step_up(chi, kLibmUlps)};
}

Interval atan(const Interval& a) {
    require_bounded(a);
    return libm_monotone(static_cast<double (*)(double)>(std::atan), a, true);
}

namespace {

// Range of cos over [lo, hi] shifted by `phase` multiples of pi/2 for extrema
// detection: extrema of cos sit at k*pi, of sin at pi/2 + k*pi.
Interval trig_range(const Interval& a, double (*f)(double), double extremum_offset) {
    require_bounded(a);
    if (a.width() >= 6.28) return {-1.0, 1.0};
    double flo = f(a.lo());
    double fhi = f(a.hi());
    double lo = std::min(flo, fhi);
    double hi = std::max(flo, fhi);
    lo = step_down(lo, kLibmUlps);
    hi = step_up(hi, kLibmUlps);
    // Extremum k sits at offset + k*pi; enlarge the search range to absorb
    // rounding in the division by pi.
    double tlo = (a.lo() - extremum_offset) / M_PI;
    double thi = (a.hi() - extremum_offset) / M_PI;
    double slack = 1e-12 * std::max(1.0, std::max(std::fabs(tlo), std::fabs(thi)));
    long long kmin = static_cast<long long>(std::ceil(tlo - slack));
    long long kmax = static_cast<long long>(std::floor(thi + slack));
    for (long long k = kmin; k <= kmax; ++k) {
        if ((k % 2 + 2) % 2 == 0)
            hi = 1.0;
        else
            lo = -1.0;
    }
    return {std::max(-1.0, lo), std::min(1.0, hi)};
}

}  // namespace

Interval cos(const Interval& a) { return trig_range(a, static_cast<double (*)(double)>(std::cos), 0.0); }
Interval sin(const Interval& a) { return trig_range(a, static_cast<double (*)(double)>(std::sin), M_PI / 2); }

Interval pi() { return {M_PI, round_up(M_PI)}; }
Interval two_pi() { return {2.0 * M_PI, round_up(2.0 * M_PI)}; }

namespace {

// Canonical digit string and decimal exponent: value = 0.d1d2d3... * 10^exp.
struct DecimalDigits {
    std::string digits;
    long exponent = 0;
};

DecimalDigits normalize_decimal(const std::string& text) {
    std::string s = text;
    if (!s.empty() && (s[0] == '+' || s[0] == '-')) s.erase(0, 1);
    long exp10 = 0;
    auto epos = s.find_first_of("eE");
    if (epos != std::string::npos) {
        exp10 = std::strtol(s.c_str() + epos + 1, nullptr, 10);
        s.resize(epos);
    }
    std::string digits;
    long point = -1;
    for (char c : s) {
        if (c == '.') {
            point = static_cast<long>(digits.size());
        } else if (c >= '0' && c <= '9') {
            digits.push_back(c);
        } else {
            throw FormatError("bad decimal literal '" + text + "'");
        }
    }
    if (point < 0) point = static_cast<long>(digits.size());
    size_t first = digits.find_first_not_of('0');
    if (first == std::string::npos) return {"", 0};
    long e = point - static_cast<long>(first) + exp10;
    digits = digits.substr(first);
    while (!digits.empty() && digits.back() == '0') digits.pop_back();
    return {digits, e};
}

bool decimal_is_exact(const std::string& text, double x) {
    if (x == 0.0) return normalize_decimal(text).digits.empty();
    std::array<char, 1200> buf{};
    std::snprintf(buf.data(), buf.size(), "%.1100e", std::fabs(x));
    return normalize_decimal(text).digits == normalize_decimal(buf.data()).digits &&
           normalize_decimal(text).exponent == normalize_decimal(buf.data()).exponent;
}

bool is_hex_literal(const std::string& t) {
    size_t i = (!t.empty() && (t[0] == '-' || t[0] == '+')) ? 1 : 0;
    return t.size() > i + 1 && t[i] == '0' && (t[i + 1] == 'x' || t[i + 1] == 'X');
}

}  // namespace

double parse_double_exact(const std::string& text) {
    if (text == "inf" || text == "+inf") return kInf;
    if (text == "-inf") return -kInf;
    char* end = nullptr;
    double x = std::strtod(text.c_str(), &end);
    if (end == text.c_str() || *end != '\0') throw FormatError("not a number: '" + text + "'");
    if (std::isnan(x)) throw FormatError("NaN literal");
    return x;
}

Interval parse_interval_literal(const std::string& text) {
    double x = parse_double_exact(text);
    if (std::isinf(x)) throw FormatError("infinite literal where a bounded value is required");
    if (is_hex_literal(text) || decimal_is_exact(text, x)) return Interval(x);
    return {round_down(x), round_up(x)};
}

std::string shortest_decimal(double x) {
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    std::array<char, 64> buf{};
    auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x);
    return {buf.data(), res.ptr};
}

std::string hex_float(double x) {
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    std::array<char, 64> buf{};
    auto res = std::to_chars(buf.data(), buf.data() + buf.size(), std::fabs(x), std::chars_format::hex);
    std::string body(buf.data(), res.ptr);
    return (std::signbit(x) ? "-0x" : "0x") + body;
}

Interval ComplexBox::to_interval() const {
    if (!is_real()) throw DomainError("complex box with nonzero imaginary part");
    return re;
}

double ComplexBox::rad() const {
    std::complex<double> m = mid();
    double dx = std::max(m.real() - re.lo(), re.hi() - m.real());
    double dy = std::max(m.imag() - im.lo(), im.hi() - m.imag());
    return iv_sqrt(sqr(Interval(round_up(dx))) + sqr(Interval(round_up(dy)))).hi();
}

bool operator==(const ComplexBox& a, const ComplexBox& b) { return a.re == b.re && a.im == b.im; }
ComplexBox operator-(const ComplexBox& a) { return {-a.re, -a.im}; }
ComplexBox operator+(const ComplexBox& a, const ComplexBox& b) { return {a.re + b.re, a.im + b.im}; }
ComplexBox operator-(const ComplexBox& a, const ComplexBox& b) { return {a.re - b.re, a.im - b.im}; }

ComplexBox operator*(const ComplexBox& a, const ComplexBox& b) {
    if (a.is_real() && b.is_real()) return {a.re * b.re, Interval(0.0)};
    if (b.is_real()) return {a.re * b.re, a.im * b.re};
    if (a.is_real()) return {a.re * b.re, a.re * b.im};
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}

ComplexBox operator/(const ComplexBox& a, const ComplexBox& b) {
    if (b.is_real()) return {a.re / b.re, a.im / b.re};
    Interval d = norm_sq(b);
    ComplexBox n = a * conj(b);
    return {n.re / d, n.im / d};
}

ComplexBox conj(const ComplexBox& a) { return {a.re, -a.im}; }
Interval norm_sq(const ComplexBox& a) { return sqr(a.re) + sqr(a.im); }

Interval abs(const ComplexBox& a) {
    if (a.is_real()) return iv_abs(a.re);
    return iv_sqrt(norm_sq(a));
}

ComplexBox hull(const ComplexBox& a, const ComplexBox& b) { return {hull(a.re, b.re), hull(a.im, b.im)}; }
ComplexBox expi(const Interval& theta) { return {cos(theta), sin(theta)}; }

}  // namespace spectral
