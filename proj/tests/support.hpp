#pragma once

// Shared helpers for the unit tests and the acceptance binary.

#include <complex>
#include <random>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "spectral/imatrix.hpp"
#include "spectral/interval.hpp"

namespace testsupport {

using HP = boost::multiprecision::cpp_bin_float_50;
using spectral::ComplexBox;
using spectral::IMatrix;
using spectral::Interval;

inline bool holds(const Interval& x, const HP& v) { return HP(x.lo()) <= v && v <= HP(x.hi()); }

// Random interval with endpoints spread over many binades.
inline Interval random_interval(std::mt19937_64& rng, double scale_exp = 8.0) {
    std::uniform_real_distribution<double> u(-1.0, 1.0), e(-scale_exp, scale_exp), w(0.0, 1.0);
    double c = u(rng) * std::exp2(e(rng));
    double r = w(rng) < 0.2 ? 0.0 : w(rng) * std::fabs(c) * std::exp2(e(rng) / 4.0 - 2.0);
    return Interval(c - r, c + r);
}

inline double sample(std::mt19937_64& rng, const Interval& x) {
    std::uniform_real_distribution<double> t(0.0, 1.0);
    double p = t(rng);
    if (p < 0.1) return x.lo();
    if (p < 0.2) return x.hi();
    double v = x.lo() + (x.hi() - x.lo()) * t(rng);
    return std::min(std::max(v, x.lo()), x.hi());
}

inline ComplexBox random_box(std::mt19937_64& rng) { return ComplexBox(random_interval(rng), random_interval(rng)); }

struct TrialStats {
    long trials = 0;
    long violations = 0;
    std::string first_failure;
    void check(bool ok, const std::string& what) {
        ++trials;
        if (!ok && violations++ == 0) first_failure = what;
    }
};

// One randomized containment trial per call, cycling through the scalar,
// complex and matrix operations. Exact reference values in 50-digit binary
// floating point.
inline void containment_trial(std::mt19937_64& rng, long k, TrialStats& st) {
    using namespace spectral;
    Interval a = random_interval(rng), b = random_interval(rng);
    HP x = sample(rng, a), y = sample(rng, b);
    switch (k % 16) {
        case 0: st.check(holds(a + b, x + y), "add"); break;
        case 1: st.check(holds(a - b, x - y), "sub"); break;
        case 2: st.check(holds(a * b, x * y), "mul"); break;
        case 3:
            if (!b.contains_zero()) st.check(holds(a / b, x / y), "div");
            else st.check(true, "");
            break;
        case 4: {
            Interval p = iv_abs(a);
            st.check(holds(iv_sqrt(p), boost::multiprecision::sqrt(HP(sample(rng, p)))), "sqrt");
            break;
        }
        case 5: {
            Interval s = Interval(a.lo() / 64.0, a.hi() / 64.0);
            st.check(holds(exp(s), boost::multiprecision::exp(HP(sample(rng, s)))), "exp");
            break;
        }
        case 6: {
            Interval p = iv_abs(a) + Interval(1e-3);
            st.check(holds(log(p), boost::multiprecision::log(HP(sample(rng, p)))), "log");
            break;
        }
        case 7: {
            Interval s = Interval(a.lo() / 16.0, a.hi() / 16.0);
            HP v = sample(rng, s);
            st.check(holds(tanh(s), boost::multiprecision::tanh(v)) && holds(sinh(s), boost::multiprecision::sinh(v)) &&
                         holds(cosh(s), boost::multiprecision::cosh(v)),
                     "hyperbolic");
            break;
        }
        case 8: {
            HP v = x;
            st.check(holds(cos(a), boost::multiprecision::cos(v)) && holds(sin(a), boost::multiprecision::sin(v)) &&
                         holds(atan(a), boost::multiprecision::atan(v)),
                     "trig");
            break;
        }
        case 9: {
            int n = static_cast<int>(rng() % 6);
            Interval s = Interval(a.lo() / 64.0, a.hi() / 64.0);
            HP v = sample(rng, s);
            st.check(holds(pow(s, n), boost::multiprecision::pow(v, n)) && holds(sqr(s), v * v), "pow");
            break;
        }
        case 10: case 11: {
            ComplexBox z = random_box(rng), w = random_box(rng);
            HP zr = sample(rng, z.re), zi = sample(rng, z.im), wr = sample(rng, w.re), wi = sample(rng, w.im);
            ComplexBox p = z * w, s = z + w, dfl = z - w;
            bool ok = holds(p.re, zr * wr - zi * wi) && holds(p.im, zr * wi + zi * wr) && holds(s.re, zr + wr) &&
                      holds(s.im, zi + wi) && holds(dfl.re, zr - wr) && holds(dfl.im, zi - wi) &&
                      holds(abs(z), boost::multiprecision::sqrt(zr * zr + zi * zi));
            st.check(ok, "complex mul/add/abs");
            break;
        }
        case 12: {
            ComplexBox z = random_box(rng), w = random_box(rng);
            if (abs(w).lo() > 0.0 && !(w.re.contains_zero() && w.im.contains_zero())) {
                HP zr = sample(rng, z.re), zi = sample(rng, z.im), wr = sample(rng, w.re), wi = sample(rng, w.im);
                HP den = wr * wr + wi * wi;
                ComplexBox q;
                try {
                    q = z / w;
                } catch (const Error&) {
                    st.check(true, "");
                    break;
                }
                st.check(holds(q.re, (zr * wr + zi * wi) / den) && holds(q.im, (zi * wr - zr * wi) / den), "complex div");
            } else {
                st.check(true, "");
            }
            break;
        }
        case 13: case 14: {
            // 3x3 matrix product
            IMatrix A(3, 3), B(3, 3);
            std::vector<HP> ar(9), ai(9), br(9), bi(9);
            for (int i = 0; i < 9; ++i) {
                A(i / 3, i % 3) = random_box(rng);
                B(i / 3, i % 3) = random_box(rng);
                ar[i] = sample(rng, A(i / 3, i % 3).re);
                ai[i] = sample(rng, A(i / 3, i % 3).im);
                br[i] = sample(rng, B(i / 3, i % 3).re);
                bi[i] = sample(rng, B(i / 3, i % 3).im);
            }
            IMatrix C = A * B;
            bool ok = true;
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j) {
                    HP cr = 0, ci = 0;
                    for (int l = 0; l < 3; ++l) {
                        cr += ar[i * 3 + l] * br[l * 3 + j] - ai[i * 3 + l] * bi[l * 3 + j];
                        ci += ar[i * 3 + l] * bi[l * 3 + j] + ai[i * 3 + l] * br[l * 3 + j];
                    }
                    ok = ok && holds(C(i, j).re, cr) && holds(C(i, j).im, ci);
                }
            st.check(ok, "matrix product");
            break;
        }
        default: {
            // matrix norm bounds against the exact 1 and inf norms of a sample
            IMatrix A(3, 3);
            std::vector<HP> mag(9);
            for (int i = 0; i < 9; ++i) {
                A(i / 3, i % 3) = random_box(rng);
                HP r = sample(rng, A(i / 3, i % 3).re), im = sample(rng, A(i / 3, i % 3).im);
                mag[i] = boost::multiprecision::sqrt(r * r + im * im);
            }
            HP n1 = 0, ninf = 0;
            for (int i = 0; i < 3; ++i) {
                HP c = 0, r = 0;
                for (int j = 0; j < 3; ++j) {
                    c += mag[j * 3 + i];
                    r += mag[i * 3 + j];
                }
                n1 = std::max(n1, c);
                ninf = std::max(ninf, r);
            }
            st.check(HP(norm1_bound(A).hi()) >= n1 && HP(norminf_bound(A).hi()) >= ninf, "matrix norms");
            break;
        }
    }
}

}  // namespace testsupport
