#include "spectral/imatrix.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace spectral {

namespace {

void require_same_shape(const IMatrix& a, const IMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) throw DimensionMismatch("matrix shapes differ");
}

// Above this many scalar products the A^*A refinement of op_norm2_bound is
// skipped in favour of the O(n^2) bounds.
constexpr double kGramBudget = 6e7;

bool is_zero(const ComplexBox& z) {
    return z.re.lo() == 0.0 && z.re.hi() == 0.0 && z.im.lo() == 0.0 && z.im.hi() == 0.0;
}

}  // namespace

IMatrix::IMatrix(size_t rows, size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

IMatrix::IMatrix(const Eigen::MatrixXcd& point)
    : rows_(static_cast<size_t>(point.rows())), cols_(static_cast<size_t>(point.cols())), data_(rows_ * cols_) {
    for (size_t i = 0; i < rows_; ++i)
        for (size_t j = 0; j < cols_; ++j) (*this)(i, j) = ComplexBox(point(i, j));
}

IMatrix::IMatrix(const Eigen::MatrixXd& point)
    : rows_(static_cast<size_t>(point.rows())), cols_(static_cast<size_t>(point.cols())), data_(rows_ * cols_) {
    for (size_t i = 0; i < rows_; ++i)
        for (size_t j = 0; j < cols_; ++j) (*this)(i, j) = ComplexBox(point(i, j));
}

IMatrix IMatrix::identity(size_t n) {
    IMatrix m(n, n);
    for (size_t i = 0; i < n; ++i) m(i, i) = ComplexBox(1.0);
    return m;
}

Eigen::MatrixXcd IMatrix::mid() const {
    Eigen::MatrixXcd m(rows_, cols_);
    for (size_t i = 0; i < rows_; ++i)
        for (size_t j = 0; j < cols_; ++j) m(i, j) = (*this)(i, j).mid();
    return m;
}

IMatrix IMatrix::block(size_t r0, size_t c0, size_t nr, size_t nc) const {
    if (r0 + nr > rows_ || c0 + nc > cols_) throw DimensionMismatch("block out of range");
    IMatrix b(nr, nc);
    for (size_t i = 0; i < nr; ++i)
        for (size_t j = 0; j < nc; ++j) b(i, j) = (*this)(r0 + i, c0 + j);
    return b;
}

IMatrix IMatrix::adjoint() const {
    IMatrix t(cols_, rows_);
    for (size_t i = 0; i < rows_; ++i)
        for (size_t j = 0; j < cols_; ++j) t(j, i) = conj((*this)(i, j));
    return t;
}

bool IMatrix::is_real() const {
    return std::all_of(data_.begin(), data_.end(), [](const ComplexBox& z) { return z.is_real(); });
}

double IMatrix::max_rad() const {
    double r = 0.0;
    for (const auto& z : data_) r = std::max({r, z.re.rad(), z.im.rad()});
    return r;
}

namespace {

// Larger products go through midpoint-radius form and the floating point
// product, with a priori bounds on the rounding error of every inner product:
// |fl(x . y) - x . y| <= gamma_n |x| . |y| + n eta in round-to-nearest.
constexpr double kMidRadCost = 2e6;

struct MidRad {
    Eigen::MatrixXd m, r;
};

bool all_finite(const IMatrix& a) {
    for (size_t i = 0; i < a.rows(); ++i)
        for (size_t j = 0; j < a.cols(); ++j) {
            const ComplexBox& z = a(i, j);
            if (!std::isfinite(z.re.lo()) || !std::isfinite(z.re.hi()) || !std::isfinite(z.im.lo()) ||
                !std::isfinite(z.im.hi()))
                return false;
        }
    return true;
}

MidRad split(const IMatrix& a, bool imag) {
    MidRad out{Eigen::MatrixXd(a.rows(), a.cols()), Eigen::MatrixXd(a.rows(), a.cols())};
    for (size_t i = 0; i < a.rows(); ++i)
        for (size_t j = 0; j < a.cols(); ++j) {
            const Interval& x = imag ? a(i, j).im : a(i, j).re;
            out.m(i, j) = x.mid();
            // point entries get radius 0 and tiny radii the smallest normal
            // number; denormal operands slow the product down badly
            out.r(i, j) = x.lo() == x.hi() ? 0.0 : std::max(x.rad(), std::numeric_limits<double>::min());
        }
    return out;
}

MidRad midrad_mul(const MidRad& a, const MidRad& b) {
    const double n = static_cast<double>(a.m.cols());
    const double u = std::ldexp(1.0, -53);
    // underflow: n * eta with eta the smallest denormal stays below the
    // smallest normal number for any realistic n
    const double tiny = std::numeric_limits<double>::min();
    const double k = n + 4.0;
    const double gamma = k * u / (1.0 - k * u);
    Eigen::MatrixXd am = a.m.cwiseAbs(), bm = b.m.cwiseAbs();
    MidRad c{a.m * b.m, Eigen::MatrixXd()};
    Eigen::MatrixXd P = am * bm;
    Eigen::MatrixXd Q = a.r * (bm + b.r) + am * b.r;
    const double s = 1.0 / (1.0 - gamma);
    c.r = ((gamma * s) * (P.array() + tiny) + s * (Q.array() + 3.0 * tiny) + tiny) * (1.0 + 8.0 * u);
    return c;
}

// x - y or x + y for enclosures in midpoint-radius form
MidRad combine(const MidRad& x, const MidRad& y, double sign) {
    const double u = std::ldexp(1.0, -53);
    MidRad c{x.m + sign * y.m, Eigen::MatrixXd()};
    c.r = (x.r + y.r + u * c.m.cwiseAbs()).array() * (1.0 + 4.0 * u);
    return c;
}

Interval to_interval(double m, double r) { return Interval(round_down(m - r), round_up(m + r)); }

IMatrix mat_mul_midrad(const IMatrix& a, const IMatrix& b, bool real) {
    IMatrix c(a.rows(), b.cols());
    MidRad ar = split(a, false), br = split(b, false);
    if (real) {
        MidRad p = midrad_mul(ar, br);
        for (size_t i = 0; i < c.rows(); ++i)
            for (size_t j = 0; j < c.cols(); ++j) c(i, j) = ComplexBox(to_interval(p.m(i, j), p.r(i, j)));
        return c;
    }
    MidRad ai = split(a, true), bi = split(b, true);
    MidRad re = combine(midrad_mul(ar, br), midrad_mul(ai, bi), -1.0);
    MidRad im = combine(midrad_mul(ar, bi), midrad_mul(ai, br), 1.0);
    for (size_t i = 0; i < c.rows(); ++i)
        for (size_t j = 0; j < c.cols(); ++j)
            c(i, j) = ComplexBox(to_interval(re.m(i, j), re.r(i, j)), to_interval(im.m(i, j), im.r(i, j)));
    return c;
}

}  // namespace

IMatrix mat_mul(const IMatrix& a, const IMatrix& b) {
    if (a.cols() != b.rows()) throw DimensionMismatch("inner dimensions differ");
    const double cost = static_cast<double>(a.rows()) * static_cast<double>(a.cols()) * static_cast<double>(b.cols());
    const bool real_in = a.is_real() && b.is_real();
    if (cost > kMidRadCost && all_finite(a) && all_finite(b)) return mat_mul_midrad(a, b, real_in);
    IMatrix c(a.rows(), b.cols());
    const bool real = real_in;
    for (size_t i = 0; i < a.rows(); ++i) {
        for (size_t j = 0; j < b.cols(); ++j) {
            if (real) {
                Interval s(0.0);
                for (size_t k = 0; k < a.cols(); ++k) {
                    const Interval& x = a(i, k).re;
                    const Interval& y = b(k, j).re;
                    if ((x.lo() == 0.0 && x.hi() == 0.0) || (y.lo() == 0.0 && y.hi() == 0.0)) continue;
                    s += x * y;
                }
                c(i, j) = ComplexBox(s);
            } else {
                ComplexBox s(0.0);
                for (size_t k = 0; k < a.cols(); ++k) {
                    const ComplexBox& x = a(i, k);
                    const ComplexBox& y = b(k, j);
                    if (is_zero(x) || is_zero(y)) continue;
                    s = s + x * y;
                }
                c(i, j) = s;
            }
        }
    }
    return c;
}

IMatrix operator*(const IMatrix& a, const IMatrix& b) { return mat_mul(a, b); }

IMatrix operator+(const IMatrix& a, const IMatrix& b) {
    require_same_shape(a, b);
    IMatrix c(a.rows(), a.cols());
    for (size_t i = 0; i < a.rows(); ++i)
        for (size_t j = 0; j < a.cols(); ++j) c(i, j) = a(i, j) + b(i, j);
    return c;
}

IMatrix operator-(const IMatrix& a, const IMatrix& b) {
    require_same_shape(a, b);
    IMatrix c(a.rows(), a.cols());
    for (size_t i = 0; i < a.rows(); ++i)
        for (size_t j = 0; j < a.cols(); ++j) c(i, j) = a(i, j) - b(i, j);
    return c;
}

IMatrix scale_rows(const IMatrix& a, const std::vector<ComplexBox>& d) {
    if (d.size() != a.rows()) throw DimensionMismatch("row scaling length");
    IMatrix c(a.rows(), a.cols());
    for (size_t i = 0; i < a.rows(); ++i)
        for (size_t j = 0; j < a.cols(); ++j) c(i, j) = d[i] * a(i, j);
    return c;
}

IMatrix scale_cols(const IMatrix& a, const std::vector<ComplexBox>& d) {
    if (d.size() != a.cols()) throw DimensionMismatch("column scaling length");
    IMatrix c(a.rows(), a.cols());
    for (size_t i = 0; i < a.rows(); ++i)
        for (size_t j = 0; j < a.cols(); ++j) c(i, j) = a(i, j) * d[j];
    return c;
}

Interval norm1_bound(const IMatrix& a) {
    double best = 0.0;
    for (size_t j = 0; j < a.cols(); ++j) {
        Interval s(0.0);
        for (size_t i = 0; i < a.rows(); ++i) s += Interval(abs(a(i, j)).hi());
        best = std::max(best, s.hi());
    }
    return {0.0, best};
}

Interval norminf_bound(const IMatrix& a) {
    double best = 0.0;
    for (size_t i = 0; i < a.rows(); ++i) {
        Interval s(0.0);
        for (size_t j = 0; j < a.cols(); ++j) s += Interval(abs(a(i, j)).hi());
        best = std::max(best, s.hi());
    }
    return {0.0, best};
}

Interval op_norm2_bound(const IMatrix& a) {
    if (a.rows() == 0 || a.cols() == 0) return Interval(0.0);
    // Entry magnitudes, used by both cheap bounds.
    std::vector<double> mag(a.rows() * a.cols());
    for (size_t i = 0; i < a.rows(); ++i)
        for (size_t j = 0; j < a.cols(); ++j) mag[i * a.cols() + j] = abs(a(i, j)).hi();

    double bound = iv_sqrt(norm1_bound(a) * norminf_bound(a)).hi();

    // Row sums of |A|^T |A| bound those of |A^* A| and cost O(n^2).
    std::vector<Interval> r(a.rows(), Interval(0.0));
    for (size_t i = 0; i < a.rows(); ++i)
        for (size_t j = 0; j < a.cols(); ++j) r[i] += Interval(mag[i * a.cols() + j]);
    double gram_abs = 0.0;
    for (size_t j = 0; j < a.cols(); ++j) {
        Interval s(0.0);
        for (size_t i = 0; i < a.rows(); ++i) s += Interval(mag[i * a.cols() + j]) * Interval(r[i].hi());
        gram_abs = std::max(gram_abs, s.hi());
    }
    bound = std::min(bound, iv_sqrt(Interval(gram_abs)).hi());

    // Exact interval Gram matrix exploits cancellation (near-unitary inputs).
    double cost = static_cast<double>(a.cols()) * static_cast<double>(a.cols()) * static_cast<double>(a.rows());
    if (cost <= kGramBudget) {
        IMatrix g = a.rows() >= a.cols() ? mat_mul(a.adjoint(), a) : mat_mul(a, a.adjoint());
        double best = 0.0;
        for (size_t i = 0; i < g.rows(); ++i) {
            Interval s(0.0);
            for (size_t j = 0; j < g.cols(); ++j) s += Interval(abs(g(i, j)).hi());
            best = std::max(best, s.hi());
        }
        bound = std::min(bound, iv_sqrt(Interval(best)).hi());
    }
    return {0.0, bound};
}

InverseEnclosure verified_inverse(const IMatrix& a) {
    if (a.rows() != a.cols()) throw DimensionMismatch("inverse of a non-square matrix");
    const size_t n = a.rows();
    const bool real = a.is_real();
    IMatrix r;
    if (real) {
        Eigen::MatrixXd am = a.mid().real();
        Eigen::FullPivLU<Eigen::MatrixXd> lu(am);
        if (!lu.isInvertible()) throw SingularityUnverified("midpoint matrix is numerically singular");
        Eigen::MatrixXd rm = lu.inverse();
        if (!rm.allFinite()) throw SingularityUnverified("approximate inverse is not finite");
        r = IMatrix(rm);
    } else {
        Eigen::FullPivLU<Eigen::MatrixXcd> lu(a.mid());
        if (!lu.isInvertible()) throw SingularityUnverified("midpoint matrix is numerically singular");
        Eigen::MatrixXcd rm = lu.inverse();
        if (!rm.allFinite()) throw SingularityUnverified("approximate inverse is not finite");
        r = IMatrix(rm);
    }
    IMatrix e = IMatrix::identity(n) - mat_mul(r, a);
    Interval defect = op_norm2_bound(e);
    if (!(defect.hi() < 1.0))
        throw SingularityUnverified("defect bound ||I - RA|| = " + shortest_decimal(defect.hi()) + " is not < 1");
    Interval rn = op_norm2_bound(r);
    Interval d(defect.hi());
    double infl = (d / (Interval(1.0) - d) * Interval(rn.hi())).hi();
    IMatrix inv(n, n);
    Interval pad(-infl, infl);
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) inv(i, j) = real ? ComplexBox(r(i, j).re + pad) : ComplexBox(r(i, j).re + pad, r(i, j).im + pad);
    return {inv, defect, infl};
}

}  // namespace spectral
