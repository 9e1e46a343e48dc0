#include "spectral/oracle.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>

#include "spectral/errors.hpp"

namespace spectral::oracle {

namespace {

std::vector<std::complex<double>> sorted(std::vector<std::complex<double>> v) {
    std::sort(v.begin(), v.end(), [](auto a, auto b) {
        return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    });
    return v;
}

}  // namespace

std::vector<std::complex<double>> dense_eigs(const Eigen::MatrixXcd& a) {
    if (a.rows() != a.cols()) throw DimensionMismatch("dense_eigs needs a square matrix");
    if (!a.allFinite()) throw InvalidParameter("dense_eigs needs finite entries");
    std::vector<std::complex<double>> out;
    if (a.rows() == 0) return out;
    if (a.isApprox(a.adjoint(), 1e-14)) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(a, Eigen::EigenvaluesOnly);
        if (es.info() != Eigen::Success) throw ConvergenceFailure("symmetric eigensolver did not converge");
        for (int i = 0; i < es.eigenvalues().size(); ++i) out.emplace_back(es.eigenvalues()[i], 0.0);
        return sorted(out);
    }
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(a, false);
    if (es.info() != Eigen::Success) throw ConvergenceFailure("eigensolver did not converge");
    for (int i = 0; i < es.eigenvalues().size(); ++i) out.push_back(es.eigenvalues()[i]);
    return sorted(out);
}

std::vector<std::complex<double>> dense_eigs(const Eigen::MatrixXd& a) {
    return dense_eigs(Eigen::MatrixXcd(a.cast<std::complex<double>>()));
}

double sigma_max(const Eigen::MatrixXcd& a) {
    if (a.size() == 0) return 0.0;
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a);
    return svd.singularValues()(0);
}

double quadrature(const std::function<double(double)>& f, double a, double b, double tol) {
    double err = 0.0;
    double v = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 15, tol, &err);
    if (!std::isfinite(v) || err > tol * std::max(1.0, std::fabs(v)) * 10.0)
        throw ToleranceNotMet("adaptive quadrature error estimate " + std::to_string(err));
    return v;
}

double quadrature_L2(const std::function<double(double)>& f, double R, int m, double tol) {
    if (m != 1 && m != 2) throw InvalidParameter("dimension must be 1 or 2");
    auto g = [&](double s) {
        double v = f(s);
        return m == 1 ? v * v / M_PI : s * v * v / (2.0 * M_PI);
    };
    return quadrature(g, 0.0, R, tol);
}

std::complex<double> bessel_k0(std::complex<double> z, double h) {
    if (!(z.real() > 0.0)) throw InvalidParameter("bessel_k0 needs Re z > 0");
    // integrand bounded by exp(-Re z cosh t)
    double T = std::acosh(std::max(1.0, 60.0 / z.real()));
    std::complex<double> acc = 0.5 * std::exp(-z);
    long n = static_cast<long>(std::ceil(T / h));
    for (long k = 1; k <= n; ++k) acc += std::exp(-z * std::cosh(k * h));
    return acc * h;
}

double sh_resolvent_kernel_2d(double sigma, double r) {
    double a = std::sqrt(-1.0 + std::sqrt(1.0 + sigma)) / 2.0;
    std::complex<double> b(std::sqrt(2.0) * a, -std::sqrt(sigma) / (2.0 * std::sqrt(2.0) * a));
    if (r == 0.0) return std::atan(std::sqrt(sigma) / (-1.0 + std::sqrt(1.0 + sigma))) / std::sqrt(sigma);
    // (K0(b r) - K0(conj(b) r)) / (2i) is the imaginary part of K0(b r)
    return bessel_k0(b * r).imag() / std::sqrt(sigma);
}

int count_in_disk(const std::vector<std::complex<double>>& eigs, std::complex<double> c, double r, double slack) {
    return static_cast<int>(std::count_if(eigs.begin(), eigs.end(),
                                          [&](auto z) { return std::abs(z - c) <= r * (1.0 + slack) + slack; }));
}

}  // namespace spectral::oracle
