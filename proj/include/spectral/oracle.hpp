#pragma once

// Non-rigorous reference computations. Nothing here may feed a certified
// result; the certified modules do not include this header.

#include <Eigen/Dense>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <complex>
#include <functional>
#include <vector>

namespace spectral::oracle {

using HP = boost::multiprecision::cpp_bin_float_50;

// Eigenvalues sorted by (real, imag). Hermitian inputs take the symmetric path.
std::vector<std::complex<double>> dense_eigs(const Eigen::MatrixXcd& a);
std::vector<std::complex<double>> dense_eigs(const Eigen::MatrixXd& a);
double sigma_max(const Eigen::MatrixXcd& a);

// Integral of f(s)^2 against the radial measure of R^m over |2 pi xi| <= R
// (ds/pi for m = 1, s ds/(2 pi) for m = 2). Throws ToleranceNotMet when the
// adaptive error estimate stays above tol relative to the value.
double quadrature_L2(const std::function<double(double)>& f, double R, int m, double tol = 1e-12);
// Plain adaptive integral of f over [a, b].
double quadrature(const std::function<double(double)>& f, double a, double b, double tol = 1e-12);

// Modified Bessel K0 for Re z > 0 from the integral over cosh, trapezoid rule
// with step h. Halving h is the intended convergence check.
std::complex<double> bessel_k0(std::complex<double> z, double h = 2e-3);

// Resolvent kernel of the 2D Swift-Hohenberg symbol at distance r from the
// origin, sigma = mu + lambda > 0.
double sh_resolvent_kernel_2d(double sigma, double r);

// Counts of eigenvalues within closed disk |z - c| <= r (with relative slack).
int count_in_disk(const std::vector<std::complex<double>>& eigs, std::complex<double> c, double r, double slack = 0.0);

}  // namespace spectral::oracle
