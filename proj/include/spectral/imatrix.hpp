#pragma once

#include <Eigen/Dense>
#include <vector>

#include "spectral/interval.hpp"

namespace spectral {

// Dense row-major matrix of complex rectangles.
class IMatrix {
public:
    IMatrix() = default;
    IMatrix(size_t rows, size_t cols);
    explicit IMatrix(const Eigen::MatrixXcd& point);
    explicit IMatrix(const Eigen::MatrixXd& point);

    static IMatrix identity(size_t n);

    size_t rows() const { return rows_; }
    size_t cols() const { return cols_; }
    ComplexBox& operator()(size_t i, size_t j) { return data_[i * cols_ + j]; }
    const ComplexBox& operator()(size_t i, size_t j) const { return data_[i * cols_ + j]; }

    Eigen::MatrixXcd mid() const;
    IMatrix block(size_t r0, size_t c0, size_t nr, size_t nc) const;
    IMatrix adjoint() const;
    bool is_real() const;
    // Largest entrywise radius; zero for point matrices.
    double max_rad() const;

private:
    size_t rows_ = 0;
    size_t cols_ = 0;
    std::vector<ComplexBox> data_;
};

IMatrix mat_mul(const IMatrix& a, const IMatrix& b);
IMatrix operator*(const IMatrix& a, const IMatrix& b);
IMatrix operator+(const IMatrix& a, const IMatrix& b);
IMatrix operator-(const IMatrix& a, const IMatrix& b);
IMatrix scale_rows(const IMatrix& a, const std::vector<ComplexBox>& d);  // diag(d) * a
IMatrix scale_cols(const IMatrix& a, const std::vector<ComplexBox>& d);  // a * diag(d)

// Upper bounds on induced norms; returned as [0, bound] style enclosures.
Interval norm1_bound(const IMatrix& a);
Interval norminf_bound(const IMatrix& a);
// Upper enclosure of the spectral norm: min of sqrt(|A|_1 |A|_inf) and the
// Gershgorin row-sum bound on A^* A.
Interval op_norm2_bound(const IMatrix& a);

struct InverseEnclosure {
    IMatrix inverse;      // entrywise enclosure of A^{-1} for every A in the input
    Interval defect;      // enclosure of ||I - R A||_2 for the point candidate R
    double inflation = 0; // radius added to every entry of R
};

// Throws SingularityUnverified when the defect bound is not below 1.
InverseEnclosure verified_inverse(const IMatrix& a);

}  // namespace spectral
