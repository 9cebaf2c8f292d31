#ifndef FACEQ_LINALG_HPP
#define FACEQ_LINALG_HPP

#include <cstddef>
#include <vector>

namespace faceq {

// Dense row-major matrix of doubles. Sized for the small problems in this
// library: feature covariances (d x d), DCT bases (n x n) and PCA Gram
// matrices (M x M).
class Mat {
public:
    Mat() = default;
    Mat(int rows, int cols, double fill = 0.0)
        : rows_(rows), cols_(cols), v_(static_cast<std::size_t>(rows) * cols, fill) {}

    static Mat identity(int n)
    {
        Mat m(n, n);
        for (int i = 0; i < n; ++i)
            m(i, i) = 1.0;
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    bool empty() const { return v_.empty(); }

    double& operator()(int r, int c) { return v_[static_cast<std::size_t>(r) * cols_ + c]; }
    double operator()(int r, int c) const { return v_[static_cast<std::size_t>(r) * cols_ + c]; }

    double* data() { return v_.data(); }
    const double* data() const { return v_.data(); }
    std::vector<double>& values() { return v_; }
    const std::vector<double>& values() const { return v_; }

    bool operator==(const Mat&) const = default;

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<double> v_;
};

Mat operator*(const Mat& a, const Mat& b);
Mat transpose(const Mat& a);

double max_abs_diff(const Mat& a, const Mat& b);

// Lower-triangular Cholesky factor of a symmetric positive definite matrix.
// Returns false when the matrix is not positive definite.
bool cholesky_factor(const Mat& a, Mat& lower);

// Inverse of L*L^T given the factor L.
Mat cholesky_inverse(const Mat& lower);

// log(det(L*L^T)) = 2 * sum(log(diag(L))).
double cholesky_log_det(const Mat& lower);

// Eigendecomposition of a symmetric matrix by cyclic Jacobi rotations.
// Eigenvalues are returned in descending order, eigenvectors as the
// corresponding columns of `vectors`.
void symmetric_eigen(const Mat& a, std::vector<double>& values, Mat& vectors);

} // namespace faceq

#endif
