#include "faceq/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace faceq {

Mat operator*(const Mat& a, const Mat& b)
{
    if (a.cols() != b.rows())
        throw std::invalid_argument("matrix product: inner dimensions differ");
    Mat out(a.rows(), b.cols());
    for (int i = 0; i < a.rows(); ++i) {
        for (int j = 0; j < b.cols(); ++j) {
            double s = 0.0;
            for (int k = 0; k < a.cols(); ++k)
                s += a(i, k) * b(k, j);
            out(i, j) = s;
        }
    }
    return out;
}

Mat transpose(const Mat& a)
{
    Mat out(a.cols(), a.rows());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j)
            out(j, i) = a(i, j);
    return out;
}

double max_abs_diff(const Mat& a, const Mat& b)
{
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw std::invalid_argument("max_abs_diff: shape mismatch");
    double m = 0.0;
    for (std::size_t i = 0; i < a.values().size(); ++i)
        m = std::max(m, std::abs(a.values()[i] - b.values()[i]));
    return m;
}

bool cholesky_factor(const Mat& a, Mat& lower)
{
    const int n = a.rows();
    if (n != a.cols())
        throw std::invalid_argument("cholesky_factor: matrix not square");
    lower = Mat(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j <= i; ++j) {
            double s = a(i, j);
            for (int k = 0; k < j; ++k)
                s -= lower(i, k) * lower(j, k);
            if (i == j) {
                if (!(s > 0.0) || !std::isfinite(s))
                    return false;
                lower(i, i) = std::sqrt(s);
            } else {
                lower(i, j) = s / lower(j, j);
            }
        }
    }
    return true;
}

Mat cholesky_inverse(const Mat& lower)
{
    const int n = lower.rows();
    Mat inv(n, n);
    // Solve L L^T x = e_col for each basis vector.
    std::vector<double> y(n);
    for (int col = 0; col < n; ++col) {
        for (int i = 0; i < n; ++i) {
            double s = (i == col) ? 1.0 : 0.0;
            for (int k = 0; k < i; ++k)
                s -= lower(i, k) * y[k];
            y[i] = s / lower(i, i);
        }
        for (int i = n - 1; i >= 0; --i) {
            double s = y[i];
            for (int k = i + 1; k < n; ++k)
                s -= lower(k, i) * inv(k, col);
            inv(i, col) = s / lower(i, i);
        }
    }
    // Symmetrize to remove round-off drift between the two triangles.
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < i; ++j) {
            const double v = 0.5 * (inv(i, j) + inv(j, i));
            inv(i, j) = v;
            inv(j, i) = v;
        }
    }
    return inv;
}

double cholesky_log_det(const Mat& lower)
{
    double s = 0.0;
    for (int i = 0; i < lower.rows(); ++i)
        s += std::log(lower(i, i));
    return 2.0 * s;
}

void symmetric_eigen(const Mat& a, std::vector<double>& values, Mat& vectors)
{
    const int n = a.rows();
    if (n != a.cols())
        throw std::invalid_argument("symmetric_eigen: matrix not square");
    Mat m = a;
    vectors = Mat::identity(n);

    double norm = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            norm += m(i, j) * m(i, j);
    norm = std::sqrt(norm);
    const double tol = (norm > 0.0) ? norm * 1e-15 : 0.0;

    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                off += m(i, j) * m(i, j);
        if (std::sqrt(2.0 * off) <= tol)
            break;
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const double apq = m(p, q);
                if (std::abs(apq) <= tol / (n * n))
                    continue;
                const double app = m(p, p);
                const double aqq = m(q, q);
                const double theta = (aqq - app) / (2.0 * apq);
                const double t = (theta >= 0.0)
                    ? 1.0 / (theta + std::sqrt(1.0 + theta * theta))
                    : 1.0 / (theta - std::sqrt(1.0 + theta * theta));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                for (int k = 0; k < n; ++k) {
                    const double mkp = m(k, p);
                    const double mkq = m(k, q);
                    m(k, p) = c * mkp - s * mkq;
                    m(k, q) = s * mkp + c * mkq;
                }
                for (int k = 0; k < n; ++k) {
                    const double mpk = m(p, k);
                    const double mqk = m(q, k);
                    m(p, k) = c * mpk - s * mqk;
                    m(q, k) = s * mpk + c * mqk;
                }
                for (int k = 0; k < n; ++k) {
                    const double vkp = vectors(k, p);
                    const double vkq = vectors(k, q);
                    vectors(k, p) = c * vkp - s * vkq;
                    vectors(k, q) = s * vkp + c * vkq;
                }
            }
        }
    }

    values.resize(n);
    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) {
        values[i] = m(i, i);
        order[i] = i;
    }
    // Descending eigenvalues; original index breaks ties for determinism.
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return values[a] > values[b]; });
    std::vector<double> sv(n);
    Mat svec(n, n);
    for (int i = 0; i < n; ++i) {
        sv[i] = values[order[i]];
        for (int k = 0; k < n; ++k)
            svec(k, i) = vectors(k, order[i]);
    }
    values = std::move(sv);
    vectors = std::move(svec);
}

} // namespace faceq
