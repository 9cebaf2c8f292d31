#include "faceq/dct.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <unordered_map>

namespace faceq {

const Mat& dct_matrix(int n)
{
    if (n < 1)
        throw std::invalid_argument("dct_matrix: size must be >= 1");
    thread_local std::unordered_map<int, Mat> cache;
    auto it = cache.find(n);
    if (it != cache.end())
        return it->second;

    Mat t(n, n);
    const double c0 = std::sqrt(1.0 / n);
    const double c = std::sqrt(2.0 / n);
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
            t(j, k) = (j == 0 ? c0 : c)
                * std::cos(std::numbers::pi * (2.0 * k + 1.0) * j / (2.0 * n));
    return cache.emplace(n, std::move(t)).first->second;
}

Mat dct2(const Mat& patch)
{
    if (patch.rows() != patch.cols() || patch.rows() < 1)
        throw std::invalid_argument("dct2: patch must be square and non-empty");
    const Mat& t = dct_matrix(patch.rows());
    return (t * patch) * transpose(t);
}

Mat idct2(const Mat& coeffs)
{
    if (coeffs.rows() != coeffs.cols() || coeffs.rows() < 1)
        throw std::invalid_argument("idct2: matrix must be square and non-empty");
    const Mat& t = dct_matrix(coeffs.rows());
    return (transpose(t) * coeffs) * t;
}

const std::vector<std::pair<int, int>>& zigzag_order(int n)
{
    if (n < 1)
        throw std::invalid_argument("zigzag_order: size must be >= 1");
    thread_local std::unordered_map<int, std::vector<std::pair<int, int>>> cache;
    auto it = cache.find(n);
    if (it != cache.end())
        return it->second;

    std::vector<std::pair<int, int>> order;
    order.reserve(static_cast<std::size_t>(n) * n);
    for (int s = 0; s <= 2 * (n - 1); ++s) {
        if (s % 2 == 0) {
            // up-right: from (s, 0) towards (0, s), clipped to the grid
            for (int r = std::min(s, n - 1); r >= 0 && s - r < n; --r)
                order.emplace_back(r, s - r);
        } else {
            // down-left: from (0, s) towards (s, 0)
            for (int c = std::min(s, n - 1); c >= 0 && s - c < n; --c)
                order.emplace_back(s - c, c);
        }
    }
    return cache.emplace(n, std::move(order)).first->second;
}

FeatureVector select_low_freq(const Mat& coeffs, int d)
{
    const int n = coeffs.rows();
    if (n != coeffs.cols())
        throw std::invalid_argument("select_low_freq: matrix must be square");
    if (d < 1 || d > n * n - 1)
        throw std::invalid_argument("select_low_freq: d must be in [1, n^2 - 1]");
    const auto& order = zigzag_order(n);
    FeatureVector out(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i) {
        const auto [r, c] = order[static_cast<std::size_t>(i) + 1]; // skip DC
        out[static_cast<std::size_t>(i)] = coeffs(r, c);
    }
    return out;
}

FeatureVector patch_features(const Patch& normalized, int d)
{
    return select_low_freq(dct2(normalized.values), d);
}

} // namespace faceq
