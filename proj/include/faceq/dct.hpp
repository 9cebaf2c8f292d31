#ifndef FACEQ_DCT_HPP
#define FACEQ_DCT_HPP

#include "faceq/image.hpp"
#include "faceq/linalg.hpp"

#include <utility>
#include <vector>

namespace faceq {

using FeatureVector = std::vector<double>;

// Orthonormal type-II DCT basis: row 0 scaled by sqrt(1/n), the rest by
// sqrt(2/n). Cached per size.
const Mat& dct_matrix(int n);

// C = T * P * T^T. Parseval holds: sum(C^2) == sum(P^2).
Mat dct2(const Mat& patch);

// Inverse of dct2: P = T^T * C * T.
Mat idct2(const Mat& coeffs);

// JPEG zigzag traversal of an n x n index grid, from (0,0) towards (n-1,n-1).
const std::vector<std::pair<int, int>>& zigzag_order(int n);

// First d zigzag coefficients after dropping the DC entry.
FeatureVector select_low_freq(const Mat& coeffs, int d);

// dct2 + select_low_freq on an already normalized patch.
FeatureVector patch_features(const Patch& normalized, int d);

} // namespace faceq

#endif
