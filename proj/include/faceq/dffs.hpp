#ifndef FACEQ_DFFS_HPP
#define FACEQ_DFFS_HPP

#include "faceq/image.hpp"
#include "faceq/linalg.hpp"
#include "faceq/quality_model.hpp"

#include <vector>

namespace faceq {

// Eigenface subspace: mean face and k orthonormal basis columns over
// vectorized image_side x image_side images.
struct EigenfaceModel {
    int image_side = 0;
    std::vector<double> mean_face; // image_side^2
    Mat basis;                     // image_side^2 x k, orthonormal columns
    TrainingMeta meta;

    int component_count() const { return basis.cols(); }
    int dimension() const { return image_side * image_side; }
};

// Top-k principal components of the vectorized images, computed through the
// M x M Gram matrix. Components sorted by descending eigenvalue; each
// eigenvector's sign fixed so its largest-magnitude entry is positive.
EigenfaceModel train_pca(const std::vector<GrayImage>& images, int k);

// Smallest k whose leading eigenvalues cover `coverage` of the total
// variance, capped at `cap`.
int choose_component_count(const std::vector<double>& eigenvalues, double coverage = 0.95,
                           int cap = 64);

// Negated distance from face space: with x the vectorized image and
// e = x - mean_face, returns -|e - U U^T e|. Higher is better; 0 is the
// maximum, reached when the centered image lies in span(U).
double dffs_score(const EigenfaceModel& m, const GrayImage& img);

// Pixel-wise zero-mean unit-variance normalization of the whole image
// (population convention, flat images map to zeros).
GrayImage standardize_image(const GrayImage& img);

// Baseline pipeline: inputs are standardized before PCA / projection so the
// baseline is not unduly sensitive to global contrast. k = 0 selects the
// component count covering 95% of training variance (capped at 64).
EigenfaceModel train_dffs_baseline(const std::vector<GrayImage>& images, int k = 0);
double dffs_quality(const EigenfaceModel& m, const GrayImage& img);

} // namespace faceq

#endif
