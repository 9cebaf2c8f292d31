#ifndef FACEQ_QUALITY_MODEL_HPP
#define FACEQ_QUALITY_MODEL_HPP

#include "faceq/dct.hpp"
#include "faceq/image.hpp"
#include "faceq/linalg.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace faceq {

// Normal model for the feature vector at one patch-grid location. The
// precision matrix and log-determinant are cached at construction so scoring
// only evaluates the quadratic form.
struct LocationGaussian {
    std::vector<double> mean;
    Mat covariance;
    Mat precision;
    double log_det = 0.0;

    int dim() const { return static_cast<int>(mean.size()); }
};

// Validates symmetry / positive definiteness, caches precision and
// log-determinant, and checks covariance * precision == I within 1e-8.
LocationGaussian make_location_gaussian(std::vector<double> mean, Mat covariance);

double log_density(const LocationGaussian& g, const FeatureVector& x);

struct TrainingMeta {
    long sample_count = 0;
    double ridge_scale = 0.0;
    double ridge_floor = 0.0;
    std::string created_at; // ISO-8601 UTC; metadata only
};

struct TrainConfig {
    PatchConfig patch;
    int image_side = 64;
    int d = 3;
    // Per-location ridge: eps = max(ridge_scale * trace(S)/d, ridge_floor).
    double ridge_scale = 1e-6;
    double ridge_floor = 1e-10;
};

struct QualityModel {
    PatchConfig patch;
    int image_side = 64;
    int d = 3;
    std::vector<LocationGaussian> gaussians; // row-major patch grid
    TrainingMeta meta;

    int location_count() const { return patch.patch_count(image_side, image_side); }
};

// Fit one Gaussian per patch location from aligned image_side x image_side
// images. Sample covariance uses the unbiased M-1 divisor, then the ridge.
QualityModel train(const std::vector<GrayImage>& images, const TrainConfig& cfg);

// Summed per-location log density of the image's patch features. The image
// must already be image_side x image_side; no resizing happens here.
double quality_score(const QualityModel& model, const GrayImage& img);

struct ScoredImage {
    std::string image_id;
    double score = 0.0;
    std::size_t rank = 0;
};

struct BatchResult {
    double score = 0.0;
    std::string error; // empty on success
    bool ok() const { return error.empty(); }
};

// Element-wise quality_score; output order matches input order and is
// identical to a sequential loop regardless of the thread count.
std::vector<BatchResult> score_batch(const QualityModel& model,
                                     const std::vector<GrayImage>& images,
                                     int threads = 0);

} // namespace faceq

#endif
