#include <doctest.h>

#include "faceq/degrade.hpp"
#include "faceq/quality_model.hpp"
#include "faceq/synthetic.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

using namespace faceq;

namespace {

GrayImage random_image(int side, std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> u(0.0, 255.0);
    GrayImage img(side, side);
    for (double& p : img.pixels)
        p = u(rng);
    return img;
}

TrainConfig small_config()
{
    TrainConfig cfg;
    cfg.image_side = 16; // 81 locations with the default 8/7 patch layout
    return cfg;
}

// The scoring feature pipeline, spelled out with the public building blocks.
std::vector<FeatureVector> image_features(const GrayImage& img, const TrainConfig& cfg)
{
    GrayImage logged = log_normalize(img);
    std::vector<Patch> patches = extract_patches(logged, cfg.patch);
    std::vector<FeatureVector> features;
    features.reserve(patches.size());
    for (const Patch& p : patches)
        features.push_back(patch_features(normalize_patch(p), cfg.d));
    return features;
}

// Log density through explicit inversion, no Cholesky shortcut.
double dense_log_density(const std::vector<double>& mean, Mat cov, const FeatureVector& x)
{
    int d = cov.rows();
    // Gauss-Jordan inverse with the determinant accumulated from the pivots.
    Mat aug(d, 2 * d);
    for (int r = 0; r < d; ++r) {
        for (int c = 0; c < d; ++c)
            aug(r, c) = cov(r, c);
        aug(r, d + r) = 1.0;
    }
    double det = 1.0;
    for (int col = 0; col < d; ++col) {
        int pivot = col;
        for (int r = col + 1; r < d; ++r)
            if (std::abs(aug(r, col)) > std::abs(aug(pivot, col)))
                pivot = r;
        if (pivot != col) {
            for (int c = 0; c < 2 * d; ++c)
                std::swap(aug(pivot, c), aug(col, c));
            det = -det;
        }
        det *= aug(col, col);
        double inv_p = 1.0 / aug(col, col);
        for (int c = 0; c < 2 * d; ++c)
            aug(col, c) *= inv_p;
        for (int r = 0; r < d; ++r) {
            if (r == col)
                continue;
            double f = aug(r, col);
            for (int c = 0; c < 2 * d; ++c)
                aug(r, c) -= f * aug(col, c);
        }
    }
    double quad = 0.0;
    for (int r = 0; r < d; ++r)
        for (int c = 0; c < d; ++c)
            quad += (x[r] - mean[r]) * aug(r, d + c) * (x[c] - mean[c]);
    return -0.5 * d * std::log(2.0 * std::numbers::pi) - 0.5 * std::log(det) - 0.5 * quad;
}

} // namespace

TEST_CASE("log density of a standard normal at its mean")
{
    std::vector<double> mean{0.0, 0.0, 0.0};
    LocationGaussian g = make_location_gaussian(mean, Mat::identity(3));
    double expected = -1.5 * std::log(2.0 * std::numbers::pi); // -2.7568155996140185
    CHECK(log_density(g, {0.0, 0.0, 0.0}) == doctest::Approx(expected).epsilon(1e-14));
    CHECK(log_density(g, {1.0, 0.0, 0.0}) == doctest::Approx(expected - 0.5).epsilon(1e-14));
}

TEST_CASE("make location gaussian rejects bad covariances")
{
    std::vector<double> mean{0.0, 0.0};

    Mat asym(2, 2);
    asym(0, 0) = 1.0; asym(0, 1) = 0.2;
    asym(1, 0) = 0.3; asym(1, 1) = 1.0;
    CHECK_THROWS_AS(make_location_gaussian(mean, asym), std::invalid_argument);

    Mat indef(2, 2);
    indef(0, 0) = 1.0; indef(0, 1) = 2.0;
    indef(1, 0) = 2.0; indef(1, 1) = 1.0;
    CHECK_THROWS_AS(make_location_gaussian(mean, indef), std::invalid_argument);

    CHECK_THROWS_AS(make_location_gaussian({0.0, 0.0, 0.0}, Mat::identity(2)),
                    std::invalid_argument);
}

TEST_CASE("log density rejects dimension mismatches")
{
    LocationGaussian g = make_location_gaussian({0.0, 0.0, 0.0}, Mat::identity(3));
    CHECK_THROWS_AS(log_density(g, {1.0, 2.0}), std::invalid_argument);
}

TEST_CASE("log density matches a dense inversion oracle")
{
    std::mt19937_64 rng(404);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int d : {1, 2, 3, 5}) {
        for (int rep = 0; rep < 50; ++rep) {
            Mat b(d, d);
            for (double& v : b.values())
                v = u(rng);
            Mat cov = transpose(b) * b;
            for (int i = 0; i < d; ++i)
                cov(i, i) += 0.4;

            std::vector<double> mean(d);
            FeatureVector x(d);
            for (int i = 0; i < d; ++i) {
                mean[i] = 2.0 * u(rng);
                x[i] = 2.0 * u(rng);
            }

            LocationGaussian g = make_location_gaussian(mean, cov);
            CHECK(std::abs(log_density(g, x) - dense_log_density(mean, cov, x)) < 1e-9);
        }
    }
}

TEST_CASE("log density is maximal at the mean and decays with mahalanobis radius")
{
    std::mt19937_64 rng(405);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Mat b(3, 3);
    for (double& v : b.values())
        v = u(rng);
    Mat cov = transpose(b) * b;
    for (int i = 0; i < 3; ++i)
        cov(i, i) += 0.5;
    std::vector<double> mean{0.3, -0.7, 1.1};
    LocationGaussian g = make_location_gaussian(mean, cov);

    double at_mean = log_density(g, {0.3, -0.7, 1.1});
    for (int rep = 0; rep < 100; ++rep) {
        double dir[3];
        double norm = 0.0;
        for (double& v : dir) {
            v = u(rng);
            norm += v * v;
        }
        norm = std::sqrt(norm);
        double prev = at_mean;
        for (double radius : {0.1, 1.0, 10.0}) {
            FeatureVector x(3);
            for (int i = 0; i < 3; ++i)
                x[i] = mean[i] + radius * dir[i] / norm;
            double val = log_density(g, x);
            CHECK(val < prev);
            prev = val;
        }
    }
}

TEST_CASE("training needs at least d plus two images")
{
    std::mt19937_64 rng(406);
    TrainConfig cfg = small_config();
    std::vector<GrayImage> images;
    for (int i = 0; i < 4; ++i)
        images.push_back(random_image(16, rng));

    CHECK_THROWS_AS(train(images, cfg), std::invalid_argument); // 4 < 3 + 2
    images.push_back(random_image(16, rng));
    CHECK_NOTHROW(train(images, cfg));
}

TEST_CASE("training rejects inconsistent and wrongly sized inputs")
{
    std::mt19937_64 rng(407);
    TrainConfig cfg = small_config();
    std::vector<GrayImage> images;
    for (int i = 0; i < 5; ++i)
        images.push_back(random_image(16, rng));
    images[3] = random_image(17, rng);
    CHECK_THROWS_AS(train(images, cfg), std::invalid_argument);

    std::vector<GrayImage> wrong(5, random_image(32, rng));
    CHECK_THROWS_AS(train(wrong, cfg), std::invalid_argument);

    CHECK_THROWS_AS(train({}, cfg), std::invalid_argument);
}

TEST_CASE("training on identical images leaves the pure ridge covariance")
{
    std::mt19937_64 rng(408);
    TrainConfig cfg = small_config();
    GrayImage img = random_image(16, rng);
    std::vector<GrayImage> images(6, img);

    QualityModel model = train(images, cfg);
    REQUIRE(model.location_count() == 81);
    REQUIRE(static_cast<int>(model.gaussians.size()) == 81);

    std::vector<FeatureVector> feats = image_features(img, cfg);
    for (int loc = 0; loc < 81; ++loc) {
        const LocationGaussian& g = model.gaussians[loc];
        for (int i = 0; i < 3; ++i)
            CHECK(g.mean[i] == doctest::Approx(feats[loc][i]).epsilon(1e-12));
        // sample covariance collapses to rounding dust, eps = ridge_floor
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c) {
                if (r == c)
                    CHECK(g.covariance(r, c) == doctest::Approx(cfg.ridge_floor).epsilon(1e-9));
                else
                    CHECK(std::abs(g.covariance(r, c)) < 1e-24);
            }
    }

    // every location contributes -(d/2) log(2 pi eps), zero quadratic term
    double per_loc = -1.5 * std::log(2.0 * std::numbers::pi) - 1.5 * std::log(cfg.ridge_floor);
    double expected = 81.0 * per_loc;
    CHECK(quality_score(model, img) == doctest::Approx(expected).epsilon(1e-9));
}

TEST_CASE("trained moments match a hand-rolled estimator")
{
    std::mt19937_64 rng(409);
    TrainConfig cfg = small_config();
    std::vector<GrayImage> images;
    for (int i = 0; i < 12; ++i)
        images.push_back(random_image(16, rng));

    QualityModel model = train(images, cfg);

    std::vector<std::vector<FeatureVector>> all; // image -> location -> feature
    for (const GrayImage& img : images)
        all.push_back(image_features(img, cfg));

    const int m = 12;
    for (int loc = 0; loc < model.location_count(); ++loc) {
        std::vector<double> mean(3, 0.0);
        for (int i = 0; i < m; ++i)
            for (int k = 0; k < 3; ++k)
                mean[k] += all[i][loc][k];
        for (double& v : mean)
            v /= m;

        Mat cov(3, 3);
        for (int i = 0; i < m; ++i)
            for (int r = 0; r < 3; ++r)
                for (int c = 0; c < 3; ++c)
                    cov(r, c) += (all[i][loc][r] - mean[r]) * (all[i][loc][c] - mean[c]);
        for (double& v : cov.values())
            v /= (m - 1); // unbiased divisor

        double trace = cov(0, 0) + cov(1, 1) + cov(2, 2);
        double eps = std::max(cfg.ridge_scale * trace / 3.0, cfg.ridge_floor);
        for (int i = 0; i < 3; ++i)
            cov(i, i) += eps;

        const LocationGaussian& g = model.gaussians[loc];
        for (int k = 0; k < 3; ++k)
            CHECK(std::abs(g.mean[k] - mean[k]) < 1e-12);
        CHECK(max_abs_diff(g.covariance, cov) < 1e-12);
    }
}

TEST_CASE("the sample mean estimator lands near the truth on known gaussian draws")
{
    // Independent statistical check of the estimator convention: draw from a
    // known distribution and verify the same estimator recovers its mean.
    std::mt19937_64 rng(410);
    std::normal_distribution<double> n01(0.0, 1.0);
    const double mu[3] = {1.0, -2.0, 3.0};
    const double sigma[3] = {2.0, 1.0, 0.5};
    const int m = 50;

    double mean[3] = {0.0, 0.0, 0.0};
    for (int i = 0; i < m; ++i)
        for (int k = 0; k < 3; ++k)
            mean[k] += mu[k] + sigma[k] * n01(rng);
    for (int k = 0; k < 3; ++k) {
        mean[k] /= m;
        CHECK(std::abs(mean[k] - mu[k]) < 4.0 * sigma[k] / std::sqrt(static_cast<double>(m)));
    }
}

TEST_CASE("a larger ridge floor shifts only the covariance diagonal")
{
    std::mt19937_64 rng(411);
    std::vector<GrayImage> images;
    for (int i = 0; i < 10; ++i)
        images.push_back(random_image(16, rng));

    TrainConfig lo = small_config();
    lo.ridge_scale = 0.0;
    lo.ridge_floor = 1e-4;
    TrainConfig hi = lo;
    hi.ridge_floor = 1e-2;

    QualityModel a = train(images, lo);
    QualityModel b = train(images, hi);
    double delta = hi.ridge_floor - lo.ridge_floor;
    for (int loc = 0; loc < a.location_count(); ++loc)
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c) {
                double expect = a.gaussians[loc].covariance(r, c) + (r == c ? delta : 0.0);
                CHECK(b.gaussians[loc].covariance(r, c) == doctest::Approx(expect).epsilon(1e-12));
            }
}

TEST_CASE("quality score is the sum of per-location log densities")
{
    std::mt19937_64 rng(412);
    TrainConfig cfg = small_config();
    std::vector<GrayImage> images;
    for (int i = 0; i < 8; ++i)
        images.push_back(random_image(16, rng));
    QualityModel model = train(images, cfg);

    GrayImage probe = random_image(16, rng);
    std::vector<FeatureVector> feats = image_features(probe, cfg);
    double manual = 0.0;
    for (int loc = 0; loc < model.location_count(); ++loc)
        manual += log_density(model.gaussians[loc], feats[loc]);

    CHECK(std::abs(quality_score(model, probe) - manual) < 1e-9);
}

TEST_CASE("quality score is deterministic and validates the image size")
{
    std::mt19937_64 rng(413);
    TrainConfig cfg = small_config();
    std::vector<GrayImage> images;
    for (int i = 0; i < 6; ++i)
        images.push_back(random_image(16, rng));
    QualityModel model = train(images, cfg);

    GrayImage probe = random_image(16, rng);
    CHECK(quality_score(model, probe) == quality_score(model, probe));

    GrayImage wrong = random_image(32, rng);
    CHECK_THROWS_AS(quality_score(model, wrong), std::invalid_argument);
}

TEST_CASE("score batch reproduces the sequential loop bit for bit")
{
    std::mt19937_64 rng(414);
    TrainConfig cfg = small_config();
    std::vector<GrayImage> images;
    for (int i = 0; i < 8; ++i)
        images.push_back(random_image(16, rng));
    QualityModel model = train(images, cfg);

    std::vector<GrayImage> probes;
    for (int i = 0; i < 64; ++i)
        probes.push_back(random_image(16, rng));

    std::vector<double> sequential;
    for (const GrayImage& p : probes)
        sequential.push_back(quality_score(model, p));

    for (int threads : {1, 2, 3, 8}) {
        std::vector<BatchResult> batch = score_batch(model, probes, threads);
        REQUIRE(batch.size() == probes.size());
        for (std::size_t i = 0; i < batch.size(); ++i) {
            REQUIRE(batch[i].ok());
            CHECK(batch[i].score == sequential[i]);
        }
    }

    CHECK(score_batch(model, {}, 4).empty());
}

TEST_CASE("score batch reports per-element failures without aborting")
{
    std::mt19937_64 rng(415);
    TrainConfig cfg = small_config();
    std::vector<GrayImage> images;
    for (int i = 0; i < 6; ++i)
        images.push_back(random_image(16, rng));
    QualityModel model = train(images, cfg);

    std::vector<GrayImage> probes{random_image(16, rng), random_image(20, rng),
                                  random_image(16, rng)};
    std::vector<BatchResult> batch = score_batch(model, probes, 2);
    REQUIRE(batch.size() == 3);
    CHECK(batch[0].ok());
    CHECK_FALSE(batch[1].ok());
    CHECK_FALSE(batch[1].error.empty());
    CHECK(batch[2].ok());
    CHECK(batch[0].score == quality_score(model, probes[0]));
    CHECK(batch[2].score == quality_score(model, probes[2]));
}

TEST_CASE("a training image outscores a heavily blurred copy of itself")
{
    std::vector<GrayImage> faces = generate_synthetic_faces(99, 40, 32);
    TrainConfig cfg;
    cfg.image_side = 32;
    QualityModel model = train(faces, cfg);

    int wins = 0;
    for (int i = 0; i < 10; ++i) {
        double sharp = quality_score(model, faces[i]);
        double blurred = quality_score(model, blur_resample(faces[i], 8));
        if (sharp > blurred)
            ++wins;
    }
    CHECK(wins == 10);
}
