#include "faceq/quality_model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <thread>

namespace faceq {

namespace {

const double k_ln_2pi = std::log(2.0 * std::numbers::pi);

// Precomputed lookup for the per-patch feature path: DCT basis and the
// zigzag targets for the first d AC coefficients.
struct FeaturePlan {
    int n = 0;
    int d = 0;
    const Mat* basis = nullptr;
    std::vector<std::pair<int, int>> targets; // (u, v) per feature
    std::vector<int> rows;                    // unique u values, ascending

    FeaturePlan(int n_, int d_) : n(n_), d(d_)
    {
        basis = &dct_matrix(n);
        const auto& order = zigzag_order(n);
        if (d > n * n - 1)
            throw std::invalid_argument("feature count exceeds available AC coefficients");
        for (int i = 0; i < d; ++i)
            targets.push_back(order[static_cast<std::size_t>(i) + 1]);
        for (const auto& [u, v] : targets)
            if (std::find(rows.begin(), rows.end(), u) == rows.end())
                rows.push_back(u);
        std::sort(rows.begin(), rows.end());
    }
};

// Scratch buffers reused across patches of one image.
struct FeatureScratch {
    std::vector<double> patch;     // n*n, row-major
    std::vector<double> row_cache; // rows.size() * n
};

// Features of the patch at (r0, c0) of the log image. The arithmetic mirrors
// normalize_patch + dct2 + select_low_freq exactly (same summation orders),
// so results are bit-identical to the op-by-op pipeline.
void patch_features_at(const GrayImage& log_img, int r0, int c0, const FeaturePlan& plan,
                       FeatureScratch& s, double* out)
{
    const int n = plan.n;
    const std::size_t count = static_cast<std::size_t>(n) * n;
    s.patch.resize(count);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c)
            s.patch[static_cast<std::size_t>(r) * n + c] = log_img.at(r0 + r, c0 + c);

    double sum = 0.0;
    for (double x : s.patch)
        sum += x;
    const double mean = sum / static_cast<double>(count);
    double var = 0.0;
    for (double x : s.patch)
        var += (x - mean) * (x - mean);
    var /= static_cast<double>(count);
    const double sigma = std::sqrt(var);

    if (sigma < kFlatPatchSigma) {
        for (int i = 0; i < plan.d; ++i)
            out[i] = 0.0;
        return;
    }
    for (double& x : s.patch)
        x = (x - mean) / sigma;

    // Needed rows of A = T * P, then C(u, v) = sum_c A(u, c) * T(v, c).
    const Mat& t = *plan.basis;
    s.row_cache.resize(plan.rows.size() * static_cast<std::size_t>(n));
    for (std::size_t ri = 0; ri < plan.rows.size(); ++ri) {
        const int u = plan.rows[ri];
        double* arow = s.row_cache.data() + ri * n;
        for (int c = 0; c < n; ++c) {
            double acc = 0.0;
            for (int k = 0; k < n; ++k)
                acc += t(u, k) * s.patch[static_cast<std::size_t>(k) * n + c];
            arow[c] = acc;
        }
    }
    for (int i = 0; i < plan.d; ++i) {
        const auto [u, v] = plan.targets[static_cast<std::size_t>(i)];
        const std::size_t ri = static_cast<std::size_t>(
            std::find(plan.rows.begin(), plan.rows.end(), u) - plan.rows.begin());
        const double* arow = s.row_cache.data() + ri * n;
        double acc = 0.0;
        for (int c = 0; c < n; ++c)
            acc += arow[c] * t(v, c);
        out[i] = acc;
    }
}

} // namespace

LocationGaussian make_location_gaussian(std::vector<double> mean, Mat covariance)
{
    const int d = static_cast<int>(mean.size());
    if (d < 1)
        throw std::invalid_argument("location gaussian: dimension must be >= 1");
    if (covariance.rows() != d || covariance.cols() != d)
        throw std::invalid_argument("location gaussian: covariance shape mismatch");
    for (double v : mean)
        if (!std::isfinite(v))
            throw std::invalid_argument("location gaussian: non-finite mean");
    for (double v : covariance.values())
        if (!std::isfinite(v))
            throw std::invalid_argument("location gaussian: non-finite covariance");
    for (int i = 0; i < d; ++i)
        for (int j = i + 1; j < d; ++j)
            if (std::abs(covariance(i, j) - covariance(j, i)) > 1e-12)
                throw std::invalid_argument("location gaussian: covariance not symmetric");

    Mat lower;
    if (!cholesky_factor(covariance, lower))
        throw std::invalid_argument("location gaussian: covariance not positive definite");

    LocationGaussian g;
    g.mean = std::move(mean);
    g.covariance = std::move(covariance);
    g.precision = cholesky_inverse(lower);
    g.log_det = cholesky_log_det(lower);
    if (!std::isfinite(g.log_det))
        throw std::invalid_argument("location gaussian: log-determinant not finite");

    const Mat product = g.covariance * g.precision;
    if (max_abs_diff(product, Mat::identity(d)) > 1e-8)
        throw std::invalid_argument("location gaussian: precision check failed");
    return g;
}

double log_density(const LocationGaussian& g, const FeatureVector& x)
{
    const int d = g.dim();
    if (static_cast<int>(x.size()) != d)
        throw std::invalid_argument("log_density: dimension mismatch");
    double quad = 0.0;
    for (int i = 0; i < d; ++i) {
        const double di = x[static_cast<std::size_t>(i)] - g.mean[static_cast<std::size_t>(i)];
        for (int j = 0; j < d; ++j) {
            const double dj = x[static_cast<std::size_t>(j)] - g.mean[static_cast<std::size_t>(j)];
            quad += di * g.precision(i, j) * dj;
        }
    }
    return -0.5 * d * k_ln_2pi - 0.5 * g.log_det - 0.5 * quad;
}

QualityModel train(const std::vector<GrayImage>& images, const TrainConfig& cfg)
{
    cfg.patch.validate();
    if (cfg.d < 1)
        throw std::invalid_argument("train: d must be >= 1");
    if (cfg.image_side < cfg.patch.patch_size)
        throw std::invalid_argument("train: image side smaller than patch size");
    const int m = static_cast<int>(images.size());
    if (m < cfg.d + 2)
        throw std::invalid_argument("train: need at least d + 2 images");
    for (const GrayImage& img : images)
        if (img.width != cfg.image_side || img.height != cfg.image_side)
            throw std::invalid_argument("train: image size differs from configured side");

    const int n_loc = cfg.patch.patch_count(cfg.image_side, cfg.image_side);
    const int d = cfg.d;
    const FeaturePlan plan(cfg.patch.patch_size, d);
    const int stride = cfg.patch.stride();
    const int grid = cfg.patch.positions(cfg.image_side);

    // Cache all features: m x n_loc x d.
    std::vector<double> feats(static_cast<std::size_t>(m) * n_loc * d);
    FeatureScratch scratch;
    for (int j = 0; j < m; ++j) {
        const GrayImage log_img = log_normalize(images[static_cast<std::size_t>(j)]);
        double* dst = feats.data() + static_cast<std::size_t>(j) * n_loc * d;
        for (int gr = 0; gr < grid; ++gr)
            for (int gc = 0; gc < grid; ++gc, dst += d)
                patch_features_at(log_img, gr * stride, gc * stride, plan, scratch, dst);
    }
    for (double v : feats)
        if (!std::isfinite(v))
            throw std::invalid_argument("train: non-finite feature encountered");

    QualityModel model;
    model.patch = cfg.patch;
    model.image_side = cfg.image_side;
    model.d = d;
    model.gaussians.reserve(static_cast<std::size_t>(n_loc));

    std::vector<double> mean(static_cast<std::size_t>(d));
    for (int loc = 0; loc < n_loc; ++loc) {
        std::fill(mean.begin(), mean.end(), 0.0);
        for (int j = 0; j < m; ++j) {
            const double* x = feats.data() + (static_cast<std::size_t>(j) * n_loc + loc) * d;
            for (int i = 0; i < d; ++i)
                mean[static_cast<std::size_t>(i)] += x[i];
        }
        for (double& v : mean)
            v /= m;

        Mat cov(d, d);
        for (int j = 0; j < m; ++j) {
            const double* x = feats.data() + (static_cast<std::size_t>(j) * n_loc + loc) * d;
            for (int a = 0; a < d; ++a) {
                const double da = x[a] - mean[static_cast<std::size_t>(a)];
                for (int b = a; b < d; ++b)
                    cov(a, b) += da * (x[b] - mean[static_cast<std::size_t>(b)]);
            }
        }
        double trace = 0.0;
        for (int a = 0; a < d; ++a) {
            for (int b = a; b < d; ++b) {
                cov(a, b) /= (m - 1);
                cov(b, a) = cov(a, b);
            }
            trace += cov(a, a);
        }
        const double eps = std::max(cfg.ridge_scale * trace / d, cfg.ridge_floor);
        for (int a = 0; a < d; ++a)
            cov(a, a) += eps;

        model.gaussians.push_back(make_location_gaussian(mean, std::move(cov)));
    }

    model.meta.sample_count = m;
    model.meta.ridge_scale = cfg.ridge_scale;
    model.meta.ridge_floor = cfg.ridge_floor;
    return model;
}

double quality_score(const QualityModel& model, const GrayImage& img)
{
    if (img.width != model.image_side || img.height != model.image_side)
        throw std::invalid_argument("quality_score: image size differs from the model's side");
    const int n_loc = model.location_count();
    if (static_cast<int>(model.gaussians.size()) != n_loc)
        throw std::invalid_argument("quality_score: model location count mismatch");

    const GrayImage log_img = log_normalize(img);
    const FeaturePlan plan(model.patch.patch_size, model.d);
    const int stride = model.patch.stride();
    const int grid = model.patch.positions(model.image_side);

    FeatureScratch scratch;
    FeatureVector x(static_cast<std::size_t>(model.d));
    double total = 0.0;
    int loc = 0;
    for (int gr = 0; gr < grid; ++gr) {
        for (int gc = 0; gc < grid; ++gc, ++loc) {
            patch_features_at(log_img, gr * stride, gc * stride, plan, scratch, x.data());
            total += log_density(model.gaussians[static_cast<std::size_t>(loc)], x);
        }
    }
    return total;
}

std::vector<BatchResult> score_batch(const QualityModel& model,
                                     const std::vector<GrayImage>& images, int threads)
{
    const std::size_t count = images.size();
    std::vector<BatchResult> results(count);
    if (count == 0)
        return results;

    auto score_one = [&](std::size_t i) {
        try {
            results[i].score = quality_score(model, images[i]);
        } catch (const std::exception& e) {
            results[i].error = e.what();
        }
    };

    if (threads <= 0)
        threads = static_cast<int>(std::min<std::size_t>(std::thread::hardware_concurrency(), count));
    if (threads <= 1) {
        for (std::size_t i = 0; i < count; ++i)
            score_one(i);
        return results;
    }

    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int t = 0; t < threads; ++t) {
        pool.emplace_back([&, t] {
            for (std::size_t i = static_cast<std::size_t>(t); i < count;
                 i += static_cast<std::size_t>(threads))
                score_one(i);
        });
    }
    for (std::thread& th : pool)
        th.join();
    return results;
}

} // namespace faceq
