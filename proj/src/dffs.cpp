#include "faceq/dffs.hpp"

#include <cmath>
#include <stdexcept>

namespace faceq {

namespace {

struct PcaFactors {
    std::vector<double> mean;       // D
    std::vector<double> centered;   // M x D, row per image
    std::vector<double> eigenvalues; // Gram eigenvalues, descending
    Mat gram_vectors;               // M x M
    int usable = 0;                 // eigenvalues numerically above zero
    int m = 0;
    int dim = 0;
};

PcaFactors pca_factors(const std::vector<GrayImage>& images)
{
    const int m = static_cast<int>(images.size());
    if (m < 2)
        throw std::invalid_argument("train_pca: need at least two images");
    const int side = images[0].width;
    if (side < 1 || images[0].height != side)
        throw std::invalid_argument("train_pca: images must be square");
    for (const GrayImage& img : images)
        if (img.width != side || img.height != side)
            throw std::invalid_argument("train_pca: inconsistent image sizes");
    const int dim = side * side;

    PcaFactors f;
    f.m = m;
    f.dim = dim;
    f.mean.assign(static_cast<std::size_t>(dim), 0.0);
    for (const GrayImage& img : images)
        for (int i = 0; i < dim; ++i)
            f.mean[static_cast<std::size_t>(i)] += img.pixels[static_cast<std::size_t>(i)];
    for (double& v : f.mean)
        v /= m;

    f.centered.resize(static_cast<std::size_t>(m) * dim);
    for (int j = 0; j < m; ++j)
        for (int i = 0; i < dim; ++i)
            f.centered[static_cast<std::size_t>(j) * dim + i] =
                images[static_cast<std::size_t>(j)].pixels[static_cast<std::size_t>(i)]
                - f.mean[static_cast<std::size_t>(i)];

    Mat gram(m, m);
    for (int a = 0; a < m; ++a) {
        const double* ra = f.centered.data() + static_cast<std::size_t>(a) * dim;
        for (int b = a; b < m; ++b) {
            const double* rb = f.centered.data() + static_cast<std::size_t>(b) * dim;
            double s = 0.0;
            for (int i = 0; i < dim; ++i)
                s += ra[i] * rb[i];
            gram(a, b) = s;
            gram(b, a) = s;
        }
    }
    symmetric_eigen(gram, f.eigenvalues, f.gram_vectors);

    const double top = f.eigenvalues.empty() ? 0.0 : std::max(f.eigenvalues[0], 0.0);
    const double cutoff = std::max(top * 1e-12, 1e-12);
    for (double v : f.eigenvalues)
        if (v > cutoff)
            ++f.usable;
    return f;
}

EigenfaceModel assemble(const PcaFactors& f, int k)
{
    EigenfaceModel model;
    model.image_side = static_cast<int>(std::lround(std::sqrt(static_cast<double>(f.dim))));
    model.mean_face = f.mean;
    model.basis = Mat(f.dim, k);
    for (int comp = 0; comp < k; ++comp) {
        std::vector<double> u(static_cast<std::size_t>(f.dim), 0.0);
        for (int j = 0; j < f.m; ++j) {
            const double w = f.gram_vectors(j, comp);
            const double* row = f.centered.data() + static_cast<std::size_t>(j) * f.dim;
            for (int i = 0; i < f.dim; ++i)
                u[static_cast<std::size_t>(i)] += w * row[i];
        }
        double norm = 0.0;
        for (double v : u)
            norm += v * v;
        norm = std::sqrt(norm);
        if (!(norm > 0.0))
            throw std::runtime_error("train_pca: degenerate component");
        // Sign convention: largest-magnitude entry positive.
        int arg = 0;
        for (int i = 1; i < f.dim; ++i)
            if (std::abs(u[static_cast<std::size_t>(i)]) > std::abs(u[static_cast<std::size_t>(arg)]))
                arg = i;
        const double scale = (u[static_cast<std::size_t>(arg)] < 0.0 ? -1.0 : 1.0) / norm;
        for (int i = 0; i < f.dim; ++i)
            model.basis(i, comp) = u[static_cast<std::size_t>(i)] * scale;
    }
    model.meta.sample_count = f.m;
    return model;
}

} // namespace

EigenfaceModel train_pca(const std::vector<GrayImage>& images, int k)
{
    if (k < 1)
        throw std::invalid_argument("train_pca: k must be >= 1");
    if (k >= static_cast<int>(images.size()))
        throw std::invalid_argument("train_pca: k must be smaller than the image count");
    const PcaFactors f = pca_factors(images);
    if (k > f.usable)
        throw std::invalid_argument("train_pca: training set has fewer nonzero components than k");
    return assemble(f, k);
}

int choose_component_count(const std::vector<double>& eigenvalues, double coverage, int cap)
{
    double total = 0.0;
    int usable = 0;
    const double top = eigenvalues.empty() ? 0.0 : std::max(eigenvalues[0], 0.0);
    const double cutoff = std::max(top * 1e-12, 1e-12);
    for (double v : eigenvalues) {
        if (v > cutoff) {
            total += v;
            ++usable;
        }
    }
    if (usable == 0)
        throw std::invalid_argument("choose_component_count: no nonzero variance");
    double acc = 0.0;
    int k = usable;
    for (int i = 0; i < usable; ++i) {
        acc += eigenvalues[static_cast<std::size_t>(i)];
        if (acc >= coverage * total) {
            k = i + 1;
            break;
        }
    }
    return std::min(k, cap);
}

double dffs_score(const EigenfaceModel& m, const GrayImage& img)
{
    const int dim = m.dimension();
    if (img.width != m.image_side || img.height != m.image_side)
        throw std::invalid_argument("dffs_score: image size differs from the model's side");

    std::vector<double> e(static_cast<std::size_t>(dim));
    for (int i = 0; i < dim; ++i)
        e[static_cast<std::size_t>(i)] =
            img.pixels[static_cast<std::size_t>(i)] - m.mean_face[static_cast<std::size_t>(i)];

    const int k = m.component_count();
    std::vector<double> proj(static_cast<std::size_t>(k), 0.0);
    for (int c = 0; c < k; ++c) {
        double s = 0.0;
        for (int i = 0; i < dim; ++i)
            s += m.basis(i, c) * e[static_cast<std::size_t>(i)];
        proj[static_cast<std::size_t>(c)] = s;
    }
    double dist2 = 0.0;
    for (int i = 0; i < dim; ++i) {
        double r = e[static_cast<std::size_t>(i)];
        for (int c = 0; c < k; ++c)
            r -= m.basis(i, c) * proj[static_cast<std::size_t>(c)];
        dist2 += r * r;
    }
    return -std::sqrt(dist2);
}

GrayImage standardize_image(const GrayImage& img)
{
    const std::size_t count = img.pixels.size();
    if (count == 0)
        throw std::invalid_argument("standardize_image: empty image");
    double sum = 0.0;
    for (double v : img.pixels) {
        if (!std::isfinite(v))
            throw std::invalid_argument("standardize_image: non-finite pixel");
        sum += v;
    }
    const double mean = sum / static_cast<double>(count);
    double var = 0.0;
    for (double v : img.pixels)
        var += (v - mean) * (v - mean);
    var /= static_cast<double>(count);
    const double sigma = std::sqrt(var);

    GrayImage out(img.width, img.height);
    if (sigma < kFlatPatchSigma)
        return out;
    for (std::size_t i = 0; i < count; ++i)
        out.pixels[i] = (img.pixels[i] - mean) / sigma;
    return out;
}

EigenfaceModel train_dffs_baseline(const std::vector<GrayImage>& images, int k)
{
    std::vector<GrayImage> standardized;
    standardized.reserve(images.size());
    for (const GrayImage& img : images)
        standardized.push_back(standardize_image(img));
    const PcaFactors f = pca_factors(standardized);
    if (k == 0)
        k = choose_component_count(f.eigenvalues);
    if (k < 1 || k >= f.m)
        throw std::invalid_argument("train_dffs_baseline: bad component count");
    if (k > f.usable)
        throw std::invalid_argument("train_dffs_baseline: fewer nonzero components than k");
    return assemble(f, k);
}

double dffs_quality(const EigenfaceModel& m, const GrayImage& img)
{
    return dffs_score(m, standardize_image(img));
}

} // namespace faceq
