#include "faceq/image.hpp"

#include <cmath>
#include <stdexcept>

namespace faceq {

void PatchConfig::validate() const
{
    if (patch_size <= 0)
        throw std::invalid_argument("patch_size must be positive");
    if (overlap < 0 || overlap >= patch_size)
        throw std::invalid_argument("overlap must satisfy 0 <= overlap < patch_size");
}

GrayImage log_normalize(const GrayImage& img)
{
    GrayImage out(img.width, img.height);
    for (std::size_t i = 0; i < img.pixels.size(); ++i) {
        const double p = img.pixels[i];
        if (!(p >= 0.0) || !std::isfinite(p))
            throw std::invalid_argument("log_normalize: pixel negative or non-finite");
        out.pixels[i] = std::log(p + 1.0);
    }
    return out;
}

std::vector<Patch> extract_patches(const GrayImage& img, const PatchConfig& cfg)
{
    cfg.validate();
    const int n = cfg.patch_size;
    const int stride = cfg.stride();
    const int rows = cfg.positions(img.height);
    const int cols = cfg.positions(img.width);
    if (rows < 1 || cols < 1)
        throw std::invalid_argument("extract_patches: image smaller than patch size");

    std::vector<Patch> patches;
    patches.reserve(static_cast<std::size_t>(rows) * cols);
    for (int gr = 0; gr < rows; ++gr) {
        for (int gc = 0; gc < cols; ++gc) {
            Patch p;
            p.location_index = gr * cols + gc;
            p.values = Mat(n, n);
            const int r0 = gr * stride;
            const int c0 = gc * stride;
            for (int r = 0; r < n; ++r)
                for (int c = 0; c < n; ++c)
                    p.values(r, c) = img.at(r0 + r, c0 + c);
            patches.push_back(std::move(p));
        }
    }
    return patches;
}

Patch normalize_patch(const Patch& p)
{
    const auto& v = p.values.values();
    const std::size_t count = v.size();
    if (count == 0)
        throw std::invalid_argument("normalize_patch: empty patch");

    double sum = 0.0;
    for (double x : v) {
        if (!std::isfinite(x))
            throw std::invalid_argument("normalize_patch: non-finite value");
        sum += x;
    }
    const double mean = sum / static_cast<double>(count);

    double var = 0.0;
    for (double x : v)
        var += (x - mean) * (x - mean);
    var /= static_cast<double>(count);
    const double sigma = std::sqrt(var);

    Patch out;
    out.location_index = p.location_index;
    out.values = Mat(p.values.rows(), p.values.cols());
    if (sigma < kFlatPatchSigma)
        return out; // flat patch: all zeros
    for (std::size_t i = 0; i < count; ++i)
        out.values.values()[i] = (v[i] - mean) / sigma;
    return out;
}

} // namespace faceq
