#ifndef FACEQ_IMAGE_HPP
#define FACEQ_IMAGE_HPP

#include "faceq/linalg.hpp"

#include <cstddef>
#include <vector>

namespace faceq {

// Grayscale image with real-valued pixels, row-major. Raw inputs live in
// [0, 255]; intermediate stages (log domain) use whatever range falls out.
struct GrayImage {
    int width = 0;
    int height = 0;
    std::vector<double> pixels;

    GrayImage() = default;
    GrayImage(int w, int h, double fill = 0.0)
        : width(w), height(h), pixels(static_cast<std::size_t>(w) * h, fill) {}

    double& at(int r, int c) { return pixels[static_cast<std::size_t>(r) * width + c]; }
    double at(int r, int c) const { return pixels[static_cast<std::size_t>(r) * width + c]; }

    bool same_size(const GrayImage& o) const { return width == o.width && height == o.height; }
    bool operator==(const GrayImage&) const = default;
};

// Square sliding-window layout: patches of side `patch_size` whose neighbours
// overlap by `overlap` pixels. Partial border patches are excluded.
struct PatchConfig {
    int patch_size = 8;
    int overlap = 7;

    int stride() const { return patch_size - overlap; }

    // Number of valid window positions along an axis of length `side`,
    // or 0 when the axis is too short.
    int positions(int side) const
    {
        if (side < patch_size)
            return 0;
        return (side - patch_size) / stride() + 1;
    }

    int patch_count(int width, int height) const { return positions(width) * positions(height); }

    void validate() const;
};

struct Patch {
    int location_index = 0;
    Mat values; // patch_size x patch_size
};

// Per-pixel ln(p + 1). Rejects negative or non-finite pixels.
GrayImage log_normalize(const GrayImage& img);

// All full patches in row-major grid order. Patch (gr, gc) covers image rows
// [gr*stride, gr*stride + n) and columns [gc*stride, gc*stride + n).
std::vector<Patch> extract_patches(const GrayImage& img, const PatchConfig& cfg);

// Zero mean, unit variance (population convention). A patch whose standard
// deviation falls below kFlatPatchSigma comes back all zeros.
Patch normalize_patch(const Patch& p);

inline constexpr double kFlatPatchSigma = 1e-8;

} // namespace faceq

#endif
