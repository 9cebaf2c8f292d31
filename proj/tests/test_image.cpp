#include <doctest.h>

#include "faceq/image.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <vector>

using namespace faceq;

namespace {

GrayImage random_image(int w, int h, std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> u(0.0, 255.0);
    GrayImage img(w, h);
    for (double& p : img.pixels)
        p = u(rng);
    return img;
}

// Window positions by direct enumeration instead of the closed form.
int counted_positions(int side, int n, int stride)
{
    int count = 0;
    for (int p = 0; p + n <= side; p += stride)
        ++count;
    return count;
}

double patch_mean(const Patch& p)
{
    double s = 0.0;
    for (double v : p.values.values())
        s += v;
    return s / static_cast<double>(p.values.values().size());
}

double patch_var(const Patch& p)
{
    double m = patch_mean(p);
    double s = 0.0;
    for (double v : p.values.values())
        s += (v - m) * (v - m);
    return s / static_cast<double>(p.values.values().size());
}

} // namespace

TEST_CASE("log normalize maps known values")
{
    GrayImage img(2, 1);
    img.at(0, 0) = 0.0;
    img.at(0, 1) = 255.0;
    GrayImage out = log_normalize(img);
    CHECK(out.at(0, 0) == 0.0);
    CHECK(out.at(0, 1) == doctest::Approx(std::log(256.0)).epsilon(1e-15));
}

TEST_CASE("log normalize keeps an all-zero image all zero")
{
    GrayImage img(64, 64, 0.0);
    GrayImage out = log_normalize(img);
    CHECK(out == img);
}

TEST_CASE("log normalize is strictly monotone in pixel value")
{
    GrayImage img(3, 1);
    img.at(0, 0) = 10.0;
    img.at(0, 1) = 10.5;
    img.at(0, 2) = 200.0;
    GrayImage out = log_normalize(img);
    CHECK(out.at(0, 0) < out.at(0, 1));
    CHECK(out.at(0, 1) < out.at(0, 2));
}

TEST_CASE("log normalize rejects negative and non-finite pixels")
{
    GrayImage neg(2, 2, 1.0);
    neg.at(1, 1) = -0.5;
    CHECK_THROWS_AS(log_normalize(neg), std::invalid_argument);

    GrayImage nan(2, 2, 1.0);
    nan.at(0, 1) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(log_normalize(nan), std::invalid_argument);
}

TEST_CASE("patch config validation")
{
    PatchConfig bad;
    bad.patch_size = 8;
    bad.overlap = 8;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

    bad.overlap = -1;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

    bad.patch_size = 0;
    bad.overlap = 0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

    PatchConfig ok;
    CHECK_NOTHROW(ok.validate());
    CHECK(ok.stride() == 1);
}

TEST_CASE("patch counts for reference layouts")
{
    PatchConfig dense{8, 7};
    CHECK(dense.patch_count(64, 64) == 3249); // 57 * 57

    PatchConfig single{8, 7};
    CHECK(single.patch_count(8, 8) == 1);

    PatchConfig tiled{8, 0};
    CHECK(tiled.patch_count(64, 64) == 64);
}

TEST_CASE("patch count closed form matches enumeration across sizes and overlaps")
{
    for (int n : {3, 5, 8}) {
        for (int t = 0; t < n; ++t) {
            PatchConfig cfg{n, t};
            cfg.validate();
            for (int side = 8; side <= 128; ++side) {
                int expected = counted_positions(side, n, cfg.stride());
                CHECK(cfg.positions(side) == expected);
                CHECK(cfg.patch_count(side, side) == expected * expected);
            }
        }
    }
}

TEST_CASE("extract patches slices the image exactly in grid order")
{
    std::mt19937_64 rng(5);
    GrayImage img = random_image(16, 16, rng);
    PatchConfig cfg{8, 7};

    std::vector<Patch> patches = extract_patches(img, cfg);
    int per_axis = cfg.positions(16);
    REQUIRE(static_cast<int>(patches.size()) == per_axis * per_axis);

    for (int gr = 0; gr < per_axis; ++gr) {
        for (int gc = 0; gc < per_axis; ++gc) {
            const Patch& p = patches[static_cast<std::size_t>(gr) * per_axis + gc];
            CHECK(p.location_index == gr * per_axis + gc);
            REQUIRE(p.values.rows() == 8);
            REQUIRE(p.values.cols() == 8);
            for (int r = 0; r < 8; ++r)
                for (int c = 0; c < 8; ++c)
                    CHECK(p.values(r, c) == img.at(gr * cfg.stride() + r, gc * cfg.stride() + c));
        }
    }
}

TEST_CASE("extract patches covers the dense 64x64 layout")
{
    std::mt19937_64 rng(6);
    GrayImage img = random_image(64, 64, rng);
    std::vector<Patch> patches = extract_patches(img, PatchConfig{8, 7});
    CHECK(patches.size() == 3249);
    CHECK(patches.front().location_index == 0);
    CHECK(patches.back().location_index == 3248);
    // last patch is the bottom-right corner
    CHECK(patches.back().values(7, 7) == img.at(63, 63));
}

TEST_CASE("extract patches rejects images smaller than the patch")
{
    GrayImage img(6, 6, 1.0);
    CHECK_THROWS_AS(extract_patches(img, PatchConfig{8, 7}), std::invalid_argument);
}

TEST_CASE("normalize patch maps a constant patch to all zeros")
{
    Patch p;
    p.location_index = 3;
    p.values = Mat(8, 8, 42.0);
    Patch out = normalize_patch(p);
    CHECK(out.location_index == 3);
    for (double v : out.values.values())
        CHECK(v == 0.0);
}

TEST_CASE("normalize patch maps a balanced two-valued patch to plus minus one")
{
    Patch p;
    p.values = Mat(8, 8);
    for (int r = 0; r < 8; ++r)
        for (int c = 0; c < 8; ++c)
            p.values(r, c) = ((r + c) % 2 == 0) ? 10.0 : 20.0;
    Patch out = normalize_patch(p);
    for (int r = 0; r < 8; ++r)
        for (int c = 0; c < 8; ++c) {
            double expect = ((r + c) % 2 == 0) ? -1.0 : 1.0;
            CHECK(out.values(r, c) == doctest::Approx(expect).epsilon(1e-12));
        }
}

TEST_CASE("normalize patch output has zero mean and unit population variance")
{
    std::mt19937_64 rng(9);
    for (int rep = 0; rep < 50; ++rep) {
        Patch p;
        p.values = Mat(8, 8);
        std::uniform_real_distribution<double> u(0.0, 255.0);
        for (double& v : p.values.values())
            v = u(rng);

        Patch out = normalize_patch(p);
        CHECK(std::abs(patch_mean(out)) < 1e-12 * 64.0);
        CHECK(patch_var(out) == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("normalize patch is idempotent")
{
    std::mt19937_64 rng(10);
    Patch p;
    p.values = Mat(8, 8);
    std::uniform_real_distribution<double> u(0.0, 255.0);
    for (double& v : p.values.values())
        v = u(rng);

    Patch once = normalize_patch(p);
    Patch twice = normalize_patch(once);
    for (std::size_t i = 0; i < once.values.values().size(); ++i)
        CHECK(std::abs(once.values.values()[i] - twice.values.values()[i]) < 1e-9);
}

TEST_CASE("normalize patch is invariant to positive affine rescaling")
{
    std::mt19937_64 rng(12);
    Patch p;
    p.values = Mat(8, 8);
    std::uniform_real_distribution<double> u(0.0, 255.0);
    for (double& v : p.values.values())
        v = u(rng);

    for (double a : {0.5, 2.0, 10.0}) {
        for (double b : {-5.0, 0.0, 13.0}) {
            Patch q = p;
            for (double& v : q.values.values())
                v = a * v + b;
            Patch np = normalize_patch(p);
            Patch nq = normalize_patch(q);
            for (std::size_t i = 0; i < np.values.values().size(); ++i)
                CHECK(std::abs(np.values.values()[i] - nq.values.values()[i]) < 1e-9);
        }
    }
}

TEST_CASE("normalize patch treats near-flat patches as flat")
{
    Patch p;
    p.values = Mat(8, 8, 100.0);
    p.values(0, 0) += 1e-9; // population sigma well below the flat threshold
    Patch out = normalize_patch(p);
    for (double v : out.values.values())
        CHECK(v == 0.0);
}
