#include <doctest.h>

#include "faceq/dct.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <set>
#include <stdexcept>
#include <utility>
#include <vector>

using namespace faceq;

namespace {

// Textbook orthonormal 2D DCT, quadruple loop. Slow but independent of the
// separable implementation under test.
Mat naive_dct2(const Mat& p)
{
    int n = p.rows();
    Mat c(n, n);
    for (int u = 0; u < n; ++u) {
        for (int v = 0; v < n; ++v) {
            double au = (u == 0) ? std::sqrt(1.0 / n) : std::sqrt(2.0 / n);
            double av = (v == 0) ? std::sqrt(1.0 / n) : std::sqrt(2.0 / n);
            double sum = 0.0;
            for (int r = 0; r < n; ++r)
                for (int col = 0; col < n; ++col)
                    sum += p(r, col)
                        * std::cos((2.0 * r + 1.0) * u * std::numbers::pi / (2.0 * n))
                        * std::cos((2.0 * col + 1.0) * v * std::numbers::pi / (2.0 * n));
            c(u, v) = au * av * sum;
        }
    }
    return c;
}

Mat random_patch(int n, std::mt19937_64& rng, double lo = -1.0, double hi = 1.0)
{
    std::uniform_real_distribution<double> u(lo, hi);
    Mat p(n, n);
    for (double& v : p.values())
        v = u(rng);
    return p;
}

double sum_squares(const Mat& m)
{
    double s = 0.0;
    for (double v : m.values())
        s += v * v;
    return s;
}

} // namespace

TEST_CASE("dct basis matrix is orthonormal")
{
    for (int n : {2, 3, 8, 16}) {
        const Mat& t = dct_matrix(n);
        CHECK(max_abs_diff(t * transpose(t), Mat::identity(n)) < 1e-12);
    }
}

TEST_CASE("dct of zeros is zeros and of a constant is a pure dc term")
{
    Mat zeros(8, 8, 0.0);
    Mat cz = dct2(zeros);
    for (double v : cz.values())
        CHECK(v == 0.0);

    Mat constant(8, 8, 3.25);
    Mat cc = dct2(constant);
    CHECK(cc(0, 0) == doctest::Approx(8.0 * 3.25).epsilon(1e-12));
    for (int u = 0; u < 8; ++u)
        for (int v = 0; v < 8; ++v)
            if (u != 0 || v != 0)
                CHECK(std::abs(cc(u, v)) < 1e-12);
}

TEST_CASE("dct matches the quadruple-loop reference transform")
{
    std::mt19937_64 rng(314);
    for (int rep = 0; rep < 100; ++rep) {
        Mat p = random_patch(8, rng);
        Mat fast = dct2(p);
        Mat slow = naive_dct2(p);
        CHECK(max_abs_diff(fast, slow) < 1e-9);
    }
}

TEST_CASE("dct preserves energy")
{
    std::mt19937_64 rng(315);
    for (int rep = 0; rep < 50; ++rep) {
        Mat p = random_patch(8, rng, -3.0, 3.0);
        Mat c = dct2(p);
        CHECK(sum_squares(c) == doctest::Approx(sum_squares(p)).epsilon(1e-12));
    }
}

TEST_CASE("dct is linear")
{
    std::mt19937_64 rng(316);
    Mat a = random_patch(8, rng);
    Mat b = random_patch(8, rng);
    double alpha = 2.5, beta = -0.75;

    Mat combo(8, 8);
    for (int r = 0; r < 8; ++r)
        for (int c = 0; c < 8; ++c)
            combo(r, c) = alpha * a(r, c) + beta * b(r, c);

    Mat ca = dct2(a);
    Mat cb = dct2(b);
    Mat cc = dct2(combo);
    for (int r = 0; r < 8; ++r)
        for (int c = 0; c < 8; ++c)
            CHECK(std::abs(cc(r, c) - (alpha * ca(r, c) + beta * cb(r, c))) < 1e-9);
}

TEST_CASE("idct inverts dct")
{
    std::mt19937_64 rng(317);
    for (int rep = 0; rep < 20; ++rep) {
        Mat p = random_patch(8, rng, 0.0, 255.0);
        Mat back = idct2(dct2(p));
        CHECK(max_abs_diff(back, p) < 1e-9);
    }
}

TEST_CASE("zigzag order starts along the antidiagonals and covers every cell once")
{
    const auto& order = zigzag_order(8);
    REQUIRE(order.size() == 64);

    using P = std::pair<int, int>;
    CHECK(order[0] == P{0, 0});
    CHECK(order[1] == P{0, 1});
    CHECK(order[2] == P{1, 0});
    CHECK(order[3] == P{2, 0});
    CHECK(order[4] == P{1, 1});
    CHECK(order[5] == P{0, 2});

    std::set<P> seen(order.begin(), order.end());
    CHECK(seen.size() == 64);

    const auto& small = zigzag_order(2);
    REQUIRE(small.size() == 4);
    CHECK(small[0] == P{0, 0});
    CHECK(small[1] == P{0, 1});
    CHECK(small[2] == P{1, 0});
    CHECK(small[3] == P{1, 1});
}

TEST_CASE("select low freq takes the post-dc zigzag prefix")
{
    Mat c(8, 8);
    int counter = 0;
    for (const auto& [r, col] : zigzag_order(8))
        c(r, col) = static_cast<double>(counter++); // cell holds its zigzag position

    FeatureVector f = select_low_freq(c, 3);
    REQUIRE(f.size() == 3);
    CHECK(f[0] == 1.0);
    CHECK(f[1] == 2.0);
    CHECK(f[2] == 3.0);

    FeatureVector f5 = select_low_freq(c, 5);
    REQUIRE(f5.size() == 5);
    CHECK(f5[3] == 4.0);
    CHECK(f5[4] == 5.0);

    FeatureVector fmax = select_low_freq(c, 63);
    CHECK(fmax.size() == 63);
    CHECK(fmax.back() == 63.0);
}

TEST_CASE("select low freq rejects out-of-range dimensions")
{
    Mat c(8, 8, 0.0);
    CHECK_THROWS_AS(select_low_freq(c, 0), std::invalid_argument);
    CHECK_THROWS_AS(select_low_freq(c, 64), std::invalid_argument);
}

TEST_CASE("a pure horizontal cosine basis patch yields the unit feature vector")
{
    // Patch equal to the (0,1) DCT basis function: feature (1, 0, 0).
    const Mat& t = dct_matrix(8);
    Mat p(8, 8);
    for (int r = 0; r < 8; ++r)
        for (int c = 0; c < 8; ++c)
            p(r, c) = t(0, r) * t(1, c);

    Patch patch;
    patch.values = p;
    FeatureVector f = patch_features(patch, 3);
    REQUIRE(f.size() == 3);
    CHECK(f[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(f[1]) < 1e-12);
    CHECK(std::abs(f[2]) < 1e-12);
}

TEST_CASE("a flat patch yields the zero feature vector after normalization")
{
    Patch p;
    p.values = Mat(8, 8, 7.0);
    FeatureVector f = patch_features(normalize_patch(p), 3);
    for (double v : f)
        CHECK(v == 0.0);
}

TEST_CASE("patch features equal dct plus zigzag selection")
{
    std::mt19937_64 rng(318);
    Patch p;
    p.values = random_patch(8, rng);
    FeatureVector direct = patch_features(p, 3);
    FeatureVector manual = select_low_freq(dct2(p.values), 3);
    REQUIRE(direct.size() == manual.size());
    for (std::size_t i = 0; i < direct.size(); ++i)
        CHECK(direct[i] == manual[i]);
}
