#include "faceq/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace faceq {

namespace {

constexpr double kPi = 3.14159265358979323846;

// std::normal_distribution is implementation-defined, so the generator rolls
// its own Box-Muller transform to keep output bit-identical across toolchains.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double uniform()
    {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi)
    {
        return lo + (hi - lo) * uniform();
    }

    double normal()
    {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = 0.0;
        do {
            u1 = uniform();
        } while (u1 <= 0.0);
        const double u2 = uniform();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        spare_ = radius * std::sin(2.0 * kPi * u2);
        has_spare_ = true;
        return radius * std::cos(2.0 * kPi * u2);
    }

private:
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

double smoothstep(double edge0, double edge1, double x)
{
    double t = (x - edge0) / (edge1 - edge0);
    t = std::clamp(t, 0.0, 1.0);
    return t * t * (3.0 - 2.0 * t);
}

std::vector<double> base_pattern(int side)
{
    std::vector<double> base(static_cast<std::size_t>(side) * side);
    for (int r = 0; r < side; ++r) {
        const double v = (r + 0.5) / side;
        for (int c = 0; c < side; ++c) {
            const double u = (c + 0.5) / side;

            const double fx = (u - 0.5) / 0.32;
            const double fy = (v - 0.52) / 0.42;
            const double mask = 1.0 - smoothstep(0.92, 1.08, std::sqrt(fx * fx + fy * fy));
            double value = 58.0 + 92.0 * mask;

            for (int s = -1; s <= 1; s += 2) {
                const double ex = 0.5 + s * 0.13;
                const double de = std::hypot(u - ex, v - 0.40);
                value -= 55.0 * (1.0 - smoothstep(0.024, 0.066, de));
                const double ds = std::hypot(u - (ex + 0.014), v - 0.388);
                value += 14.0 * (1.0 - smoothstep(0.004, 0.028, ds));

                const double brow = (1.0 - smoothstep(0.006, 0.030, std::abs(v - 0.315)))
                                    * (1.0 - smoothstep(0.050, 0.092, std::abs(u - ex)));
                value -= 32.0 * brow;

                const double dn = std::hypot(u - (0.5 + s * 0.040), v - 0.615);
                value -= 25.0 * (1.0 - smoothstep(0.005, 0.027, dn));
            }

            const double ridge = (1.0 - smoothstep(0.008, 0.036, std::abs(u - 0.5)))
                                 * smoothstep(0.39, 0.46, v) * (1.0 - smoothstep(0.54, 0.61, v));
            value += 22.0 * ridge;

            const double mouth = (1.0 - smoothstep(0.008, 0.040, std::abs(v - 0.705)))
                                 * (1.0 - smoothstep(0.080, 0.120, std::abs(u - 0.5)));
            value -= 40.0 * mouth;

            const double x = static_cast<double>(c);
            const double y = static_cast<double>(r);
            const double texture = 5.0 * std::sin(2.0 * kPi * y / 8.0 + 1.3) * std::sin(2.0 * kPi * x / 16.0 + 0.4)
                                   + 2.2 * std::sin(2.0 * kPi * x / 4.8 + 0.7) * std::cos(2.0 * kPi * y / 9.5 + 2.1)
                                   + 1.5 * std::cos(2.0 * kPi * (x + y) / 6.3 + 0.9);
            value += mask * texture;

            base[static_cast<std::size_t>(r) * side + c] = value;
        }
    }
    return base;
}

} // namespace

std::vector<GrayImage> generate_synthetic_faces(std::uint64_t seed, int count, int side)
{
    if (count < 1)
        throw std::invalid_argument("generate_synthetic_faces: count must be >= 1");
    if (side < 1)
        throw std::invalid_argument("generate_synthetic_faces: side must be >= 1");

    const std::vector<double> base = base_pattern(side);
    Rng rng(seed);

    constexpr int kFieldModes = 6;
    std::vector<GrayImage> faces;
    faces.reserve(static_cast<std::size_t>(count));
    for (int n = 0; n < count; ++n) {
        double amp[kFieldModes];
        double freq_x[kFieldModes];
        double freq_y[kFieldModes];
        double phase[kFieldModes];
        for (int k = 0; k < kFieldModes; ++k) {
            amp[k] = 3.0 + 2.2 * std::abs(rng.normal());
            freq_x[k] = rng.uniform(-2.5, 2.5);
            freq_y[k] = rng.uniform(-2.5, 2.5);
            phase[k] = rng.uniform(0.0, 2.0 * kPi);
        }

        GrayImage img(side, side);
        for (int r = 0; r < side; ++r) {
            const double v = (r + 0.5) / side;
            for (int c = 0; c < side; ++c) {
                const double u = (c + 0.5) / side;
                double field = 0.0;
                for (int k = 0; k < kFieldModes; ++k)
                    field += amp[k] * std::cos(2.0 * kPi * (freq_x[k] * u + freq_y[k] * v) + phase[k]);
                const double noise = 2.0 * rng.normal();
                const double value = base[static_cast<std::size_t>(r) * side + c] + field + noise;
                img.at(r, c) = std::clamp(value, 0.0, 255.0);
            }
        }
        faces.push_back(std::move(img));
    }
    return faces;
}

} // namespace faceq
