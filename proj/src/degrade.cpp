#include "faceq/degrade.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace faceq {

namespace {

int clampi(int v, int lo, int hi) { return v < lo ? lo : (v > hi ? hi : v); }

// Bilinear sample with edge replication.
double sample_bilinear(const GrayImage& img, double y, double x)
{
    const int x0 = static_cast<int>(std::floor(x));
    const int y0 = static_cast<int>(std::floor(y));
    const double fx = x - x0;
    const double fy = y - y0;
    const int xa = clampi(x0, 0, img.width - 1);
    const int xb = clampi(x0 + 1, 0, img.width - 1);
    const int ya = clampi(y0, 0, img.height - 1);
    const int yb = clampi(y0 + 1, 0, img.height - 1);
    const double top = img.at(ya, xa) * (1.0 - fx) + img.at(ya, xb) * fx;
    const double bot = img.at(yb, xa) * (1.0 - fx) + img.at(yb, xb) * fx;
    return top * (1.0 - fy) + bot * fy;
}

} // namespace

const char* kind_name(DegradationKind kind)
{
    switch (kind) {
    case DegradationKind::horizontal_shift: return "horizontal_shift";
    case DegradationKind::vertical_shift: return "vertical_shift";
    case DegradationKind::in_plane_rotation: return "in_plane_rotation";
    case DegradationKind::scale_change: return "scale_change";
    case DegradationKind::blur_resample: return "blur_resample";
    }
    return "unknown";
}

DegradationKind parse_kind(const std::string& name)
{
    for (DegradationKind k : all_kinds())
        if (name == kind_name(k))
            return k;
    throw std::invalid_argument("unknown degradation kind: " + name);
}

GrayImage shift(const GrayImage& img, int dx, int dy)
{
    if (std::abs(dx) >= img.width || std::abs(dy) >= img.height)
        throw std::invalid_argument("shift: displacement must be smaller than the image side");
    if (dx == 0 && dy == 0)
        return img;
    GrayImage out(img.width, img.height);
    for (int r = 0; r < img.height; ++r) {
        const int sr = clampi(r - dy, 0, img.height - 1);
        for (int c = 0; c < img.width; ++c) {
            const int sc = clampi(c - dx, 0, img.width - 1);
            out.at(r, c) = img.at(sr, sc);
        }
    }
    return out;
}

GrayImage rotate(const GrayImage& img, double angle_deg)
{
    if (!std::isfinite(angle_deg))
        throw std::invalid_argument("rotate: angle must be finite");
    if (angle_deg == 0.0)
        return img;
    const double rad = angle_deg * std::numbers::pi / 180.0;
    const double cs = std::cos(rad);
    const double sn = std::sin(rad);
    const double cx = (img.width - 1) / 2.0;
    const double cy = (img.height - 1) / 2.0;
    GrayImage out(img.width, img.height);
    for (int r = 0; r < img.height; ++r) {
        for (int c = 0; c < img.width; ++c) {
            const double xr = c - cx;
            const double yr = r - cy;
            // inverse map: rotate the destination grid by -angle
            const double sx = cx + cs * xr + sn * yr;
            const double sy = cy - sn * xr + cs * yr;
            out.at(r, c) = sample_bilinear(img, sy, sx);
        }
    }
    return out;
}

GrayImage rescale(const GrayImage& img, double factor)
{
    if (!(factor >= 0.1 && factor <= 10.0))
        throw std::invalid_argument("rescale: factor must be in [0.1, 10]");
    if (factor == 1.0)
        return img;
    const double cx = (img.width - 1) / 2.0;
    const double cy = (img.height - 1) / 2.0;
    GrayImage out(img.width, img.height);
    for (int r = 0; r < img.height; ++r) {
        for (int c = 0; c < img.width; ++c) {
            const double sx = cx + (c - cx) / factor;
            const double sy = cy + (r - cy) / factor;
            out.at(r, c) = sample_bilinear(img, sy, sx);
        }
    }
    return out;
}

GrayImage blur_resample(const GrayImage& img, int intermediate_side)
{
    if (intermediate_side < 1)
        throw std::invalid_argument("blur_resample: intermediate side must be positive");
    if (intermediate_side > std::min(img.width, img.height))
        throw std::invalid_argument("blur_resample: intermediate side exceeds the image side");
    if (intermediate_side == img.width && intermediate_side == img.height)
        return img;
    const GrayImage small = downsample_area(img, intermediate_side, intermediate_side);
    return resize_bilinear(small, img.width, img.height);
}

GrayImage apply_degradation(const GrayImage& img, const Degradation& d)
{
    switch (d.kind) {
    case DegradationKind::horizontal_shift:
        return shift(img, static_cast<int>(std::lround(d.magnitude)), 0);
    case DegradationKind::vertical_shift:
        return shift(img, 0, static_cast<int>(std::lround(d.magnitude)));
    case DegradationKind::in_plane_rotation:
        return rotate(img, d.magnitude);
    case DegradationKind::scale_change:
        return rescale(img, d.magnitude);
    case DegradationKind::blur_resample:
        return blur_resample(img, static_cast<int>(std::lround(d.magnitude)));
    }
    throw std::invalid_argument("apply_degradation: unknown kind");
}

double identity_magnitude(DegradationKind kind, int image_side)
{
    switch (kind) {
    case DegradationKind::scale_change: return 1.0;
    case DegradationKind::blur_resample: return image_side;
    default: return 0.0;
    }
}

bool is_identity(const Degradation& d, int image_side)
{
    return d.magnitude == identity_magnitude(d.kind, image_side);
}

std::vector<double> preset_grid(DegradationKind kind, int image_side)
{
    switch (kind) {
    case DegradationKind::horizontal_shift:
    case DegradationKind::vertical_shift:
        return {0, -2, 2, -4, 4, -6, 6, -8, 8};
    case DegradationKind::in_plane_rotation:
        return {0, -10, 10, -20, 20, -30, 30};
    case DegradationKind::scale_change:
        return {1.0, 0.9, 1.1, 0.8, 1.2, 0.7, 1.3};
    case DegradationKind::blur_resample:
        return {static_cast<double>(image_side), static_cast<double>(image_side * 3 / 4),
                static_cast<double>(image_side / 2), static_cast<double>(image_side / 4)};
    }
    throw std::invalid_argument("preset_grid: unknown kind");
}

std::vector<DegradationKind> all_kinds()
{
    return {DegradationKind::horizontal_shift, DegradationKind::vertical_shift,
            DegradationKind::in_plane_rotation, DegradationKind::scale_change,
            DegradationKind::blur_resample};
}

GrayImage resize_bilinear(const GrayImage& img, int out_width, int out_height)
{
    if (out_width < 1 || out_height < 1)
        throw std::invalid_argument("resize_bilinear: output size must be positive");
    if (img.width < 1 || img.height < 1)
        throw std::invalid_argument("resize_bilinear: empty input");
    if (out_width == img.width && out_height == img.height)
        return img;
    const double sx = static_cast<double>(img.width) / out_width;
    const double sy = static_cast<double>(img.height) / out_height;
    GrayImage out(out_width, out_height);
    for (int r = 0; r < out_height; ++r) {
        const double y = (r + 0.5) * sy - 0.5;
        for (int c = 0; c < out_width; ++c) {
            const double x = (c + 0.5) * sx - 0.5;
            out.at(r, c) = sample_bilinear(img, y, x);
        }
    }
    return out;
}

GrayImage downsample_area(const GrayImage& img, int out_width, int out_height)
{
    if (out_width < 1 || out_height < 1)
        throw std::invalid_argument("downsample_area: output size must be positive");
    if (out_width > img.width || out_height > img.height)
        throw std::invalid_argument("downsample_area: output larger than input");
    if (out_width == img.width && out_height == img.height)
        return img;
    const double sx = static_cast<double>(img.width) / out_width;
    const double sy = static_cast<double>(img.height) / out_height;
    GrayImage out(out_width, out_height);
    for (int r = 0; r < out_height; ++r) {
        const double y0 = r * sy;
        const double y1 = (r + 1) * sy;
        for (int c = 0; c < out_width; ++c) {
            const double x0 = c * sx;
            const double x1 = (c + 1) * sx;
            double acc = 0.0;
            double weight = 0.0;
            for (int yy = static_cast<int>(std::floor(y0)); yy < y1 && yy < img.height; ++yy) {
                const double wy = std::min<double>(yy + 1, y1) - std::max<double>(yy, y0);
                if (wy <= 0.0)
                    continue;
                for (int xx = static_cast<int>(std::floor(x0)); xx < x1 && xx < img.width; ++xx) {
                    const double wx = std::min<double>(xx + 1, x1) - std::max<double>(xx, x0);
                    if (wx <= 0.0)
                        continue;
                    acc += img.at(yy, xx) * wx * wy;
                    weight += wx * wy;
                }
            }
            out.at(r, c) = acc / weight;
        }
    }
    return out;
}

} // namespace faceq
