#ifndef FACEQ_DEGRADE_HPP
#define FACEQ_DEGRADE_HPP

#include "faceq/image.hpp"

#include <string>
#include <vector>

namespace faceq {

enum class DegradationKind {
    horizontal_shift,
    vertical_shift,
    in_plane_rotation,
    scale_change,
    blur_resample,
};

// One synthetic degradation. Magnitude units depend on the kind: pixels for
// shifts, degrees for rotation, unitless factor for scale, intermediate side
// length in pixels for blur.
struct Degradation {
    DegradationKind kind = DegradationKind::horizontal_shift;
    double magnitude = 0.0;
};

const char* kind_name(DegradationKind kind);
DegradationKind parse_kind(const std::string& name);

// Translate content by (dx, dy); positive dx moves content right, positive dy
// moves content down. Out-of-range sources use edge replication.
GrayImage shift(const GrayImage& img, int dx, int dy);

// Rotate content about the image center by `angle_deg` (positive rotates the
// content counter-clockwise in image coordinates). Bilinear inverse mapping
// with edge replication. angle 0 is a bit-exact copy.
GrayImage rotate(const GrayImage& img, double angle_deg);

// Scale content about the image center; canvas size unchanged. factor < 1
// shrinks (edge replication fills the surround), factor > 1 magnifies and
// crops. factor 1 is a bit-exact copy.
GrayImage rescale(const GrayImage& img, double factor);

// Box-average down to intermediate_side x intermediate_side, then bilinear
// back up. intermediate_side equal to the image side is a bit-exact copy.
GrayImage blur_resample(const GrayImage& img, int intermediate_side);

GrayImage apply_degradation(const GrayImage& img, const Degradation& d);

// Identity magnitude for a kind: 0 for shifts/rotation, 1 for scale, the
// image side for blur.
double identity_magnitude(DegradationKind kind, int image_side);
bool is_identity(const Degradation& d, int image_side);

// Canonical magnitude grids, identity entry included. Blur grid for side s is
// {s, 3s/4, s/2, s/4}.
std::vector<double> preset_grid(DegradationKind kind, int image_side);
std::vector<DegradationKind> all_kinds();

// General resamplers shared by blur_resample and the CLI resize policy.
GrayImage resize_bilinear(const GrayImage& img, int out_width, int out_height);
GrayImage downsample_area(const GrayImage& img, int out_width, int out_height);

} // namespace faceq

#endif
