#ifndef FACEQ_SYNTHETIC_HPP
#define FACEQ_SYNTHETIC_HPP

#include "faceq/image.hpp"

#include <cstdint>
#include <vector>

namespace faceq {

// Deterministic face-like test images: a shared structured base pattern plus a
// per-identity low-frequency field plus pixel noise, clamped to [0, 255].
std::vector<GrayImage> generate_synthetic_faces(std::uint64_t seed, int count, int side);

} // namespace faceq

#endif
