#ifndef FACEQ_IMAGE_IO_HPP
#define FACEQ_IMAGE_IO_HPP

#include "faceq/image.hpp"

#include <string>

namespace faceq {

// Reads an 8-bit PGM (P5 or P2) or PNG file into a grayscale image. Color PNG
// input is converted with the usual luma weights 0.299/0.587/0.114.
GrayImage read_image(const std::string& path);

// Writers round to the nearest integer and clamp to [0, 255].
void write_pgm(const GrayImage& img, const std::string& path);
void write_png(const GrayImage& img, const std::string& path);

// Dispatches on the file extension (.pgm or .png, case-insensitive).
void save_image(const GrayImage& img, const std::string& path);

bool has_image_extension(const std::string& path);

} // namespace faceq

#endif
