#pragma once

#include <stdexcept>
#include <string>

#include "kmit/image.hpp"

namespace kmit {

struct PpmParseError : std::runtime_error {
    PpmParseError(const std::string& what, std::size_t byte_offset);
    std::size_t offset;
};

/// Binary P6, 8-bit, maxval 255. Intensities are mapped to [0,1] on read.
ImageTensor read_ppm(const std::string& path);

/// Writes binary P6; values are clamped to [0,1] and quantised with
/// round-half-up at 255 levels.
void write_ppm(const std::string& path, const ImageTensor& image);

/// Writes the validity pattern as binary P5 (255 = kept, 0 = erased).
void write_pgm(const std::string& path, const Mask& mask);

} // namespace kmit
