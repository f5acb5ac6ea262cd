#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fracbv/domain.hpp"
#include "fracbv/grid.hpp"

namespace fracbv {

/// Grayscale raster, row-major, row 0 at the top.
struct ImageBuffer {
  int width = 0;
  int height = 0;
  int max_value = 255;
  std::vector<std::uint16_t> pixels;

  std::uint16_t at(int x, int y) const { return pixels[static_cast<std::size_t>(y) * width + x]; }
  bool valid() const;
};

/// Parses P2 or P5 data with maxval 255 or 65535.
ImageBuffer parse_pgm(const std::string& bytes);
ImageBuffer read_pgm(const std::string& path);

/// Binary P5 encoding (16-bit samples big-endian).
std::string encode_pgm(const ImageBuffer& img);
void write_pgm(const std::string& path, const ImageBuffer& img);

/// Pixel centers at ((x + 1/2) h, (y + 1/2) h), h = 1 / max(W, H), values in [0, 1].
/// Without a domain the mask is the full image rectangle.
ScalarField image_to_field(const ImageBuffer& img, const std::optional<ConvexDomain>& domain = std::nullopt);

/// The rectangle [0, W h] x [0, H h] covered by the pixels.
ConvexDomain image_rectangle(const ImageBuffer& img);

/// Clamps to [0, 1] and rounds to the nearest level.
ImageBuffer field_to_image(const ScalarField& u, int width, int height, int max_value = 255);

}  // namespace fracbv
