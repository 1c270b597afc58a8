#pragma once

// Binary PGM (P5), 8-bit grayscale.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace rrambb {

struct GrayImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;  // row-major

  bool operator==(const GrayImage&) const = default;
};

/// Throws InputError on malformed input or maxval other than 255.
GrayImage read_pgm(std::istream& in);
GrayImage read_pgm_file(const std::string& path);

void write_pgm(const GrayImage& image, std::ostream& out);
void write_pgm_file(const GrayImage& image, const std::string& path);

/// Deterministic test pattern: gradients, rings and a checker block.
GrayImage test_pattern(int width, int height);

}  // namespace rrambb
