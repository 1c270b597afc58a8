#include "rrambb/image.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

#include "rrambb/types.hpp"

namespace rrambb {

namespace {

// Next whitespace-delimited header token, skipping '#' comments.
std::string header_token(std::istream& in) {
  std::string tok;
  int ch;
  while ((ch = in.get()) != EOF) {
    if (ch == '#') {
      while ((ch = in.get()) != EOF && ch != '\n') {
      }
      continue;
    }
    if (std::isspace(ch)) {
      if (!tok.empty()) break;
      continue;
    }
    tok.push_back(static_cast<char>(ch));
  }
  return tok;
}

int header_int(std::istream& in, const char* what) {
  const std::string tok = header_token(in);
  if (tok.empty() || tok.find_first_not_of("0123456789") != std::string::npos) {
    throw InputError(std::string("pgm: bad ") + what + " '" + tok + "'");
  }
  return std::stoi(tok);
}

}  // namespace

GrayImage read_pgm(std::istream& in) {
  if (header_token(in) != "P5") throw InputError("pgm: missing P5 magic");
  GrayImage img;
  img.width = header_int(in, "width");
  img.height = header_int(in, "height");
  const int maxval = header_int(in, "maxval");
  if (img.width <= 0 || img.height <= 0) throw InputError("pgm: empty image");
  if (maxval != 255) throw InputError("pgm: only maxval 255 is supported");
  img.pixels.resize(static_cast<std::size_t>(img.width) * img.height);
  in.read(reinterpret_cast<char*>(img.pixels.data()), static_cast<std::streamsize>(img.pixels.size()));
  if (in.gcount() != static_cast<std::streamsize>(img.pixels.size())) throw InputError("pgm: truncated pixel data");
  return img;
}

GrayImage read_pgm_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open image '" + path + "'");
  return read_pgm(in);
}

void write_pgm(const GrayImage& image, std::ostream& out) {
  if (image.pixels.size() != static_cast<std::size_t>(image.width) * image.height) {
    throw DimensionError("write_pgm: pixel count does not match width * height");
  }
  out << "P5\n" << image.width << ' ' << image.height << "\n255\n";
  out.write(reinterpret_cast<const char*>(image.pixels.data()), static_cast<std::streamsize>(image.pixels.size()));
}

void write_pgm_file(const GrayImage& image, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write image '" + path + "'");
  write_pgm(image, out);
}

GrayImage test_pattern(int width, int height) {
  if (width <= 0 || height <= 0) throw DimensionError("test_pattern: empty image");
  GrayImage img{width, height, std::vector<std::uint8_t>(static_cast<std::size_t>(width) * height)};
  const double cx = width / 2.0, cy = height / 2.0;
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const double r = std::hypot(x - cx, y - cy);
      double v = 255.0 * x / std::max(width - 1, 1);
      if (r < std::min(width, height) / 3.0) v = 127.5 + 127.5 * std::cos(r / 3.0);
      if (x < width / 4 && y < height / 4) v = ((x / 4 + y / 4) % 2) ? 255.0 : 0.0;
      img.pixels[static_cast<std::size_t>(y) * width + x] = static_cast<std::uint8_t>(std::lround(v));
    }
  }
  return img;
}

}  // namespace rrambb
