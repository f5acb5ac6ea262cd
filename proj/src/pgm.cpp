#include "fracbv/pgm.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

#include "fracbv/error.hpp"

namespace fracbv {

namespace {

class HeaderReader {
 public:
  explicit HeaderReader(const std::string& bytes) : s_(bytes) {}

  void skip_space() {
    while (pos_ < s_.size()) {
      const unsigned char c = s_[pos_];
      if (c == '#') {
        while (pos_ < s_.size() && s_[pos_] != '\n' && s_[pos_] != '\r') ++pos_;
      } else if (std::isspace(c)) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  long integer(const char* what) {
    skip_space();
    const std::size_t start = pos_;
    long v = 0;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
      v = v * 10 + (s_[pos_] - '0');
      if (v > 1000000000L) throw ParseError(std::string("pgm: ") + what + " out of range", start);
      ++pos_;
    }
    if (pos_ == start) {
      if (pos_ >= s_.size()) throw IoError(std::string("pgm: truncated before ") + what);
      throw ParseError(std::string("pgm: expected ") + what, start);
    }
    return v;
  }

  std::size_t pos() const { return pos_; }
  void advance() { ++pos_; }

 private:
  const std::string& s_;
  std::size_t pos_ = 0;
};

}  // namespace

bool ImageBuffer::valid() const {
  if (width <= 0 || height <= 0) return false;
  if (max_value != 255 && max_value != 65535) return false;
  if (pixels.size() != static_cast<std::size_t>(width) * height) return false;
  return std::all_of(pixels.begin(), pixels.end(), [this](std::uint16_t p) { return p <= max_value; });
}

ImageBuffer parse_pgm(const std::string& bytes) {
  if (bytes.size() < 2) throw IoError("pgm: file too short");
  if (bytes[0] != 'P' || (bytes[1] != '2' && bytes[1] != '5')) {
    throw ParseError("pgm: unsupported magic '" + bytes.substr(0, 2) + "'", 0);
  }
  const bool binary = bytes[1] == '5';
  HeaderReader r(bytes);
  r.advance();
  r.advance();
  const std::size_t after_magic = r.pos();
  if (after_magic < bytes.size() && !std::isspace(static_cast<unsigned char>(bytes[after_magic])) &&
      bytes[after_magic] != '#') {
    throw ParseError("pgm: malformed magic", after_magic);
  }
  ImageBuffer img;
  std::size_t at = r.pos();
  const long w = r.integer("width");
  const long h = r.integer("height");
  if (w <= 0 || h <= 0) throw ParseError("pgm: empty image", at);
  r.skip_space();
  at = r.pos();
  const long maxval = r.integer("maxval");
  if (maxval != 255 && maxval != 65535) throw ParseError("pgm: maxval must be 255 or 65535", at);
  img.width = static_cast<int>(w);
  img.height = static_cast<int>(h);
  img.max_value = static_cast<int>(maxval);
  const std::size_t count = static_cast<std::size_t>(w) * static_cast<std::size_t>(h);
  img.pixels.resize(count);
  if (binary) {
    std::size_t pos = r.pos();
    if (pos >= bytes.size() || !std::isspace(static_cast<unsigned char>(bytes[pos]))) {
      if (pos >= bytes.size()) throw IoError("pgm: truncated payload");
      throw ParseError("pgm: expected whitespace after maxval", pos);
    }
    ++pos;
    const std::size_t bpp = maxval > 255 ? 2 : 1;
    if (bytes.size() - pos < count * bpp) throw IoError("pgm: truncated payload");
    for (std::size_t i = 0; i < count; ++i) {
      const auto* p = reinterpret_cast<const unsigned char*>(bytes.data() + pos + i * bpp);
      const unsigned v = bpp == 2 ? (unsigned(p[0]) << 8) | p[1] : p[0];
      if (v > static_cast<unsigned>(maxval)) throw ParseError("pgm: sample exceeds maxval", pos + i * bpp);
      img.pixels[i] = static_cast<std::uint16_t>(v);
    }
  } else {
    for (std::size_t i = 0; i < count; ++i) {
      r.skip_space();
      at = r.pos();
      const long v = r.integer("sample");
      if (v > maxval) throw ParseError("pgm: sample exceeds maxval", at);
      img.pixels[i] = static_cast<std::uint16_t>(v);
    }
  }
  return img;
}

ImageBuffer read_pgm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("pgm: cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_pgm(ss.str());
}

std::string encode_pgm(const ImageBuffer& img) {
  if (!img.valid()) throw InvalidArgument("pgm: invalid image buffer");
  std::string out = "P5\n" + std::to_string(img.width) + " " + std::to_string(img.height) + "\n" +
                    std::to_string(img.max_value) + "\n";
  const bool wide = img.max_value > 255;
  out.reserve(out.size() + img.pixels.size() * (wide ? 2 : 1));
  for (std::uint16_t p : img.pixels) {
    if (wide) out.push_back(static_cast<char>(p >> 8));
    out.push_back(static_cast<char>(p & 0xff));
  }
  return out;
}

void write_pgm(const std::string& path, const ImageBuffer& img) {
  const std::string data = encode_pgm(img);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("pgm: cannot write " + path);
  out.write(data.data(), static_cast<std::streamsize>(data.size()));
  if (!out) throw IoError("pgm: write failed for " + path);
}

ConvexDomain image_rectangle(const ImageBuffer& img) {
  const double h = 1.0 / std::max(img.width, img.height);
  return ConvexDomain::rectangle(Point(0.0, 0.0), Point(img.width * h, img.height * h));
}

ScalarField image_to_field(const ImageBuffer& img, const std::optional<ConvexDomain>& domain) {
  if (!img.valid()) throw InvalidArgument("pgm: invalid image buffer");
  if (img.width < 2 || img.height < 2) throw InvalidArgument("pgm: images need at least 2x2 pixels");
  const double h = 1.0 / std::max(img.width, img.height);
  const Grid g = make_grid({{0.5 * h, (img.width - 0.5) * h}, {0.5 * h, (img.height - 0.5) * h}},
                           {img.width, img.height});
  Vector v(g.size());
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) v[g.flat_index(x, y)] = double(img.at(x, y)) / img.max_value;
  }
  const ConvexDomain omega = domain ? *domain : image_rectangle(img);
  return ScalarField(g, std::move(v), omega.mask(g));
}

ImageBuffer field_to_image(const ScalarField& u, int width, int height, int max_value) {
  if (max_value != 255 && max_value != 65535) throw InvalidArgument("pgm: maxval must be 255 or 65535");
  const Grid& g = u.grid();
  if (g.dim() != 2 || g.points(0) != width || g.points(1) != height) {
    throw InvalidArgument("pgm: field grid does not match the image size");
  }
  ImageBuffer img;
  img.width = width;
  img.height = height;
  img.max_value = max_value;
  img.pixels.resize(static_cast<std::size_t>(width) * height);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const double v = std::clamp(u[g.flat_index(x, y)], 0.0, 1.0);
      img.pixels[static_cast<std::size_t>(y) * width + x] = static_cast<std::uint16_t>(std::lround(v * max_value));
    }
  }
  return img;
}

}  // namespace fracbv
