#pragma once

#include "errors.hpp"

#include <array>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace tricomp::io {

// Shortest text that round-trips with 17 significant digits.
inline std::string num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

class CsvWriter {
 public:
  explicit CsvWriter(const std::vector<std::string>& header) { row(header); }

  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out_ << ',';
      out_ << quote(cells[i]);
    }
    out_ << '\n';
  }

  std::string str() const { return out_.str(); }

  void save(const std::string& path) const {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path + " for writing");
    f << out_.str();
    if (!f) throw std::runtime_error("write failed: " + path);
  }

 private:
  static std::string quote(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
      if (c == '"') q += '"';
      q += c;
    }
    return q + "\"";
  }
  std::ostringstream out_;
};

struct GrayImage {
  int width = 0, height = 0;
  std::vector<std::uint8_t> pixels;  // row-major, top row first
};

using Rgb = std::array<std::uint8_t, 3>;

struct RgbImage {
  int width = 0, height = 0;
  std::vector<Rgb> pixels;
};

inline void save_pgm(const GrayImage& img, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path + " for writing");
  f << "P5\n" << img.width << ' ' << img.height << "\n255\n";
  f.write(reinterpret_cast<const char*>(img.pixels.data()), std::streamsize(img.pixels.size()));
  if (!f) throw std::runtime_error("write failed: " + path);
}

inline void save_ppm(const RgbImage& img, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path + " for writing");
  f << "P6\n" << img.width << ' ' << img.height << "\n255\n";
  for (const auto& p : img.pixels) f.write(reinterpret_cast<const char*>(p.data()), 3);
  if (!f) throw std::runtime_error("write failed: " + path);
}

namespace detail {

inline int read_header_int(std::istream& in) {
  int c = in.peek();
  while (c == '#' || std::isspace(c)) {
    if (c == '#')
      while (in.get() != '\n' && in) {
      }
    else
      in.get();
    c = in.peek();
  }
  int v = -1;
  if (!(in >> v)) throw InputError("malformed netpbm header");
  return v;
}

}  // namespace detail

inline GrayImage load_pgm(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw InputError("cannot open " + path);
  std::string magic;
  f >> magic;
  if (magic != "P5") throw InputError(path + ": expected binary PGM (P5)");
  GrayImage img;
  img.width = detail::read_header_int(f);
  img.height = detail::read_header_int(f);
  const int maxval = detail::read_header_int(f);
  if (img.width <= 0 || img.height <= 0 || maxval != 255) throw InputError(path + ": unsupported PGM dimensions or maxval");
  f.get();  // single whitespace before raster
  img.pixels.resize(std::size_t(img.width) * img.height);
  f.read(reinterpret_cast<char*>(img.pixels.data()), std::streamsize(img.pixels.size()));
  if (!f) throw InputError(path + ": truncated raster");
  return img;
}

inline RgbImage load_ppm(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw InputError("cannot open " + path);
  std::string magic;
  f >> magic;
  if (magic != "P6") throw InputError(path + ": expected binary PPM (P6)");
  RgbImage img;
  img.width = detail::read_header_int(f);
  img.height = detail::read_header_int(f);
  const int maxval = detail::read_header_int(f);
  if (img.width <= 0 || img.height <= 0 || maxval != 255) throw InputError(path + ": unsupported PPM dimensions or maxval");
  f.get();
  img.pixels.resize(std::size_t(img.width) * img.height);
  for (auto& p : img.pixels) f.read(reinterpret_cast<char*>(p.data()), 3);
  if (!f) throw InputError(path + ": truncated raster");
  return img;
}

}  // namespace tricomp::io
