#include "guided/pgm.hpp"
#include <cctype>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <sstream>

namespace guided {

namespace {

// Next header token, skipping whitespace and '#' comments.
std::string token(std::istream& in) {
  std::string t;
  int c = in.get();
  while (c != EOF) {
    if (c == '#') {
      while (c != EOF && c != '\n') c = in.get();
    } else if (std::isspace(c)) {
      if (!t.empty()) break;
    } else {
      t.push_back(static_cast<char>(c));
    }
    c = in.get();
  }
  if (t.empty()) throw Error(ErrorKind::Parse, "PGM: unexpected end of header");
  return t;
}

long header_int(std::istream& in, const char* what) {
  const std::string t = token(in);
  try {
    std::size_t used = 0;
    const long v = std::stol(t, &used);
    if (used != t.size() || v < 0) throw std::invalid_argument(t);
    return v;
  } catch (const std::exception&) {
    throw Error(ErrorKind::Parse, std::string("PGM: bad ") + what + " '" + t + "'");
  }
}

}  // namespace

ImageGrid read_pgm(std::istream& in) {
  const std::string magic = token(in);
  if (magic != "P2" && magic != "P5") throw Error(ErrorKind::Parse, "PGM: unknown magic '" + magic + "'");
  const long width = header_int(in, "width");
  const long height = header_int(in, "height");
  const long maxval = header_int(in, "maxval");
  if (width < 1 || height < 1) throw Error(ErrorKind::Parse, "PGM: empty image");
  if (maxval < 1 || maxval > 65535) throw Error(ErrorKind::Parse, "PGM: maxval out of range");
  if (width != height) {
    throw Error(ErrorKind::InvalidArgument, "PGM: image must be square, got " +
                                                std::to_string(width) + "x" + std::to_string(height));
  }
  const auto count = static_cast<Index>(width) * height;
  Vector px(count);
  const double scale = 1.0 / static_cast<double>(maxval);
  if (magic == "P2") {
    for (Index i = 0; i < count; ++i) {
      px[i] = static_cast<double>(std::min(header_int(in, "sample"), maxval)) * scale;
    }
  } else {
    // token() consumed exactly one whitespace byte after maxval.
    const int bytes = maxval < 256 ? 1 : 2;
    std::string raw(static_cast<std::size_t>(count * bytes), '\0');
    in.read(raw.data(), static_cast<std::streamsize>(raw.size()));
    if (in.gcount() != static_cast<std::streamsize>(raw.size())) {
      throw Error(ErrorKind::Parse, "PGM: truncated raster");
    }
    for (Index i = 0; i < count; ++i) {
      long v = static_cast<unsigned char>(raw[i * bytes]);
      if (bytes == 2) v = (v << 8) | static_cast<unsigned char>(raw[i * bytes + 1]);
      px[i] = static_cast<double>(std::min(v, maxval)) * scale;
    }
  }
  return ImageGrid(width, std::move(px));
}

ImageGrid read_pgm_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path);
  return read_pgm(in);
}

void write_pgm(std::ostream& out, const ImageGrid& img, PgmFormat format) {
  out << (format == PgmFormat::Plain ? "P2" : "P5") << '\n'
      << img.w << ' ' << img.w << '\n'
      << 255 << '\n';
  auto quant = [](double v) {
    return static_cast<int>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0));
  };
  if (format == PgmFormat::Plain) {
    for (Index i = 0; i < img.w; ++i) {
      for (Index j = 0; j < img.w; ++j) {
        out << quant(img(i, j)) << (j + 1 == img.w ? '\n' : ' ');
      }
    }
  } else {
    std::string raw(static_cast<std::size_t>(img.pixels.size()), '\0');
    for (Index i = 0; i < img.pixels.size(); ++i) raw[i] = static_cast<char>(quant(img.pixels[i]));
    out.write(raw.data(), static_cast<std::streamsize>(raw.size()));
  }
}

std::string pgm_bytes(const ImageGrid& img, PgmFormat format) {
  std::ostringstream ss(std::ios::binary);
  write_pgm(ss, img, format);
  return ss.str();
}

}  // namespace guided
