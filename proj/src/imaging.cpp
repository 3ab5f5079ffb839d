#include "guided/imaging.hpp"

#include "guided/kernels.hpp"
#include "guided/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace guided {

ImageGrid::ImageGrid(Index side, Vector values) : w(side), pixels(std::move(values)) {
  if (w < 1) throw Error(ErrorKind::InvalidArgument, "image side must be >= 1");
  require_same_dim(pixels.size(), w * w, "ImageGrid");
  if (!pixels.allFinite()) throw Error(ErrorKind::InvalidArgument, "image has non-finite pixels");
}

ImageGrid ImageGrid::filled(Index side, double value) {
  return ImageGrid(side, Vector::Constant(side * side, value));
}

MagnifySetup MagnifySetup::with_k(Index w, Index r, Index k) {
  MagnifySetup s{w, r, k, 0.0};
  if (r <= 0 || k <= 0) throw Error(ErrorKind::OutOfRange, "r and k must be positive");
  s.k_scale = static_cast<double>(w / r) / static_cast<double>(k);
  s.validate();
  return s;
}

MagnifySetup MagnifySetup::with_k_scale(Index w, Index r, double k_scale) {
  if (r <= 0) throw Error(ErrorKind::OutOfRange, "r must be positive");
  if (!(k_scale > 0.0)) throw Error(ErrorKind::OutOfRange, "k_scale must be > 0");
  const double raw = static_cast<double>(w / r) / k_scale;
  const auto k = std::clamp<Index>(static_cast<Index>(std::lround(raw)), 1, std::max<Index>(w, 1));
  MagnifySetup s{w, r, k, k_scale};
  s.validate();
  return s;
}

void MagnifySetup::validate() const {
  if (w < 1 || r < 1) throw Error(ErrorKind::OutOfRange, "w and r must be positive");
  if (w % r != 0) {
    throw Error(ErrorKind::BlockMismatch,
                "r=" + std::to_string(r) + " does not divide w=" + std::to_string(w));
  }
  if (k < 1 || k > w) throw Error(ErrorKind::OutOfRange, "k must lie in [1, w]");
  if (!(k_scale > 0.0)) throw Error(ErrorKind::OutOfRange, "k_scale must be > 0");
}

ImageGrid downsample(const ImageGrid& img, Index r) {
  if (r < 1 || img.w % r != 0) {
    throw Error(ErrorKind::BlockMismatch,
                "r=" + std::to_string(r) + " does not divide w=" + std::to_string(img.w));
  }
  const Index m = img.w / r;
  Vector low(m * m);
  kernels::block_mean(img.pixels.data(), static_cast<std::size_t>(img.w),
                      static_cast<std::size_t>(r), low.data());
  return ImageGrid(m, std::move(low));
}

ImageGrid upsample(const ImageGrid& low, Index r) {
  if (r < 1) throw Error(ErrorKind::OutOfRange, "r must be >= 1");
  const Index w = low.w * r;
  Vector img(w * w);
  kernels::block_replicate(low.pixels.data(), static_cast<std::size_t>(low.w),
                           static_cast<std::size_t>(r), img.data());
  return ImageGrid(w, std::move(img));
}

Projector block_sampling_projector(Index w, Index r) { return Projector::block_average(w, r); }

Projector dct_lowpass_projector(Index w, Index k) { return Projector::dct_lowpass(w, k); }

NoisyGrid add_noise(const ImageGrid& low, double variance, std::uint64_t seed) {
  if (!(variance >= 0.0)) throw Error(ErrorKind::OutOfRange, "variance must be >= 0");
  NoisyGrid out{low, 0.0, seed};
  if (variance == 0.0) return out;
  CounterRng rng(seed);
  const double sigma = std::sqrt(variance);
  double sq = 0.0;
  for (Index i = 0; i < low.pixels.size(); ++i) {
    const double e = sigma * rng.normal();
    out.grid.pixels[i] += e;
    sq += e * e;
  }
  out.noise_norm = std::sqrt(sq);
  return out;
}

double psnr(const ImageGrid& a, const ImageGrid& b) {
  require_same_dim(a.w, b.w, "psnr");
  const double mse = (a.pixels - b.pixels).squaredNorm() / static_cast<double>(a.pixels.size());
  if (mse == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(1.0 / mse);
}

ImageGrid synthetic_image(Index w) {
  if (w < 1) throw Error(ErrorKind::InvalidArgument, "image side must be >= 1");
  ImageGrid img = ImageGrid::filled(w, 0.0);
  const double pi = std::numbers::pi;
  for (Index i = 0; i < w; ++i) {
    for (Index j = 0; j < w; ++j) {
      const double y = (static_cast<double>(i) + 0.5) / static_cast<double>(w);
      const double x = (static_cast<double>(j) + 0.5) / static_cast<double>(w);
      double v = 0.45 + 0.15 * std::sin(2 * pi * (0.8 * x + 0.3 * y)) +
                 0.08 * std::cos(2 * pi * 2.2 * y) * std::sin(2 * pi * 1.4 * x) +
                 0.04 * std::cos(2 * pi * (3.1 * x - 2.3 * y));
      // A bright rectangle, a dark disc and a thin diagonal bar.
      if (x > 0.15 && x < 0.45 && y > 0.55 && y < 0.85) v += 0.25;
      const double dx = x - 0.68;
      const double dy = y - 0.32;
      if (dx * dx + dy * dy < 0.18 * 0.18) v -= 0.22;
      if (std::abs(x - y) < 0.03 && x > 0.1 && x < 0.9) v += 0.15;
      img(i, j) = std::clamp(v, 0.0, 1.0);
    }
  }
  return img;
}

}  // namespace guided
