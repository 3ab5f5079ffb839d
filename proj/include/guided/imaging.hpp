#pragma once

#include "guided/common.hpp"
#include "guided/projector.hpp"

#include <cstdint>

namespace guided {

/// w x w image, row-major, intensities nominally in [0,1].
struct ImageGrid {
  Index w = 0;
  Vector pixels;

  ImageGrid() = default;
  ImageGrid(Index side, Vector values);
  static ImageGrid filled(Index side, double value);

  double operator()(Index row, Index col) const { return pixels[row * w + col]; }
  double& operator()(Index row, Index col) { return pixels[row * w + col]; }
};

struct MagnifySetup {
  Index w = 0;
  Index r = 1;
  Index k = 1;
  double k_scale = 1.0;

  /// k given directly; k_scale = (w/r)/k.
  static MagnifySetup with_k(Index w, Index r, Index k);
  /// k = round((w/r)/k_scale), clamped to [1, w]. The requested k_scale is
  /// kept as the label even though the realized ratio may differ slightly.
  static MagnifySetup with_k_scale(Index w, Index r, double k_scale);

  Index low_side() const { return w / r; }
  void validate() const;
};

/// Mean of each r x r block. Throws BlockMismatch when r does not divide w.
ImageGrid downsample(const ImageGrid& img, Index r);
/// Each pixel copied into an r x r block.
ImageGrid upsample(const ImageGrid& low, Index r);

/// S = upsample o downsample, as a projector on w*w pixels.
Projector block_sampling_projector(Index w, Index r);
/// T: keep the lowest k x k orthonormal DCT-II coefficients.
Projector dct_lowpass_projector(Index w, Index k);

struct NoisyGrid {
  ImageGrid grid;
  double noise_norm = 0.0;  // realized ||e||
  std::uint64_t seed = 0;
};

/// Adds i.i.d. N(0, variance) noise. Deterministic for a given seed.
NoisyGrid add_noise(const ImageGrid& low, double variance, std::uint64_t seed);

/// 10 log10(1 / MSE); +inf for identical images.
double psnr(const ImageGrid& a, const ImageGrid& b);

/// Smooth background, a few sinusoids and some hard edges; values in [0,1].
ImageGrid synthetic_image(Index w = 64);

}  // namespace guided
