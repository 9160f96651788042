#pragma once

#include <cstdint>

#include "pdlearn/complex.hpp"
#include "pdlearn/image.hpp"
#include "pdlearn/rng.hpp"

namespace pdlearn {

/// Parameters of the random binary image generator: N particles each doing a
/// length-S Gaussian random walk (per-step sd sigma1) on the W x W flat
/// torus; the visit histogram is blurred with a periodic Gaussian filter
/// (sd sigma2) and thresholded at t.
struct GenImageParams {
  int W = 300;
  int N = 100;
  int S = 30;
  double sigma1 = 4.0;
  double sigma2 = 2.0;
  double t = 0.01;
  std::uint64_t seed = 0;

  void validate() const;
};

BinaryImage gen_image(const GenImageParams& params);

/// Poisson point process on the unit disk; count ~ Poisson(mean_points).
PointCloud gen_ppp_disk(double mean_points, std::uint64_t seed);

/// Ginibre point process approximation: eigenvalues of an n x n i.i.d.
/// standard-complex-Gaussian matrix scaled by 1/sqrt(n), truncated to the
/// unit disk.
PointCloud gen_gpp_disk(int n, std::uint64_t seed);

enum class LatticeKind { Square, Hexagonal };

/// 20-point square (5x4) or hexagonal lattice with unit nearest-neighbor
/// spacing and i.i.d. Gaussian noise per coordinate.
PointCloud gen_noisy_lattice(LatticeKind kind, int n_points, double noise_sigma,
                             std::uint64_t seed);

}  // namespace pdlearn
