#include "pdlearn/synth.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

namespace pdlearn {

void GenImageParams::validate() const {
  if (W < 1 || N < 1 || S < 0) throw std::invalid_argument("GenImageParams: W, N >= 1 and S >= 0");
  if (!(sigma1 > 0) || !(sigma2 > 0) || !(t > 0))
    throw std::invalid_argument("GenImageParams: sigma1, sigma2, t must be > 0");
}

namespace {

/// Separable periodic Gaussian blur, kernel truncated at 4 sigma and
/// normalized to unit mass.
void periodic_gaussian_blur(std::vector<double>& grid, int w, double sigma) {
  const int radius = static_cast<int>(std::ceil(4.0 * sigma));
  std::vector<double> kernel(2 * radius + 1);
  double mass = 0.0;
  for (int k = -radius; k <= radius; ++k) {
    kernel[k + radius] = std::exp(-(static_cast<double>(k) * k) / (2.0 * sigma * sigma));
    mass += kernel[k + radius];
  }
  for (double& v : kernel) v /= mass;

  std::vector<double> tmp(grid.size());
  // rows
  for (int y = 0; y < w; ++y) {
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int k = -radius; k <= radius; ++k) {
        int xx = (x + k) % w;
        if (xx < 0) xx += w;
        acc += kernel[k + radius] * grid[static_cast<std::size_t>(y) * w + xx];
      }
      tmp[static_cast<std::size_t>(y) * w + x] = acc;
    }
  }
  // columns
  for (int y = 0; y < w; ++y) {
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int k = -radius; k <= radius; ++k) {
        int yy = (y + k) % w;
        if (yy < 0) yy += w;
        acc += kernel[k + radius] * tmp[static_cast<std::size_t>(yy) * w + x];
      }
      grid[static_cast<std::size_t>(y) * w + x] = acc;
    }
  }
}

}  // namespace

BinaryImage gen_image(const GenImageParams& params) {
  params.validate();
  Rng rng(params.seed);
  const int w = params.W;
  const double span = static_cast<double>(w);

  std::vector<double> histogram(static_cast<std::size_t>(w) * w, 0.0);
  auto deposit = [&](double x, double y) {
    const int ix = std::min(static_cast<int>(x), w - 1);
    const int iy = std::min(static_cast<int>(y), w - 1);
    histogram[static_cast<std::size_t>(iy) * w + ix] += 1.0;
  };

  for (int particle = 0; particle < params.N; ++particle) {
    double x = rng.uniform(0.0, span);
    double y = rng.uniform(0.0, span);
    deposit(x, y);
    for (int step = 0; step < params.S; ++step) {
      x = std::fmod(x + rng.normal(0.0, params.sigma1), span);
      if (x < 0) x += span;
      y = std::fmod(y + rng.normal(0.0, params.sigma1), span);
      if (y < 0) y += span;
      deposit(x, y);
    }
  }

  periodic_gaussian_blur(histogram, w, params.sigma2);

  BinaryImage img(w, w);
  for (std::size_t i = 0; i < histogram.size(); ++i) img.pixels[i] = histogram[i] > params.t ? 1 : 0;
  return img;
}

PointCloud gen_ppp_disk(double mean_points, std::uint64_t seed) {
  if (!(mean_points > 0)) throw std::invalid_argument("gen_ppp_disk: mean must be > 0");
  Rng rng(seed);
  const int count = rng.poisson(mean_points);
  PointCloud pc;
  pc.dim = 2;
  for (int i = 0; i < count; ++i) {
    const double r = std::sqrt(rng.uniform());
    const double theta = rng.uniform(0.0, 2.0 * M_PI);
    pc.add(r * std::cos(theta), r * std::sin(theta));
  }
  return pc;
}

PointCloud gen_gpp_disk(int n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("gen_gpp_disk: n must be >= 1");
  Rng rng(seed);
  Eigen::MatrixXcd mat(n, n);
  const double unit = 1.0 / std::sqrt(2.0);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i)
      mat(i, j) = std::complex<double>(rng.normal(0.0, unit), rng.normal(0.0, unit));

  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(mat, /*computeEigenvectors=*/false);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  PointCloud pc;
  pc.dim = 2;
  for (int i = 0; i < n; ++i) {
    const std::complex<double> z = solver.eigenvalues()[i] * scale;
    if (std::abs(z) <= 1.0) pc.add(z.real(), z.imag());
  }
  return pc;
}

PointCloud gen_noisy_lattice(LatticeKind kind, int n_points, double noise_sigma,
                             std::uint64_t seed) {
  if (n_points != 20)
    throw std::invalid_argument("gen_noisy_lattice: only the 20-point layouts are supported");
  if (noise_sigma < 0) throw std::invalid_argument("gen_noisy_lattice: noise must be >= 0");
  Rng rng(seed);
  PointCloud pc;
  pc.dim = 2;
  if (kind == LatticeKind::Square) {
    for (int row = 0; row < 4; ++row)
      for (int col = 0; col < 5; ++col)
        pc.add(col, row);
  } else {
    const double dy = std::sqrt(3.0) / 2.0;
    for (int row = 0; row < 4; ++row)
      for (int col = 0; col < 5; ++col)
        pc.add(col + 0.5 * (row % 2), row * dy);
  }
  if (noise_sigma > 0)
    for (auto& p : pc.points) {
      p[0] += rng.normal(0.0, noise_sigma);
      p[1] += rng.normal(0.0, noise_sigma);
    }
  return pc;
}

}  // namespace pdlearn
