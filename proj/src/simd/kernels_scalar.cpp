#include <cmath>

#include "wetting/rng.hpp"
#include "wetting/simd/kernels.hpp"

namespace wetting::simd {

namespace {

void fill_uniforms(std::uint64_t seed, std::uint32_t stream, std::uint64_t t, std::uint32_t first, std::size_t count,
                   double* out) {
  for (std::size_t k = 0; k < count; ++k) out[k] = site_uniform(seed, stream, t, first + static_cast<std::uint32_t>(k));
}

void heat_bath_grid_pass(const GridPass& p) {
  const std::ptrdiff_t H = p.height;
  for (std::size_t i = 0; i < p.count; ++i) {
    if (p.parity[i] != p.color) continue;
    const auto idx = static_cast<std::ptrdiff_t>(i);
    const int pattern = p.cells[idx - H] | (p.cells[idx + H] << 1) | (p.cells[idx - 1] << 2) | (p.cells[idx + 1] << 3);
    p.cells[idx] = p.uniforms[i] < p.table[16 * i + static_cast<std::size_t>(pattern)] ? 1 : 0;
  }
}

double block_energies(const double* base, const double* signs, const double* g, int k, double offset, double* energies,
                      std::size_t B) {
  for (std::size_t b = 0; b < B; ++b) energies[b] = base[b];
  for (int i = 0; i < k; ++i) {
    const double* row = signs + static_cast<std::size_t>(i) * B;
    const double gi = g[i];
    for (std::size_t b = 0; b < B; ++b) energies[b] = energies[b] - row[b] * gi;
  }
  double lo = INFINITY;
  for (std::size_t b = 0; b < B; ++b) {
    energies[b] = energies[b] + offset;
    if (energies[b] < lo) lo = energies[b];
  }
  return lo;
}

double block_weights(const double* energies, double beta, double shift, double* weights, std::size_t B) {
  double sum = 0.0;
  for (std::size_t b = 0; b < B; ++b) {
    const double x = -beta * (energies[b] - shift);
    weights[b] = x < -708.0 ? 0.0 : std::exp(x);
    sum += weights[b];
  }
  return sum;
}

void weighted_sign_sums(const double* signs, const double* weights, int k, std::size_t B, double* out) {
  for (int i = 0; i < k; ++i) {
    const double* row = signs + static_cast<std::size_t>(i) * B;
    double s = 0.0;
    for (std::size_t b = 0; b < B; ++b) s += row[b] * weights[b];
    out[i] = s;
  }
}

void scale_accumulate(double* acc, const double* weights, double scale, std::size_t B) {
  for (std::size_t b = 0; b < B; ++b) acc[b] = acc[b] * scale + weights[b];
}

}  // namespace

const Kernels& scalar_kernels() {
  static const Kernels k{Isa::scalar,   fill_uniforms,      heat_bath_grid_pass, block_energies,
                         block_weights, weighted_sign_sums, scale_accumulate};
  return k;
}

}  // namespace wetting::simd
