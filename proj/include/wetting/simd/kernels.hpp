#pragma once

#include <cstddef>
#include <cstdint>

namespace wetting::simd {

enum class Isa { scalar, avx2 };

const char* to_string(Isa isa);

/// True when the CPU can run the AVX2 kernels.
bool avx2_available();

/// ISA picked at startup: AVX2 when available unless WETTING_LAB_ISA=scalar.
Isa active_isa();

/// Heat-bath pass over one colour of a 2-d product box stored x-major
/// (y fastest). Cell idx holds 1 for a plus spin; cells[idx - H] and
/// cells[idx + H] must be addressable (caller pads both ends).
/// table[16 * idx + pattern] is the probability of plus given the
/// neighbour bits pattern = b(-x) | b(+x) << 1 | b(-y) << 2 | b(+y) << 3.
/// parity[idx] selects the sites of `color`; entries past `count` must be
/// padded with a value other than 0 or 1 up to a multiple of 8.
struct GridPass {
  std::int32_t* cells;
  const std::int32_t* parity;
  const double* table;
  const double* uniforms;
  std::size_t count;
  std::ptrdiff_t height;
  std::int32_t color;
};

struct Kernels {
  Isa isa;

  /// out[k] = u(t, first + k) for k < count, see site_uniform.
  void (*fill_uniforms)(std::uint64_t seed, std::uint32_t stream, std::uint64_t t, std::uint32_t first,
                        std::size_t count, double* out);

  void (*heat_bath_grid_pass)(const GridPass& pass);

  /// energies[b] = base[b] - sum_i signs[i * B + b] * g[i] + offset, i < k.
  /// Returns the minimum energy.
  double (*block_energies)(const double* base, const double* signs, const double* g, int k, double offset,
                           double* energies, std::size_t B);

  /// weights[b] = exp(-beta * (energies[b] - shift)), zero below exp's range.
  /// Returns the sum of the weights.
  double (*block_weights)(const double* energies, double beta, double shift, double* weights, std::size_t B);

  /// out[i] = sum_b signs[i * B + b] * weights[b], i < k.
  void (*weighted_sign_sums)(const double* signs, const double* weights, int k, std::size_t B, double* out);

  /// acc[b] = acc[b] * scale + weights[b].
  void (*scale_accumulate)(double* acc, const double* weights, double scale, std::size_t B);
};

const Kernels& scalar_kernels();
/// Only valid when avx2_available().
const Kernels& avx2_kernels();

const Kernels& kernels(Isa isa);
inline const Kernels& active_kernels() { return kernels(active_isa()); }

}  // namespace wetting::simd
