// Compiled with -mavx2 -mfma; only reached through the runtime dispatcher.
#include "wetting/simd/kernels.hpp"

#if defined(__AVX2__) && defined(__FMA__)

#include <immintrin.h>

#include <cmath>

namespace wetting::simd {

namespace {

constexpr std::uint32_t kM0 = 0xD2511F53u;
constexpr std::uint32_t kM1 = 0xCD9E8D57u;
constexpr std::uint32_t kW0 = 0x9E3779B9u;
constexpr std::uint32_t kW1 = 0xBB67AE85u;

// 32x32 -> 64 multiply of 8 lanes by a constant, split into hi and lo words.
inline void mulhilo8(__m256i m, __m256i a, __m256i& hi, __m256i& lo) {
  const __m256i even = _mm256_mul_epu32(m, a);
  const __m256i odd = _mm256_mul_epu32(m, _mm256_srli_epi64(a, 32));
  lo = _mm256_blend_epi32(even, _mm256_slli_epi64(odd, 32), 0xAA);
  hi = _mm256_blend_epi32(_mm256_srli_epi64(even, 32), odd, 0xAA);
}

inline __m256d u32_to_pd(__m128i v) {
  const __m128i flipped = _mm_xor_si128(v, _mm_set1_epi32(static_cast<int>(0x80000000u)));
  return _mm256_add_pd(_mm256_cvtepi32_pd(flipped), _mm256_set1_pd(2147483648.0));
}

inline __m256d words_to_uniform(__m128i x0, __m128i x1) {
  const __m256d high = _mm256_mul_pd(u32_to_pd(x0), _mm256_set1_pd(0x1.0p21));
  const __m256d low = u32_to_pd(_mm_srli_epi32(x1, 11));
  return _mm256_mul_pd(_mm256_add_pd(high, low), _mm256_set1_pd(0x1.0p-53));
}

void fill_uniforms(std::uint64_t seed, std::uint32_t stream, std::uint64_t t, std::uint32_t first, std::size_t count,
                   double* out) {
  const __m256i m0 = _mm256_set1_epi32(static_cast<int>(kM0));
  const __m256i m1 = _mm256_set1_epi32(static_cast<int>(kM1));
  const __m256i lane = _mm256_setr_epi32(0, 1, 2, 3, 4, 5, 6, 7);
  alignas(32) double tail[8];
  for (std::size_t base = 0; base < count; base += 8) {
    __m256i c0 = _mm256_set1_epi32(static_cast<int>(static_cast<std::uint32_t>(t)));
    __m256i c1 = _mm256_set1_epi32(static_cast<int>(static_cast<std::uint32_t>(t >> 32)));
    __m256i c2 = _mm256_add_epi32(_mm256_set1_epi32(static_cast<int>(first + static_cast<std::uint32_t>(base))), lane);
    __m256i c3 = _mm256_set1_epi32(static_cast<int>(stream));
    std::uint32_t k0 = static_cast<std::uint32_t>(seed);
    std::uint32_t k1 = static_cast<std::uint32_t>(seed >> 32);
    for (int round = 0; round < 10; ++round) {
      __m256i hi0, lo0, hi1, lo1;
      mulhilo8(m0, c0, hi0, lo0);
      mulhilo8(m1, c2, hi1, lo1);
      const __m256i n0 = _mm256_xor_si256(_mm256_xor_si256(hi1, c1), _mm256_set1_epi32(static_cast<int>(k0)));
      const __m256i n2 = _mm256_xor_si256(_mm256_xor_si256(hi0, c3), _mm256_set1_epi32(static_cast<int>(k1)));
      c0 = n0;
      c1 = lo1;
      c2 = n2;
      c3 = lo0;
      k0 += kW0;
      k1 += kW1;
    }
    const __m256d u_lo = words_to_uniform(_mm256_castsi256_si128(c0), _mm256_castsi256_si128(c1));
    const __m256d u_hi = words_to_uniform(_mm256_extracti128_si256(c0, 1), _mm256_extracti128_si256(c1, 1));
    if (base + 8 <= count) {
      _mm256_storeu_pd(out + base, u_lo);
      _mm256_storeu_pd(out + base + 4, u_hi);
    } else {
      _mm256_store_pd(tail, u_lo);
      _mm256_store_pd(tail + 4, u_hi);
      for (std::size_t k = 0; base + k < count; ++k) out[base + k] = tail[k];
    }
  }
}

void heat_bath_grid_pass(const GridPass& p) {
  const std::ptrdiff_t H = p.height;
  const __m256i color = _mm256_set1_epi32(p.color);
  const __m256i lane = _mm256_setr_epi32(0, 1, 2, 3, 4, 5, 6, 7);
  for (std::size_t i = 0; i < p.count; i += 8) {
    const auto idx = static_cast<std::ptrdiff_t>(i);
    const __m256i par = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(p.parity + i));
    const __m256i active = _mm256_cmpeq_epi32(par, color);
    if (_mm256_testz_si256(active, active)) continue;
    std::int32_t* c = p.cells + idx;
    const __m256i xm = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(c - H));
    const __m256i xp = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(c + H));
    const __m256i ym = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(c - 1));
    const __m256i yp = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(c + 1));
    __m256i pattern = _mm256_or_si256(xm, _mm256_slli_epi32(xp, 1));
    pattern = _mm256_or_si256(pattern, _mm256_slli_epi32(ym, 2));
    pattern = _mm256_or_si256(pattern, _mm256_slli_epi32(yp, 3));
    const __m256i site = _mm256_add_epi32(_mm256_set1_epi32(static_cast<int>(i)), lane);
    const __m256i tidx = _mm256_add_epi32(_mm256_slli_epi32(site, 4), pattern);

    const __m128i act_lo = _mm256_castsi256_si128(active);
    const __m128i act_hi = _mm256_extracti128_si256(active, 1);
    const __m256d mask_lo = _mm256_castsi256_pd(_mm256_cvtepi32_epi64(act_lo));
    const __m256d mask_hi = _mm256_castsi256_pd(_mm256_cvtepi32_epi64(act_hi));
    const __m256d p_lo = _mm256_mask_i32gather_pd(_mm256_setzero_pd(), p.table, _mm256_castsi256_si128(tidx), mask_lo, 8);
    const __m256d p_hi =
        _mm256_mask_i32gather_pd(_mm256_setzero_pd(), p.table, _mm256_extracti128_si256(tidx, 1), mask_hi, 8);
    const __m256d u_lo = _mm256_maskload_pd(p.uniforms + i, _mm256_castpd_si256(mask_lo));
    const __m256d u_hi = _mm256_maskload_pd(p.uniforms + i + 4, _mm256_castpd_si256(mask_hi));
    const __m256d lt_lo = _mm256_cmp_pd(u_lo, p_lo, _CMP_LT_OQ);
    const __m256d lt_hi = _mm256_cmp_pd(u_hi, p_hi, _CMP_LT_OQ);
    // Pack the two 4x64 compare masks back into 8x32 lanes.
    const __m256i perm = _mm256_setr_epi32(0, 2, 4, 6, 1, 3, 5, 7);
    const __m128i plus_lo = _mm256_castsi256_si128(_mm256_permutevar8x32_epi32(_mm256_castpd_si256(lt_lo), perm));
    const __m128i plus_hi = _mm256_castsi256_si128(_mm256_permutevar8x32_epi32(_mm256_castpd_si256(lt_hi), perm));
    const __m256i plus = _mm256_inserti128_si256(_mm256_castsi128_si256(plus_lo), plus_hi, 1);
    const __m256i bits = _mm256_and_si256(plus, _mm256_set1_epi32(1));
    _mm256_maskstore_epi32(c, active, bits);
  }
}

double block_energies(const double* base, const double* signs, const double* g, int k, double offset, double* energies,
                      std::size_t B) {
  std::size_t b = 0;
  __m256d lo = _mm256_set1_pd(INFINITY);
  const __m256d off = _mm256_set1_pd(offset);
  for (; b + 4 <= B; b += 4) {
    __m256d e = _mm256_loadu_pd(base + b);
    for (int i = 0; i < k; ++i) {
      const __m256d s = _mm256_loadu_pd(signs + static_cast<std::size_t>(i) * B + b);
      e = _mm256_sub_pd(e, _mm256_mul_pd(s, _mm256_set1_pd(g[i])));
    }
    e = _mm256_add_pd(e, off);
    _mm256_storeu_pd(energies + b, e);
    lo = _mm256_min_pd(lo, e);
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, lo);
  double m = INFINITY;
  for (double v : lanes) m = v < m ? v : m;
  for (; b < B; ++b) {
    double e = base[b];
    for (int i = 0; i < k; ++i) e = e - signs[static_cast<std::size_t>(i) * B + b] * g[i];
    e = e + offset;
    energies[b] = e;
    if (e < m) m = e;
  }
  return m;
}

// exp(x) for x <= 0 to about 1 ulp: Cody-Waite reduction by ln 2, degree-13
// Taylor polynomial on |r| <= ln2 / 2, exponent assembled from the bits.
inline __m256d exp_nonpositive(__m256d x) {
  const __m256d log2e = _mm256_set1_pd(1.4426950408889634);
  const __m256d ln2_hi = _mm256_set1_pd(6.93145751953125e-1);
  const __m256d ln2_lo = _mm256_set1_pd(1.42860682030941723212e-6);
  const __m256d underflow = _mm256_cmp_pd(x, _mm256_set1_pd(-708.0), _CMP_LT_OQ);
  x = _mm256_max_pd(x, _mm256_set1_pd(-708.0));
  const __m256d n = _mm256_round_pd(_mm256_mul_pd(x, log2e), _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  __m256d r = _mm256_sub_pd(x, _mm256_mul_pd(n, ln2_hi));
  r = _mm256_sub_pd(r, _mm256_mul_pd(n, ln2_lo));
  static constexpr double kInvFact[14] = {1.0,
                                          1.0,
                                          1.0 / 2,
                                          1.0 / 6,
                                          1.0 / 24,
                                          1.0 / 120,
                                          1.0 / 720,
                                          1.0 / 5040,
                                          1.0 / 40320,
                                          1.0 / 362880,
                                          1.0 / 3628800,
                                          1.0 / 39916800,
                                          1.0 / 479001600,
                                          1.0 / 6227020800.0};
  __m256d poly = _mm256_set1_pd(kInvFact[13]);
  for (int j = 12; j >= 0; --j) poly = _mm256_fmadd_pd(poly, r, _mm256_set1_pd(kInvFact[j]));
  // 2^n through the 1.5 * 2^52 magic constant: its low mantissa bits hold n.
  const __m256d magic = _mm256_set1_pd(6755399441055744.0);
  const __m256i nbits = _mm256_castpd_si256(_mm256_add_pd(n, magic));
  const __m256i expo = _mm256_slli_epi64(_mm256_add_epi64(nbits, _mm256_set1_epi64x(1023)), 52);
  const __m256d result = _mm256_mul_pd(poly, _mm256_castsi256_pd(expo));
  return _mm256_andnot_pd(underflow, result);
}

double block_weights(const double* energies, double beta, double shift, double* weights, std::size_t B) {
  const __m256d nb = _mm256_set1_pd(-beta);
  const __m256d sh = _mm256_set1_pd(shift);
  __m256d acc = _mm256_setzero_pd();
  std::size_t b = 0;
  for (; b + 4 <= B; b += 4) {
    const __m256d x = _mm256_mul_pd(nb, _mm256_sub_pd(_mm256_loadu_pd(energies + b), sh));
    const __m256d w = exp_nonpositive(x);
    _mm256_storeu_pd(weights + b, w);
    acc = _mm256_add_pd(acc, w);
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc);
  double sum = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
  for (; b < B; ++b) {
    const double x = -beta * (energies[b] - shift);
    weights[b] = x < -708.0 ? 0.0 : std::exp(x);
    sum += weights[b];
  }
  return sum;
}

void weighted_sign_sums(const double* signs, const double* weights, int k, std::size_t B, double* out) {
  for (int i = 0; i < k; ++i) {
    const double* row = signs + static_cast<std::size_t>(i) * B;
    __m256d acc = _mm256_setzero_pd();
    std::size_t b = 0;
    for (; b + 4 <= B; b += 4) acc = _mm256_fmadd_pd(_mm256_loadu_pd(row + b), _mm256_loadu_pd(weights + b), acc);
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, acc);
    double s = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
    for (; b < B; ++b) s += row[b] * weights[b];
    out[i] = s;
  }
}

void scale_accumulate(double* acc, const double* weights, double scale, std::size_t B) {
  const __m256d sc = _mm256_set1_pd(scale);
  std::size_t b = 0;
  for (; b + 4 <= B; b += 4) {
    const __m256d a = _mm256_mul_pd(_mm256_loadu_pd(acc + b), sc);
    _mm256_storeu_pd(acc + b, _mm256_add_pd(a, _mm256_loadu_pd(weights + b)));
  }
  for (; b < B; ++b) acc[b] = acc[b] * scale + weights[b];
}

}  // namespace

const Kernels& avx2_kernels_impl() {
  static const Kernels k{Isa::avx2,     fill_uniforms,      heat_bath_grid_pass, block_energies,
                         block_weights, weighted_sign_sums, scale_accumulate};
  return k;
}

}  // namespace wetting::simd

#else

namespace wetting::simd {

const Kernels& avx2_kernels_impl() { return scalar_kernels(); }

}  // namespace wetting::simd

#endif
