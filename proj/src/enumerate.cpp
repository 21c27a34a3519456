#include <algorithm>
#include <cmath>
#include <string>

#include "wetting/error.hpp"
#include "wetting/exact.hpp"

namespace wetting {

namespace {

// Exact refresh interval for the incrementally updated high-block terms.
constexpr std::uint64_t kRefreshEvery = 64;

struct HighBlock {
  int k;       // size of the low block
  int n;       // total sites
  // Bonds split by endpoint block.
  std::vector<CompiledModel::Bond> low_low, low_high, high_high;
  std::vector<double> h;  // effective field
};

}  // namespace

EnumerationResult enumerate(const CompiledModel& model, bool pairs, const simd::Kernels& K, int cap) {
  const int n = static_cast<int>(model.size());
  if (n > cap) throw CapacityError("enumeration: " + std::to_string(n) + " sites exceed the cap of " + std::to_string(cap));
  EnumerationResult res;
  if (n == 0) return res;

  const int k = std::min(n, 10);
  const int hi = n - k;
  const std::size_t B = std::size_t{1} << k;
  const double beta = model.beta;
  const std::vector<double> h = model.effective_field();

  HighBlock blk{k, n, {}, {}, {}, h};
  for (const auto& b : model.bonds) {
    const bool al = b.a < k, bl = b.b < k;
    if (al && bl)
      blk.low_low.push_back(b);
    else if (!al && !bl)
      blk.high_high.push_back(b);
    else
      blk.low_high.push_back(al ? b : CompiledModel::Bond{b.b, b.a, b.J});  // a is the low end
  }

  std::vector<double> signs(static_cast<std::size_t>(k) * B);
  for (int i = 0; i < k; ++i)
    for (std::size_t b = 0; b < B; ++b) signs[static_cast<std::size_t>(i) * B + b] = ((b >> i) & 1u) ? 1.0 : -1.0;

  std::vector<double> base(B, 0.0);
  for (std::size_t b = 0; b < B; ++b) {
    double e = 0.0;
    for (const auto& bond : blk.low_low)
      e -= bond.J * signs[static_cast<std::size_t>(bond.a) * B + b] * signs[static_cast<std::size_t>(bond.b) * B + b];
    for (int i = 0; i < k; ++i) e -= h[static_cast<std::size_t>(i)] * signs[static_cast<std::size_t>(i) * B + b];
    base[b] = e;
  }

  // High-block state.
  std::vector<int> sigma(static_cast<std::size_t>(hi), -1);
  std::vector<double> g(static_cast<std::size_t>(k), 0.0);
  double e_high = 0.0;
  // Neighbours of each high site: (other site, J); other < k means low.
  std::vector<std::vector<std::pair<int, double>>> adj(static_cast<std::size_t>(hi));
  for (const auto& b : blk.low_high) adj[static_cast<std::size_t>(b.b - k)].push_back({b.a, b.J});
  for (const auto& b : blk.high_high) {
    adj[static_cast<std::size_t>(b.a - k)].push_back({b.b, b.J});
    adj[static_cast<std::size_t>(b.b - k)].push_back({b.a, b.J});
  }
  auto spin_of = [&](int site) { return sigma[static_cast<std::size_t>(site - k)]; };
  auto refresh = [&] {
    std::fill(g.begin(), g.end(), 0.0);
    for (const auto& b : blk.low_high) g[static_cast<std::size_t>(b.a)] += b.J * spin_of(b.b);
    e_high = 0.0;
    for (const auto& b : blk.high_high) e_high -= b.J * spin_of(b.a) * spin_of(b.b);
    for (int j = k; j < n; ++j) e_high -= h[static_cast<std::size_t>(j)] * spin_of(j);
  };
  refresh();

  std::vector<double> energies(B), weights(B), acc(B, 0.0), msum(static_cast<std::size_t>(k));
  std::vector<double> mag_high(static_cast<std::size_t>(hi), 0.0);
  std::vector<double> pair_lh, pair_hh;
  if (pairs) {
    pair_lh.assign(static_cast<std::size_t>(k) * hi, 0.0);
    pair_hh.assign(static_cast<std::size_t>(hi) * hi, 0.0);
  }
  double z = 0.0;
  double shift = 0.0;
  bool first = true;

  const std::uint64_t steps = std::uint64_t{1} << hi;
  for (std::uint64_t step = 0; step < steps; ++step) {
    if (step > 0) {
      // Gray code: flip the lowest set bit of step.
      const int j = __builtin_ctzll(step);
      const int site = k + j;
      int& s = sigma[static_cast<std::size_t>(j)];
      if (step % kRefreshEvery == 0) {
        s = -s;
        refresh();
      } else {
        double local = h[static_cast<std::size_t>(site)];
        for (const auto& [other, J] : adj[static_cast<std::size_t>(j)])
          if (other >= k) local += J * spin_of(other);
        e_high += 2.0 * s * local;
        s = -s;
        for (const auto& [other, J] : adj[static_cast<std::size_t>(j)])
          if (other < k) g[static_cast<std::size_t>(other)] += 2.0 * J * s;
      }
    }
    const double emin = K.block_energies(base.data(), signs.data(), g.data(), k, e_high, energies.data(), B);
    double scale = 1.0;
    if (first) {
      shift = emin;
      first = false;
    } else if (emin < shift) {
      scale = std::exp(-beta * (shift - emin));
      shift = emin;
    }
    const double zh = K.block_weights(energies.data(), beta, shift, weights.data(), B);
    K.scale_accumulate(acc.data(), weights.data(), scale, B);
    if (scale != 1.0) {
      z *= scale;
      for (auto& v : mag_high) v *= scale;
      for (auto& v : pair_lh) v *= scale;
      for (auto& v : pair_hh) v *= scale;
    }
    z += zh;
    for (int j = 0; j < hi; ++j) mag_high[static_cast<std::size_t>(j)] += sigma[static_cast<std::size_t>(j)] * zh;
    if (pairs) {
      K.weighted_sign_sums(signs.data(), weights.data(), k, B, msum.data());
      for (int i = 0; i < k; ++i)
        for (int j = 0; j < hi; ++j)
          pair_lh[static_cast<std::size_t>(i) * hi + j] += sigma[static_cast<std::size_t>(j)] * msum[static_cast<std::size_t>(i)];
      for (int a = 0; a < hi; ++a)
        for (int b = a + 1; b < hi; ++b)
          pair_hh[static_cast<std::size_t>(a) * hi + b] +=
              sigma[static_cast<std::size_t>(a)] * sigma[static_cast<std::size_t>(b)] * zh;
    }
  }

  res.log_partition = std::log(z) - beta * shift;
  res.magnetization.assign(static_cast<std::size_t>(n), 0.0);
  std::vector<double> mlow(static_cast<std::size_t>(k));
  K.weighted_sign_sums(signs.data(), acc.data(), k, B, mlow.data());
  for (int i = 0; i < k; ++i) res.magnetization[static_cast<std::size_t>(i)] = mlow[static_cast<std::size_t>(i)] / z;
  for (int j = 0; j < hi; ++j) res.magnetization[static_cast<std::size_t>(k + j)] = mag_high[static_cast<std::size_t>(j)] / z;

  if (pairs) {
    const auto N = static_cast<std::size_t>(n);
    res.pair.assign(N * N, 0.0);
    for (std::size_t i = 0; i < N; ++i) res.pair[i * N + i] = 1.0;
    std::vector<double> prod(B);
    for (int a = 0; a < k; ++a)
      for (int b = a + 1; b < k; ++b) {
        double s = 0.0;
        const double* ra = signs.data() + static_cast<std::size_t>(a) * B;
        const double* rb = signs.data() + static_cast<std::size_t>(b) * B;
        for (std::size_t x = 0; x < B; ++x) s += ra[x] * rb[x] * acc[x];
        res.pair[static_cast<std::size_t>(a) * N + b] = res.pair[static_cast<std::size_t>(b) * N + a] = s / z;
      }
    for (int a = 0; a < k; ++a)
      for (int j = 0; j < hi; ++j) {
        const double v = pair_lh[static_cast<std::size_t>(a) * hi + j] / z;
        res.pair[static_cast<std::size_t>(a) * N + k + j] = res.pair[static_cast<std::size_t>(k + j) * N + a] = v;
      }
    for (int a = 0; a < hi; ++a)
      for (int b = a + 1; b < hi; ++b) {
        const double v = pair_hh[static_cast<std::size_t>(a) * hi + b] / z;
        res.pair[static_cast<std::size_t>(k + a) * N + k + b] = res.pair[static_cast<std::size_t>(k + b) * N + k + a] = v;
      }
  }
  return res;
}

std::vector<double> gibbs_distribution(const CompiledModel& model, int cap) {
  const int n = static_cast<int>(model.size());
  if (n > cap)
    throw CapacityError("gibbs_distribution: " + std::to_string(n) + " sites exceed the cap of " + std::to_string(cap));
  const std::size_t states = std::size_t{1} << n;
  const std::vector<double> h = model.effective_field();
  std::vector<double> logw(states);
  double top = -INFINITY;
  for (std::size_t c = 0; c < states; ++c) {
    double e = 0.0;
    for (const auto& b : model.bonds) {
      const int sa = ((c >> b.a) & 1u) ? 1 : -1;
      const int sb = ((c >> b.b) & 1u) ? 1 : -1;
      e -= b.J * sa * sb;
    }
    for (int i = 0; i < n; ++i) e -= h[static_cast<std::size_t>(i)] * (((c >> i) & 1u) ? 1 : -1);
    logw[c] = -model.beta * e;
    top = std::max(top, logw[c]);
  }
  double z = 0.0;
  for (auto& w : logw) {
    w = std::exp(w - top);
    z += w;
  }
  for (auto& w : logw) w /= z;
  return logw;
}

}  // namespace wetting
