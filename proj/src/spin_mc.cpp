#include "wetting/spin_mc.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace wetting {

double logistic(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

SpinConfiguration initial_config(const CompiledModel& model, Start start, std::uint64_t seed) {
  SpinConfiguration c(model.size(), 1);
  switch (start) {
    case Start::all_plus: break;
    case Start::all_minus: std::fill(c.begin(), c.end(), static_cast<std::int8_t>(-1)); break;
    case Start::random: {
      CounterRng rng(seed, 0x53544152u);
      for (auto& s : c) s = rng.uniform() < 0.5 ? 1 : -1;
      break;
    }
    case Start::aligned: {
      long total = 0;
      for (const auto& f : model.frontier) total += f.spin;
      if (total < 0) std::fill(c.begin(), c.end(), static_cast<std::int8_t>(-1));
      break;
    }
  }
  return c;
}

Chain::Chain(std::shared_ptr<const CompiledModel> model, std::uint64_t seed, std::uint32_t stream,
             SweepOptions options, Start start)
    : model_(std::move(model)), seed_(seed), stream_(stream), options_(options),
      order_rng_(seed, stream ^ 0x80000000u) {
  if (!model_) throw std::invalid_argument("chain: null model");
  kernels_ = &simd::kernels(options_.isa.value_or(simd::active_isa()));
  build();
  set_config(initial_config(*model_, start, seed));
}

Chain::Chain(const ModelInstance& instance, std::uint64_t seed, std::uint32_t stream, SweepOptions options,
             Start start)
    : Chain(std::make_shared<const CompiledModel>(compile(instance)), seed, stream, options, start) {}

void Chain::build() {
  const CompiledModel& m = *model_;
  n_ = m.size();
  slots_ = 2 * m.dim;
  if (slots_ > 12) throw std::invalid_argument("chain: dimension too large for heat-bath tables");

  // Grid kernel: 2-d product boxes stored x-major, y fastest.
  height_ = 1;
  grid_ = false;
  if (options_.grid_kernel && m.dim == 2 && n_ > 0) {
    const Site& first = m.sites.front();
    const Site& last = m.sites.back();
    const std::ptrdiff_t H = last[1] - first[1] + 1;
    const std::ptrdiff_t X = last[0] - first[0] + 1;
    if (H > 0 && X > 0 && static_cast<std::size_t>(H * X) == n_) {
      bool product = true;
      for (std::size_t i = 0; i < n_ && product; ++i) {
        const auto ii = static_cast<std::ptrdiff_t>(i);
        product = m.sites[i][0] == first[0] + ii / H && m.sites[i][1] == first[1] + ii % H;
      }
      if (product) {
        grid_ = true;
        height_ = H;
      }
    }
  }

  const std::size_t pad = static_cast<std::size_t>(height_) + 8;
  offset_ = pad;
  cells_.assign(n_ + 2 * pad + 8, 0);

  const auto table = m.slot_table();
  const auto S = static_cast<std::size_t>(slots_);
  nbr_.assign(n_ * S, 0);
  slot_J_.assign(n_ * S, 0.0);
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t k = 0; k < S; ++k) {
      const auto& nb = table[i * S + k];
      const auto self = static_cast<std::ptrdiff_t>(i);
      nbr_[i * S + k] = nb.site >= 0 ? nb.site - self : -1 - self;
      slot_J_[i * S + k] = nb.site >= 0 ? nb.J : 0.0;
    }
  h_eff_ = m.effective_field();

  const std::size_t P = std::size_t{1} << S;
  table_.assign(n_ * P, 0.0);
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t pat = 0; pat < P; ++pat) {
      double x = h_eff_[i];
      for (std::size_t k = 0; k < S; ++k) x += slot_J_[i * S + k] * (((pat >> k) & 1u) ? 1.0 : -1.0);
      table_[i * P + pat] = logistic(2.0 * m.beta * x);
    }

  parity_.assign(n_ + 8, 2);
  for (std::size_t i = 0; i < n_; ++i) {
    int s = 0;
    for (int k = 0; k < m.dim; ++k) s += m.sites[i][k];
    parity_[i] = ((s % 2) + 2) % 2;
  }
  u_.assign(n_, 0.0);
  order_.resize(n_);
  std::iota(order_.begin(), order_.end(), 0u);
}

SpinConfiguration Chain::config() const {
  SpinConfiguration c(n_);
  for (std::size_t i = 0; i < n_; ++i) c[i] = cells_[offset_ + i] ? 1 : -1;
  return c;
}

void Chain::set_config(const SpinConfiguration& config) {
  if (config.size() != n_) throw std::invalid_argument("chain: configuration size mismatch");
  for (std::size_t i = 0; i < n_; ++i) {
    if (config[i] != 1 && config[i] != -1) throw std::invalid_argument("chain: spins must be +-1");
    cells_[offset_ + i] = config[i] > 0 ? 1 : 0;
  }
}

int Chain::pattern(std::size_t i) const {
  const auto S = static_cast<std::size_t>(slots_);
  const std::int32_t* c = cells_.data() + offset_ + i;
  int p = 0;
  for (std::size_t k = 0; k < S; ++k) p |= c[nbr_[i * S + k]] << k;
  return p;
}

void Chain::heat_bath_site(std::size_t i) {
  const std::size_t P = std::size_t{1} << slots_;
  cells_[offset_ + i] = u_[i] < table_[i * P + static_cast<std::size_t>(pattern(i))] ? 1 : 0;
}

void Chain::metropolis_site(std::size_t i) {
  const auto S = static_cast<std::size_t>(slots_);
  const std::int32_t* c = cells_.data() + offset_ + i;
  double x = h_eff_[i];
  for (std::size_t k = 0; k < S; ++k) x += slot_J_[i * S + k] * (c[nbr_[i * S + k]] ? 1.0 : -1.0);
  const double s = cells_[offset_ + i] ? 1.0 : -1.0;
  const double cost = 2.0 * model_->beta * s * x;  // beta * (H(flipped) - H)
  if (cost <= 0.0 || u_[i] < std::exp(-cost)) cells_[offset_ + i] ^= 1;
}

void Chain::sweep() {
  kernels_->fill_uniforms(seed_, stream_, sweep_count_, 0, n_, u_.data());
  const bool hb = options_.kind == UpdateKind::heat_bath;
  auto update = [&](std::size_t i) { hb ? heat_bath_site(i) : metropolis_site(i); };
  switch (options_.order) {
    case SiteOrder::raster:
      for (std::size_t i = 0; i < n_; ++i) update(i);
      break;
    case SiteOrder::random:
      for (std::size_t i = n_; i > 1; --i) std::swap(order_[i - 1], order_[order_rng_.below(i)]);
      for (auto i : order_) update(i);
      break;
    case SiteOrder::checkerboard:
      for (std::int32_t color : {0, 1}) {
        if (hb && grid_) {
          kernels_->heat_bath_grid_pass(simd::GridPass{cells_.data() + offset_, parity_.data(), table_.data(),
                                                       u_.data(), n_, height_, color});
        } else {
          for (std::size_t i = 0; i < n_; ++i)
            if (parity_[i] == color) update(i);
        }
      }
      break;
  }
  ++sweep_count_;
}

void Chain::run(std::uint64_t sweeps) {
  for (std::uint64_t s = 0; s < sweeps; ++s) sweep();
}

void Schedule::validate() const {
  if (sweeps <= burn_in) throw std::invalid_argument("schedule: sweeps must exceed burn_in");
  if (thin == 0) throw std::invalid_argument("schedule: thin must be >= 1");
}

double integrated_autocorrelation(const std::vector<double>& series, double c) {
  const std::size_t N = series.size();
  if (N < 2) return 0.5;
  const double mean = std::accumulate(series.begin(), series.end(), 0.0) / static_cast<double>(N);
  double c0 = 0.0;
  for (double x : series) c0 += (x - mean) * (x - mean);
  c0 /= static_cast<double>(N);
  if (!(c0 > 0.0)) return 0.5;
  double tau = 0.5;
  for (std::size_t t = 1; t < N / 2; ++t) {
    double ct = 0.0;
    for (std::size_t i = 0; i + t < N; ++i) ct += (series[i] - mean) * (series[i + t] - mean);
    tau += ct / static_cast<double>(N) / c0;
    if (static_cast<double>(t) >= c * tau) break;
  }
  return std::max(tau, 0.5);
}

MeanEstimate jackknife_mean(const std::vector<double>& series) {
  MeanEstimate e;
  const std::size_t N = series.size();
  e.samples = N;
  if (N == 0) return e;
  e.mean = std::accumulate(series.begin(), series.end(), 0.0) / static_cast<double>(N);
  if (N < 2) return e;
  e.tau = integrated_autocorrelation(series);
  std::size_t block = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(16.0 * e.tau)));
  block = std::min(block, N / 2);
  const std::size_t B = N / block;
  const std::size_t used = B * block;
  std::vector<double> sums(B, 0.0);
  for (std::size_t i = 0; i < used; ++i) sums[i / block] += series[i];
  const double total = std::accumulate(sums.begin(), sums.end(), 0.0);
  double sq = 0.0;
  std::vector<double> loo(B);
  for (std::size_t b = 0; b < B; ++b) loo[b] = (total - sums[b]) / static_cast<double>(used - block);
  const double loo_mean = std::accumulate(loo.begin(), loo.end(), 0.0) / static_cast<double>(B);
  for (double v : loo) sq += (v - loo_mean) * (v - loo_mean);
  e.stderr_ = std::sqrt(static_cast<double>(B - 1) / static_cast<double>(B) * sq);
  return e;
}

namespace {

struct LayerMap {
  std::vector<int> column;               // site index of l e_d, l = 1..m
  std::vector<std::vector<int>> layer;   // all sites of height l
};

LayerMap layers_of(const CompiledModel& m) {
  int top = 0;
  for (const auto& s : m.sites) top = std::max(top, s.height());
  if (top < 1) throw std::invalid_argument("profile: region has no sites on H+");
  LayerMap map;
  map.column.resize(static_cast<std::size_t>(top));
  map.layer.resize(static_cast<std::size_t>(top));
  for (int l = 1; l <= top; ++l) {
    Site s;
    s.dim = m.dim;
    s[m.dim - 1] = l;
    const int idx = m.index_of(s);
    if (idx < 0) throw std::invalid_argument("profile: central column site " + to_string(s) + " missing");
    map.column[static_cast<std::size_t>(l - 1)] = idx;
  }
  for (std::size_t i = 0; i < m.size(); ++i) {
    const int h = m.sites[i].height();
    if (h >= 1) map.layer[static_cast<std::size_t>(h - 1)].push_back(static_cast<int>(i));
  }
  return map;
}

}  // namespace

ProfileEstimate estimate_profile(const ModelInstance& instance, const Schedule& schedule, std::uint64_t seed,
                                 SweepOptions options, std::uint32_t stream) {
  schedule.validate();
  Chain chain(instance, seed, stream, options);
  const LayerMap map = layers_of(chain.model());
  const std::size_t L = map.column.size();
  std::vector<std::vector<double>> col(L), lay(L);
  chain.run(schedule.burn_in);
  for (std::uint64_t s = schedule.burn_in; s < schedule.sweeps; ++s) {
    chain.sweep();
    if ((s - schedule.burn_in) % schedule.thin != 0) continue;
    const std::int32_t* c = chain.cells();
    for (std::size_t l = 0; l < L; ++l) {
      col[l].push_back(c[map.column[l]] ? 1.0 : -1.0);
      long sum = 0;
      for (int i : map.layer[l]) sum += c[i] ? 1 : -1;
      lay[l].push_back(static_cast<double>(sum) / static_cast<double>(map.layer[l].size()));
    }
  }
  ProfileEstimate p;
  for (std::size_t l = 0; l < L; ++l) {
    const auto a = jackknife_mean(col[l]);
    p.mean.push_back(a.mean);
    p.stderr_.push_back(a.stderr_);
    p.tau.push_back(a.tau);
    const auto b = jackknife_mean(lay[l]);
    p.layer_mean.push_back(b.mean);
    p.layer_stderr.push_back(b.stderr_);
    p.layer_tau.push_back(b.tau);
  }
  p.samples = col.empty() ? 0 : col[0].size();
  p.final_config = chain.config();
  return p;
}

namespace {

ModelInstance with_bc(ModelInstance inst, BoundaryCondition bc) {
  inst.bc = std::move(bc);
  return inst;
}

}  // namespace

CoupledChains::CoupledChains(const ModelInstance& instance, std::uint64_t seed, std::uint32_t stream,
                             SweepOptions options)
    : plus_(with_bc(instance, BoundaryCondition::plus()), seed, stream, options, Start::all_plus),
      minus_(with_bc(instance, BoundaryCondition::minus()), seed, stream, options, Start::all_minus) {}

void CoupledChains::sweep() {
  plus_.sweep();
  minus_.sweep();
}

std::size_t CoupledChains::order_violations() const {
  const std::size_t n = plus_.model().size();
  const std::int32_t* a = plus_.cells();
  const std::int32_t* b = minus_.cells();
  std::size_t v = 0;
  for (std::size_t i = 0; i < n; ++i) v += static_cast<std::size_t>(b[i] > a[i]);
  return v;
}

GapEstimate estimate_gap(const ModelInstance& instance, const std::vector<Site>& sites,
                         const std::vector<double>& weights, const Schedule& schedule, std::uint64_t seed,
                         SweepOptions options, std::uint32_t stream) {
  schedule.validate();
  if (!weights.empty() && weights.size() != sites.size())
    throw std::invalid_argument("estimate_gap: weights and sites differ in length");
  CoupledChains chains(instance, seed, stream, options);
  const CompiledModel& m = chains.plus().model();
  std::vector<int> idx;
  for (const auto& s : sites) {
    const int i = m.index_of(s);
    if (i < 0) throw std::invalid_argument("estimate_gap: site " + to_string(s) + " outside the region");
    idx.push_back(i);
  }
  const std::size_t K = idx.size();
  // Per-site statistics from batch means; the combined observable keeps its full series.
  constexpr std::size_t kBatches = 32;
  const std::uint64_t samples = (schedule.sweeps - schedule.burn_in + schedule.thin - 1) / schedule.thin;
  const std::uint64_t per_batch = std::max<std::uint64_t>(1, samples / kBatches);
  std::vector<double> batch(K * kBatches, 0.0), total(K, 0.0);
  std::vector<std::uint64_t> batch_n(kBatches, 0);
  std::vector<double> combined;
  GapEstimate g;
  g.sites = sites;

  for (std::uint64_t s = 0; s < schedule.burn_in; ++s) {
    chains.sweep();
    g.order_violations += options.kind == UpdateKind::heat_bath ? chains.order_violations() : 0;
  }
  std::uint64_t k = 0;
  for (std::uint64_t s = schedule.burn_in; s < schedule.sweeps; ++s) {
    chains.sweep();
    if (options.kind == UpdateKind::heat_bath) g.order_violations += chains.order_violations();
    if ((s - schedule.burn_in) % schedule.thin != 0) continue;
    const std::size_t b = std::min<std::size_t>(kBatches - 1, static_cast<std::size_t>(k / per_batch));
    ++batch_n[b];
    const std::int32_t* p = chains.plus().cells();
    const std::int32_t* q = chains.minus().cells();
    double w_sum = 0.0;
    for (std::size_t j = 0; j < K; ++j) {
      const double d = 2.0 * (p[idx[j]] - q[idx[j]]);
      batch[j * kBatches + b] += d;
      total[j] += d;
      w_sum += (weights.empty() ? 1.0 : weights[j]) * d;
    }
    combined.push_back(w_sum);
    ++k;
  }
  g.samples = static_cast<std::size_t>(k);
  std::size_t used = 0;
  for (auto n : batch_n) used += n > 0;
  for (std::size_t j = 0; j < K; ++j) {
    const double mean = total[j] / static_cast<double>(k);
    double var = 0.0;
    for (std::size_t b = 0; b < kBatches; ++b)
      if (batch_n[b]) {
        const double bm = batch[j * kBatches + b] / static_cast<double>(batch_n[b]);
        var += (bm - mean) * (bm - mean);
      }
    g.gap.push_back(mean);
    g.stderr_.push_back(used > 1 ? std::sqrt(var / static_cast<double>(used - 1) / static_cast<double>(used)) : 0.0);
  }
  g.weighted = jackknife_mean(combined);
  g.tau.assign(K, g.weighted.tau);
  return g;
}

Raster raster_of(const CompiledModel& model, const SpinConfiguration& config) {
  if (model.dim != 2) throw std::invalid_argument("raster: requires d = 2");
  if (config.size() != model.size()) throw std::invalid_argument("raster: configuration size mismatch");
  Raster r;
  if (model.size() == 0) return r;
  int x0 = model.sites[0][0], x1 = x0, y0 = model.sites[0][1], y1 = y0;
  for (const auto& s : model.sites) {
    x0 = std::min(x0, s[0]);
    x1 = std::max(x1, s[0]);
    y0 = std::min(y0, s[1]);
    y1 = std::max(y1, s[1]);
  }
  r.width = x1 - x0 + 1;
  r.height = y1 - y0 + 1;
  // Sites missing from the bounding box render as minus.
  r.spins.assign(static_cast<std::size_t>(r.width) * static_cast<std::size_t>(r.height), -1);
  for (std::size_t i = 0; i < model.size(); ++i) {
    const auto& s = model.sites[i];
    const auto row = static_cast<std::size_t>(y1 - s[1]);
    r.spins[row * static_cast<std::size_t>(r.width) + static_cast<std::size_t>(s[0] - x0)] = config[i];
  }
  return r;
}

Snapshot snapshot(const ModelInstance& instance, std::uint64_t sweeps, std::uint64_t seed, SweepOptions options,
                  std::uint32_t stream) {
  if (instance.region.dim() != 2) throw std::invalid_argument("snapshot: requires d = 2");
  Chain chain(instance, seed, stream, options);
  chain.run(sweeps);
  Snapshot s;
  s.config = chain.config();
  s.raster = raster_of(chain.model(), s.config);
  long sum = 0, count = 0;
  for (std::size_t i = 0; i < s.config.size(); ++i)
    if (chain.model().sites[i].height() == 1) {
      sum += s.config[i];
      ++count;
    }
  s.wall_magnetization = count ? static_cast<double>(sum) / static_cast<double>(count) : 0.0;
  return s;
}

}  // namespace wetting
