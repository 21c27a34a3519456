#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "wetting/model.hpp"
#include "wetting/rng.hpp"
#include "wetting/simd/kernels.hpp"

namespace wetting {

enum class UpdateKind { heat_bath, metropolis };
enum class SiteOrder { raster, checkerboard, random };
enum class Start { aligned, all_plus, all_minus, random };

struct SweepOptions {
  UpdateKind kind = UpdateKind::heat_bath;
  SiteOrder order = SiteOrder::raster;
  std::optional<simd::Isa> isa;  // empty: active ISA
  bool grid_kernel = true;       // false forces the generic checkerboard loop
};

/// Single-spin-flip chain over a compiled model.
///
/// Sweep t uses the uniforms u(t, i) of site_uniform(seed, stream, t, i),
/// one per site whatever the order, so raster and checkerboard runs of the
/// same seed see the same numbers. Random order draws its permutation from
/// CounterRng(seed, stream ^ 0x80000000).
class Chain {
 public:
  Chain(std::shared_ptr<const CompiledModel> model, std::uint64_t seed, std::uint32_t stream = 0,
        SweepOptions options = {}, Start start = Start::aligned);
  Chain(const ModelInstance& instance, std::uint64_t seed, std::uint32_t stream = 0, SweepOptions options = {},
        Start start = Start::aligned);

  void sweep();
  void run(std::uint64_t sweeps);

  const CompiledModel& model() const { return *model_; }
  std::uint64_t sweep_count() const { return sweep_count_; }
  std::uint64_t seed() const { return seed_; }
  std::uint32_t stream() const { return stream_; }
  const SweepOptions& options() const { return options_; }
  /// True when checkerboard sweeps run through the vector grid kernel.
  bool uses_grid_kernel() const { return grid_; }

  SpinConfiguration config() const;
  void set_config(const SpinConfiguration& config);
  int spin(int site) const { return cells_[offset_ + static_cast<std::size_t>(site)] ? 1 : -1; }
  /// Raw cell view: 1 for plus, 0 for minus, in site order.
  const std::int32_t* cells() const { return cells_.data() + offset_; }

 private:
  void build();
  void heat_bath_site(std::size_t i);
  void metropolis_site(std::size_t i);
  int pattern(std::size_t i) const;

  std::shared_ptr<const CompiledModel> model_;
  std::uint64_t seed_;
  std::uint32_t stream_;
  SweepOptions options_;
  const simd::Kernels* kernels_ = nullptr;
  std::uint64_t sweep_count_ = 0;

  std::size_t n_ = 0;
  int slots_ = 4;
  std::size_t offset_ = 0;              // cells_[offset_ + i] is site i
  std::vector<std::int32_t> cells_;     // padded with zero cells
  std::vector<std::ptrdiff_t> nbr_;     // n * slots, relative cell offsets (absent: a pad cell)
  std::vector<double> table_;           // n * 2^slots heat-bath probabilities
  std::vector<double> slot_J_;          // n * slots
  std::vector<double> h_eff_;           // field + frontier
  std::vector<std::int32_t> parity_;    // padded to a multiple of 8 with 2
  std::vector<double> u_;
  std::vector<std::uint32_t> order_;
  CounterRng order_rng_;
  bool grid_ = false;
  std::ptrdiff_t height_ = 0;
};

/// Stable logistic 1 / (1 + e^{-x}).
double logistic(double x);

/// Start configuration: aligned follows the boundary sign (plus for free).
SpinConfiguration initial_config(const CompiledModel& model, Start start, std::uint64_t seed = 0);

struct Schedule {
  std::uint64_t sweeps = 1000;   // total, burn-in included
  std::uint64_t burn_in = 100;
  std::uint64_t thin = 1;
  void validate() const;         // throws std::invalid_argument
};

/// Integrated autocorrelation time with Sokal's automatic window (c = 6).
/// tau = 1/2 for white noise; a constant series gives 1/2.
double integrated_autocorrelation(const std::vector<double>& series, double c = 6.0);

struct MeanEstimate {
  double mean = 0.0;
  double stderr_ = 0.0;
  double tau = 0.5;
  std::size_t samples = 0;
};

/// Mean with a jackknife error over blocks of 16 tau samples (at least two blocks).
MeanEstimate jackknife_mean(const std::vector<double>& series);

struct ProfileEstimate {
  /// Layer l = 1..m (index l - 1): <sigma_{l e_d}> on the central column.
  std::vector<double> mean;
  std::vector<double> stderr_;
  std::vector<double> tau;
  /// Same statistics for the average over the whole layer.
  std::vector<double> layer_mean;
  std::vector<double> layer_stderr;
  std::vector<double> layer_tau;
  std::size_t samples = 0;
  SpinConfiguration final_config;
};

/// Magnetization profile of a SemiBox instance along the wall normal.
ProfileEstimate estimate_profile(const ModelInstance& instance, const Schedule& schedule, std::uint64_t seed,
                                 SweepOptions options = {}, std::uint32_t stream = 0);

/// Plus and minus chains driven by the same uniforms. Under heat bath the
/// minus chain stays pointwise below the plus chain.
class CoupledChains {
 public:
  /// `instance` supplies region, couplings and field; bcs are forced to
  /// plus and minus. Starts: all plus and all minus.
  CoupledChains(const ModelInstance& instance, std::uint64_t seed, std::uint32_t stream = 0,
                SweepOptions options = {});

  void sweep();
  Chain& plus() { return plus_; }
  Chain& minus() { return minus_; }
  const Chain& plus() const { return plus_; }
  const Chain& minus() const { return minus_; }
  /// Number of sites where the minus chain is above the plus chain.
  std::size_t order_violations() const;

 private:
  Chain plus_;
  Chain minus_;
};

struct GapEstimate {
  /// Per observed site: <sigma_i>^+ - <sigma_i>^-.
  std::vector<Site> sites;
  std::vector<double> gap;
  std::vector<double> stderr_;
  std::vector<double> tau;
  /// Weighted sum of the per-site gaps, with its own error bar.
  MeanEstimate weighted;
  std::size_t samples = 0;
  std::size_t order_violations = 0;
};

/// Gap at `sites` from coupled chains; `weights` (same length, optional)
/// define the combined observable sum_k w_k (sigma^+ - sigma^-)(site_k).
GapEstimate estimate_gap(const ModelInstance& instance, const std::vector<Site>& sites,
                         const std::vector<double>& weights, const Schedule& schedule, std::uint64_t seed,
                         SweepOptions options = {}, std::uint32_t stream = 0);

/// 2-d raster of a configuration: rows from the top layer down to the wall.
struct Raster {
  int width = 0;
  int height = 0;
  std::vector<std::int8_t> spins;  // row-major, +-1
};

Raster raster_of(const CompiledModel& model, const SpinConfiguration& config);

struct Snapshot {
  Raster raster;
  SpinConfiguration config;
  double wall_magnetization = 0.0;  // final configuration, layer 1 average
};

/// Runs a chain and renders the final configuration. Requires d = 2.
Snapshot snapshot(const ModelInstance& instance, std::uint64_t sweeps, std::uint64_t seed, SweepOptions options = {},
                  std::uint32_t stream = 0);

}  // namespace wetting
