#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "wetting/exact.hpp"
#include "wetting/quadrature.hpp"
#include "wetting/spin_mc.hpp"

namespace wetting {

/// Field family driven by the integration variable s.
enum class FieldPath {
  decay,     // DecayHat(s, delta): layer weights l^{-delta}
  wall_only  // WallOnly(s): only the wall layer
};

/// Which sites of a layer enter the gap. The layer average is what the
/// finite-volume derivative of tau_w sees; the central column stays away
/// from the lateral boundary and is what the lambda_c scan uses.
enum class Observable { layer_average, central_column };

struct Estimator {
  enum class Kind { exact, mc };
  Kind kind = Kind::exact;
  Schedule schedule{20000, 2000, 1};
  std::uint64_t seed = 1;
  SweepOptions sweep{UpdateKind::heat_bath, SiteOrder::checkerboard, std::nullopt, true};
  ExactOptions exact{};

  static Estimator exact_oracle() { return {}; }
  static Estimator monte_carlo(Schedule schedule, std::uint64_t seed) {
    Estimator e;
    e.kind = Kind::mc;
    e.schedule = schedule;
    e.seed = seed;
    return e;
  }
};

struct Box {
  int n = 1;
  int m = 1;
  int dim = 2;
};

struct IntegrandSample {
  double s = 0.0;
  /// beta * w_l * (gap at layer l), l = 1..depth.
  std::vector<double> gap_terms;
  double total = 0.0;
  double stderr_ = 0.0;
  int depth = 0;
  /// Crude bound on the dropped layers: sum_{l > depth} 2 beta w_l over the box.
  double truncation_bound = 0.0;
};

/// d/ds of the finite-box wall free energy along `path`, truncated at
/// `depth` layers (depth <= 0: full box height). `stream` selects the random
/// stream of the MC estimator.
IntegrandSample gap_integrand(double J, double delta, double s, const Box& box, int depth, const Estimator& est,
                              FieldPath path = FieldPath::decay, Observable obs = Observable::layer_average,
                              double beta = 1.0, std::uint32_t stream = 0);

struct TauPoint {
  double lambda = 0.0;
  double tau = 0.0;
  double stderr_ = 0.0;
  std::size_t nodes = 0;
  std::string rule;
  bool non_summable = false;
};

/// Integral of gap_integrand over [0, lambda] with the given rule
/// (gauss(k) or trapezoid(k) panels).
TauPoint tau_w_by_integration(double J, double delta, double lambda, const Box& box, const QuadratureSpec& rule,
                              const Estimator& est, double beta = 1.0, int depth = 0,
                              FieldPath path = FieldPath::decay);

struct TauCurve {
  std::vector<double> lambda;
  std::vector<double> tau;
  std::vector<double> stderr_;
  std::string source;  // "exact_oracle" or "mc"
  Box box;
  int depth = 0;
  std::string rule;
  bool non_summable = false;
};

/// tau_w along a sorted grid starting at 0. Exact: Gauss rule on each
/// panel. MC: trapezoid on the grid nodes.
TauCurve tau_curve(double J, double delta, const std::vector<double>& lambda_grid, const Box& box,
                   const Estimator& est, double beta = 1.0, int depth = 0, FieldPath path = FieldPath::decay,
                   int gauss_points = 32);

struct CurveAudit {
  bool starts_at_zero = true;
  std::size_t monotone_violations = 0;
  std::size_t concavity_violations = 0;
  double worst_second_difference = 0.0;
  bool passed() const { return starts_at_zero && monotone_violations == 0 && concavity_violations == 0; }
};

/// tau(0) = 0, non-decreasing and concave up to `sigmas` combined error bars
/// (plus `slack` for exact curves).
CurveAudit audit_curve(const TauCurve& curve, double sigmas = 3.0, double slack = 1e-10);

struct ScanCurve {
  Box box;
  std::vector<double> integrand;
  std::vector<double> stderr_;
  std::vector<double> tau;  // trapezoid running integral
  std::optional<double> crossing;
  std::optional<double> plateau_onset;
  std::size_t monotone_violations = 0;
};

struct LambdaCScan {
  std::vector<double> lambda;
  std::vector<ScanCurve> curves;
  /// Smallest grid lambda from which the integrand stays below epsilon on
  /// every box of the ladder; empty when no such point (open-ended).
  std::optional<double> crossing;
  /// Distance to the previous grid point: the crossing lies in (lambda_{k-1}, lambda_k].
  double crossing_error = 0.0;
  std::optional<double> plateau_onset;
  bool open_ended = false;
  std::size_t monotone_violations = 0;
  double epsilon = 1e-3;
  int depth = 0;
  FieldPath path = FieldPath::decay;
};

struct ScanOptions {
  double epsilon = 1e-3;
  int depth = 4;
  FieldPath path = FieldPath::decay;
  Observable observable = Observable::central_column;
  double beta = 1.0;
  int jobs = 0;  // 0: hardware concurrency
};

/// Integrand scan over lambda_grid on each box of the ladder.
LambdaCScan lambda_c_scan(double J, double delta, const std::vector<double>& lambda_grid, const std::vector<Box>& ladder,
                          const Estimator& est, const ScanOptions& options);

/// Runs fn(i) for i < count on up to `jobs` threads (0: hardware
/// concurrency). Exceptions are rethrown on the caller, first index first.
void parallel_for(std::size_t count, int jobs, const std::function<void(std::size_t)>& fn);

}  // namespace wetting
