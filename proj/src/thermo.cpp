#include "wetting/thermo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <stdexcept>
#include <thread>

namespace wetting {

void parallel_for(std::size_t count, int jobs, const std::function<void(std::size_t)>& fn) {
  if (count == 0) return;
  std::size_t workers = jobs > 0 ? static_cast<std::size_t>(jobs) : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, count);
  std::vector<std::exception_ptr> errors(count);
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < count; i = next++) {
          try {
            fn(i);
          } catch (...) {
            errors[i] = std::current_exception();
          }
        }
      });
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

namespace {

double layer_weight(FieldPath path, double delta, int l) {
  if (path == FieldPath::wall_only) return l == 1 ? 1.0 : 0.0;
  return std::pow(static_cast<double>(l), -delta);
}

FieldSpec path_field(FieldPath path, double s, double delta) {
  return path == FieldPath::wall_only ? FieldSpec::wall_only(s) : FieldSpec::decay_hat(s, delta);
}

bool non_summable(FieldPath path, double delta) { return path == FieldPath::decay && delta <= 1.0; }

}  // namespace

IntegrandSample gap_integrand(double J, double delta, double s, const Box& box, int depth, const Estimator& est,
                              FieldPath path, Observable obs, double beta, std::uint32_t stream) {
  if (!(s >= 0.0) || !std::isfinite(s)) throw std::invalid_argument("gap_integrand: s must be finite and >= 0");
  if (box.n < 0 || box.m < 1) throw std::invalid_argument("gap_integrand: invalid box");
  if (depth > box.m) throw std::invalid_argument("gap_integrand: depth exceeds the box height");
  if (depth <= 0) depth = box.m;
  if (path == FieldPath::wall_only) depth = 1;

  IntegrandSample out;
  out.s = s;
  out.depth = depth;
  for (int l = depth + 1; l <= box.m; ++l) out.truncation_bound += 2.0 * beta * layer_weight(path, delta, l);

  const ModelInstance inst = ModelInstance::make(Region::semi_box(box.dim, box.n, box.m), BoundaryCondition::plus(),
                                                 CouplingSpec::uniform(J), path_field(path, s, delta), beta);
  const std::vector<Site> all = sites_of(inst.region);
  double wall = 1.0;
  for (int k = 0; k + 1 < box.dim; ++k) wall *= 2.0 * box.n + 1.0;

  // Observed sites with their weights in the integrand.
  std::vector<Site> sites;
  std::vector<double> weights;
  std::vector<int> layer_of;
  for (const auto& site : all) {
    const int l = site.height();
    if (l > depth) continue;
    bool central = true;
    for (int k = 0; k + 1 < box.dim; ++k) central = central && site[k] == 0;
    if (obs == Observable::central_column && !central) continue;
    const double share = obs == Observable::central_column ? 1.0 : 1.0 / wall;
    sites.push_back(site);
    weights.push_back(beta * layer_weight(path, delta, l) * share);
    layer_of.push_back(l);
  }

  out.gap_terms.assign(static_cast<std::size_t>(depth), 0.0);
  if (est.kind == Estimator::Kind::exact) {
    const std::vector<double> gaps = exact_gaps(inst, est.exact);
    // exact_gaps follows sites_of order.
    std::size_t k = 0;
    for (std::size_t i = 0; i < all.size() && k < sites.size(); ++i)
      if (all[i] == sites[k]) {
        out.gap_terms[static_cast<std::size_t>(layer_of[k] - 1)] += weights[k] * gaps[i];
        ++k;
      }
  } else {
    const GapEstimate g = estimate_gap(inst, sites, weights, est.schedule, est.seed, est.sweep, stream);
    for (std::size_t k = 0; k < sites.size(); ++k)
      out.gap_terms[static_cast<std::size_t>(layer_of[k] - 1)] += weights[k] * g.gap[k];
    out.stderr_ = g.weighted.stderr_;
  }
  for (double t : out.gap_terms) out.total += t;
  return out;
}

TauPoint tau_w_by_integration(double J, double delta, double lambda, const Box& box, const QuadratureSpec& rule,
                              const Estimator& est, double beta, int depth, FieldPath path) {
  if (!(lambda >= 0.0)) throw std::invalid_argument("tau_w_by_integration: lambda must be >= 0");
  TauPoint p;
  p.lambda = lambda;
  p.rule = rule.name();
  p.non_summable = non_summable(path, delta);
  if (lambda == 0.0) return p;
  const QuadratureRule q = rule.rule(0.0, lambda);
  p.nodes = q.nodes.size();
  std::vector<IntegrandSample> samples(q.nodes.size());
  parallel_for(q.nodes.size(), 0, [&](std::size_t k) {
    samples[k] = gap_integrand(J, delta, q.nodes[k], box, depth, est, path, Observable::layer_average, beta,
                               static_cast<std::uint32_t>(k));
  });
  double var = 0.0;
  for (std::size_t k = 0; k < samples.size(); ++k) {
    p.tau += q.weights[k] * samples[k].total;
    var += q.weights[k] * q.weights[k] * samples[k].stderr_ * samples[k].stderr_;
  }
  p.stderr_ = std::sqrt(var);
  return p;
}

namespace {

void check_grid(const std::vector<double>& grid) {
  if (grid.empty()) throw std::invalid_argument("lambda grid is empty");
  if (grid.front() < 0.0) throw std::invalid_argument("lambda grid must be >= 0");
  if (!std::is_sorted(grid.begin(), grid.end()) || std::adjacent_find(grid.begin(), grid.end()) != grid.end())
    throw std::invalid_argument("lambda grid must be strictly increasing");
}

}  // namespace

TauCurve tau_curve(double J, double delta, const std::vector<double>& grid, const Box& box, const Estimator& est,
                   double beta, int depth, FieldPath path, int gauss_points) {
  check_grid(grid);
  if (grid.front() != 0.0) throw std::invalid_argument("tau_curve: grid must start at 0");
  TauCurve c;
  c.lambda = grid;
  c.box = box;
  c.depth = depth <= 0 ? box.m : depth;
  c.non_summable = non_summable(path, delta);
  const std::size_t K = grid.size();
  c.tau.assign(K, 0.0);
  c.stderr_.assign(K, 0.0);

  if (est.kind == Estimator::Kind::exact) {
    c.source = "exact_oracle";
    const QuadratureSpec spec{QuadratureKind::gauss, gauss_points};
    c.rule = spec.name();
    std::vector<double> panel(K, 0.0);
    parallel_for(K - 1, 0, [&](std::size_t k) {
      const QuadratureRule q = spec.rule(grid[k], grid[k + 1]);
      double sum = 0.0;
      for (std::size_t j = 0; j < q.nodes.size(); ++j)
        sum += q.weights[j] *
               gap_integrand(J, delta, q.nodes[j], box, depth, est, path, Observable::layer_average, beta).total;
      panel[k + 1] = sum;
    });
    for (std::size_t k = 1; k < K; ++k) c.tau[k] = c.tau[k - 1] + panel[k];
    return c;
  }

  c.source = "mc";
  c.rule = "trapezoid(grid)";
  std::vector<IntegrandSample> s(K);
  parallel_for(K, 0, [&](std::size_t k) {
    s[k] = gap_integrand(J, delta, grid[k], box, depth, est, path, Observable::layer_average, beta,
                         static_cast<std::uint32_t>(k));
  });
  for (std::size_t k = 1; k < K; ++k) {
    const double h = grid[k] - grid[k - 1];
    c.tau[k] = c.tau[k - 1] + 0.5 * h * (s[k - 1].total + s[k].total);
    double var = 0.0;
    for (std::size_t j = 0; j <= k; ++j) {
      double w = 0.0;
      if (j > 0) w += 0.5 * (grid[j] - grid[j - 1]);
      if (j < k) w += 0.5 * (grid[j + 1] - grid[j]);
      var += w * w * s[j].stderr_ * s[j].stderr_;
    }
    c.stderr_[k] = std::sqrt(var);
  }
  return c;
}

CurveAudit audit_curve(const TauCurve& c, double sigmas, double slack) {
  CurveAudit a;
  const std::size_t K = c.lambda.size();
  a.starts_at_zero = K > 0 && c.lambda[0] == 0.0 && std::abs(c.tau[0]) <= slack;
  auto err = [&](std::size_t k) { return c.stderr_.empty() ? 0.0 : c.stderr_[k]; };
  for (std::size_t k = 0; k + 1 < K; ++k) {
    const double allow = sigmas * std::hypot(err(k), err(k + 1)) + slack;
    if (c.tau[k + 1] - c.tau[k] < -allow) ++a.monotone_violations;
  }
  a.worst_second_difference = -INFINITY;
  for (std::size_t k = 0; k + 2 < K; ++k) {
    const double h0 = c.lambda[k + 1] - c.lambda[k];
    const double h1 = c.lambda[k + 2] - c.lambda[k + 1];
    const double s0 = (c.tau[k + 1] - c.tau[k]) / h0;
    const double s1 = (c.tau[k + 2] - c.tau[k + 1]) / h1;
    const double e = std::sqrt((err(k) * err(k) + err(k + 1) * err(k + 1)) / (h0 * h0) +
                               (err(k + 1) * err(k + 1) + err(k + 2) * err(k + 2)) / (h1 * h1));
    a.worst_second_difference = std::max(a.worst_second_difference, s1 - s0);
    if (s1 - s0 > sigmas * e + slack * (1.0 / h0 + 1.0 / h1)) ++a.concavity_violations;
  }
  if (K < 3) a.worst_second_difference = 0.0;
  return a;
}

LambdaCScan lambda_c_scan(double J, double delta, const std::vector<double>& grid, const std::vector<Box>& ladder,
                          const Estimator& est, const ScanOptions& opt) {
  check_grid(grid);
  if (!(opt.epsilon > 0.0)) throw std::invalid_argument("lambda_c_scan: epsilon must be > 0");
  if (ladder.empty()) throw std::invalid_argument("lambda_c_scan: empty box ladder");
  LambdaCScan scan;
  scan.lambda = grid;
  scan.epsilon = opt.epsilon;
  scan.path = opt.path;
  scan.depth = opt.path == FieldPath::wall_only ? 1 : opt.depth;
  const std::size_t K = grid.size();
  const std::size_t B = ladder.size();
  std::vector<IntegrandSample> samples(K * B);
  const std::uint32_t role = opt.path == FieldPath::wall_only ? 1u : 0u;
  parallel_for(K * B, opt.jobs, [&](std::size_t item) {
    const Box& box = ladder[item / K];
    const int depth = std::min(scan.depth, box.m);
    samples[item] = gap_integrand(J, delta, grid[item % K], box, depth, est, opt.path, opt.observable, opt.beta,
                                  stream_id(static_cast<std::uint32_t>(item), role));
  });

  std::size_t worst_index = 0;
  bool all_cross = true;
  for (std::size_t b = 0; b < B; ++b) {
    ScanCurve c;
    c.box = ladder[b];
    for (std::size_t k = 0; k < K; ++k) {
      c.integrand.push_back(samples[b * K + k].total);
      c.stderr_.push_back(samples[b * K + k].stderr_);
    }
    c.tau.assign(K, 0.0);
    for (std::size_t k = 1; k < K; ++k)
      c.tau[k] = c.tau[k - 1] + 0.5 * (grid[k] - grid[k - 1]) * (c.integrand[k - 1] + c.integrand[k]);
    // Smallest k with integrand below epsilon from k onwards.
    std::optional<std::size_t> cross;
    for (std::size_t k = K; k-- > 0;) {
      if (!(c.integrand[k] < opt.epsilon)) break;
      cross = k;
    }
    if (cross) {
      c.crossing = grid[*cross];
      worst_index = std::max(worst_index, *cross);
    } else {
      all_cross = false;
    }
    for (std::size_t k = 0; k < K; ++k)
      if (c.tau[K - 1] - c.tau[k] <= opt.epsilon * (grid[K - 1] - grid[k])) {
        c.plateau_onset = grid[k];
        break;
      }
    for (std::size_t k = 0; k + 1 < K; ++k)
      if (c.integrand[k + 1] > c.integrand[k] + 3.0 * std::hypot(c.stderr_[k], c.stderr_[k + 1]) + 1e-12)
        ++c.monotone_violations;
    scan.monotone_violations += c.monotone_violations;
    if (c.plateau_onset) scan.plateau_onset = std::max(scan.plateau_onset.value_or(grid[0]), *c.plateau_onset);
    scan.curves.push_back(std::move(c));
  }
  if (all_cross) {
    scan.crossing = grid[worst_index];
    scan.crossing_error = worst_index > 0 ? grid[worst_index] - grid[worst_index - 1] : 0.0;
  } else {
    scan.open_ended = true;
  }
  return scan;
}

}  // namespace wetting
