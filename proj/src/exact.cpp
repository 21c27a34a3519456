#include "wetting/exact.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "wetting/error.hpp"
#include "wetting/quadrature.hpp"
#include "wetting/rng.hpp"

namespace wetting {

namespace {

ExactMethod choose_method(const CompiledModel& m, const ExactOptions& opt) {
  const int n = static_cast<int>(m.size());
  const bool tm_ok = TransferMatrix::applicable(m, opt.transfer_width_cap);
  const bool enum_ok = n <= opt.enumeration_cap;
  switch (opt.method) {
    case ExactMethod::enumeration:
      if (!enum_ok) throw CapacityError("exact: " + std::to_string(n) + " sites exceed the enumeration cap");
      return ExactMethod::enumeration;
    case ExactMethod::transfer:
      if (!tm_ok) throw CapacityError("exact: transfer matrix not applicable to this region");
      return ExactMethod::transfer;
    case ExactMethod::automatic:
      break;
  }
  if (enum_ok && !tm_ok) return ExactMethod::enumeration;
  if (!enum_ok && tm_ok) return ExactMethod::transfer;
  if (!enum_ok && !tm_ok)
    throw CapacityError("exact: " + std::to_string(n) +
                        " sites exceed the enumeration cap and the region is not a narrow 2-d box");
  // Both possible: compare rough costs of a full magnetization profile.
  const double enum_cost = std::ldexp(12.0, n);
  const double tm_cost = std::ldexp(static_cast<double>(n) * (2.0 * n + 1.0), TransferMatrix::width_of(m) + 1);
  return enum_cost <= tm_cost ? ExactMethod::enumeration : ExactMethod::transfer;
}

const simd::Kernels& kernels_of(const ExactOptions& opt) {
  return opt.kernels ? *opt.kernels : simd::active_kernels();
}

FieldSpec with_wall(const FieldSpec& field, double lambda) {
  if (lambda == 0.0) return field;
  if (std::holds_alternative<FieldSpec::Zero>(field.variant())) return FieldSpec::wall_only(lambda);
  return FieldSpec::sum({FieldSpec::wall_only(lambda), field});
}

std::size_t wall_size(int dim, int n) {
  std::size_t w = 1;
  for (int k = 0; k + 1 < dim; ++k) w *= static_cast<std::size_t>(2 * n + 1);
  return w;
}

double log_z(const ModelInstance& inst, const ExactOptions& opt) { return ExactSolver(compile(inst), opt).log_partition(); }

ModelInstance with_bc(ModelInstance inst, BoundaryCondition bc) {
  inst.bc = std::move(bc);
  return inst;
}

void require_non_negative(const ModelInstance& inst, const char* who) {
  if (!inst.field.parameters_non_negative())
    throw std::invalid_argument(std::string(who) + ": requires a non-negative field");
}

std::string bits_string(std::uint64_t bits, int n) {
  std::string s;
  for (int i = 0; i < n; ++i) s.push_back(((bits >> i) & 1u) ? '1' : '0');
  return s;
}

}  // namespace

void InequalityReport::record(double margin, const std::string& where) {
  ++checks;
  if (checks == 1 || margin < worst_margin) {
    worst_margin = margin;
    witness = where;
  }
  if (margin < -slack) ++violations;
}

ExactSolver::ExactSolver(CompiledModel model, ExactOptions options)
    : model_(std::move(model)), options_(options), method_(choose_method(model_, options_)) {
  if (method_ == ExactMethod::transfer) tm_.emplace(model_, options_.transfer_width_cap);
}

void ExactSolver::run_enumeration(bool pairs) {
  EnumerationResult r = enumerate(model_, pairs, kernels_of(options_), options_.enumeration_cap);
  log_z_ = r.log_partition;
  mag_ = std::move(r.magnetization);
  if (pairs) pairs_ = std::move(r.pair);
}

double ExactSolver::log_partition() {
  if (!log_z_) {
    if (method_ == ExactMethod::enumeration)
      run_enumeration(false);
    else
      log_z_ = tm_->log_partition();
  }
  return *log_z_;
}

const std::vector<double>& ExactSolver::magnetizations() {
  if (mag_.empty() && model_.size() > 0) {
    if (method_ == ExactMethod::enumeration) {
      run_enumeration(false);
    } else {
      mag_.resize(model_.size());
      for (std::size_t i = 0; i < model_.size(); ++i) mag_[i] = tm_->magnetization(static_cast<int>(i));
    }
  }
  return mag_;
}

double ExactSolver::magnetization(int site) {
  if (method_ == ExactMethod::transfer && mag_.empty()) return tm_->magnetization(site);
  return magnetizations()[static_cast<std::size_t>(site)];
}

double ExactSolver::pair(int a, int b) {
  if (a == b) return 1.0;
  if (method_ == ExactMethod::transfer) return tm_->pair(a, b);
  if (pairs_.empty()) run_enumeration(true);
  return pairs_[static_cast<std::size_t>(a) * model_.size() + static_cast<std::size_t>(b)];
}

double log_partition(const ModelInstance& instance, ExactOptions options) { return log_z(instance, options); }

double expectation(const ModelInstance& instance, const std::vector<Site>& sites, ExactOptions options) {
  CompiledModel m = compile(instance);
  std::vector<int> idx;
  for (const auto& s : sites) {
    const int i = m.index_of(s);
    if (i < 0) throw std::invalid_argument("expectation: site " + to_string(s) + " outside the region");
    if (std::find(idx.begin(), idx.end(), i) != idx.end())
      throw std::invalid_argument("expectation: repeated site " + to_string(s));
    idx.push_back(i);
  }
  if (idx.empty()) return 1.0;
  if (idx.size() <= 2) {
    ExactSolver solver(std::move(m), options);
    return idx.size() == 1 ? solver.magnetization(idx[0]) : solver.pair(idx[0], idx[1]);
  }
  if (static_cast<int>(m.size()) <= kDistributionCap) {
    const auto dist = gibbs_distribution(m);
    double e = 0.0;
    for (std::size_t c = 0; c < dist.size(); ++c) {
      int sgn = 1;
      for (int i : idx) sgn *= ((c >> i) & 1u) ? 1 : -1;
      e += sgn * dist[c];
    }
    return e;
  }
  if (!TransferMatrix::applicable(m, options.transfer_width_cap) || idx.size() > 16)
    throw CapacityError("expectation: observable too large for the exact paths");
  TransferMatrix tm(m, options.transfer_width_cap);
  const std::size_t combos = std::size_t{1} << idx.size();
  std::vector<double> logs(combos);
  std::vector<int> sgn(combos);
  for (std::size_t c = 0; c < combos; ++c) {
    std::vector<std::pair<int, int>> pins;
    int s = 1;
    for (std::size_t k = 0; k < idx.size(); ++k) {
      const int spin = ((c >> k) & 1u) ? 1 : -1;
      pins.push_back({idx[k], spin});
      s *= spin;
    }
    logs[c] = tm.log_partition(pins);
    sgn[c] = s;
  }
  const double top = *std::max_element(logs.begin(), logs.end());
  double num = 0.0, den = 0.0;
  for (std::size_t c = 0; c < combos; ++c) {
    const double w = std::exp(logs[c] - top);
    num += sgn[c] * w;
    den += w;
  }
  return num / den;
}

// ---------------------------------------------------------------------------

double finite_surface_free_energy(int n, Sign sign, const CouplingSpec& couplings, const FieldSpec& field,
                                  double lambda, double beta, int dim, ExactOptions options) {
  const BoundaryCondition bc = sign == Sign::plus ? BoundaryCondition::plus() : BoundaryCondition::minus();
  const ModelInstance semi =
      ModelInstance::make(Region::semi_box(dim, n, n), bc, couplings, with_wall(field, lambda), beta);
  const ModelInstance bulk =
      ModelInstance::make(Region::extended_box(dim, n, Reflection::half_plane), bc, couplings, FieldSpec::zero(), beta);
  const double lz = log_z(semi, options);
  const double lq = log_z(bulk, options);
  return -(2.0 * lz - lq) / (2.0 * static_cast<double>(wall_size(dim, n)));
}

double finite_wall_free_energy(int n, const CouplingSpec& couplings, const FieldSpec& field, double lambda,
                               double beta, int dim, int m, ExactOptions options) {
  if (m < 0) m = n;
  const ModelInstance plus = ModelInstance::make(Region::semi_box(dim, n, m), BoundaryCondition::plus(), couplings,
                                                 with_wall(field, lambda), beta);
  const ModelInstance minus = with_bc(plus, BoundaryCondition::minus());
  return -(log_z(minus, options) - log_z(plus, options)) / static_cast<double>(wall_size(dim, n));
}

double finite_interface_free_energy(int m, int n, double J, double beta, int dim, ExactOptions options) {
  const ModelInstance plus = ModelInstance::make(Region::full_box(dim, m, n), BoundaryCondition::plus(),
                                                 CouplingSpec::uniform(J), FieldSpec::zero(), beta);
  const ModelInstance mp = with_bc(plus, BoundaryCondition::minus_plus());
  return -(log_z(mp, options) - log_z(plus, options)) / static_cast<double>(wall_size(dim, m));
}

namespace {

CompiledModel xi_model(int n, double t, const CouplingSpec& couplings, const FieldSpec& field, double lambda,
                       double beta, int dim, std::vector<std::pair<int, int>>* cut) {
  ModelInstance inst = ModelInstance::make(Region::extended_box(dim, n, Reflection::half_plane),
                                           BoundaryCondition::plus(), couplings, FieldSpec::zero(), beta);
  CompiledModel m = compile(inst);
  const FieldSpec mirrored = FieldSpec::mirrored(with_wall(field, lambda));
  for (std::size_t i = 0; i < m.size(); ++i) m.field[i] = t * field_at(mirrored, m.sites[i]);
  for (auto& b : m.bonds) {
    const int ha = m.sites[static_cast<std::size_t>(b.a)].height();
    const int hb = m.sites[static_cast<std::size_t>(b.b)].height();
    if ((ha == 1 && hb == 0) || (ha == 0 && hb == 1)) {
      if (cut) cut->push_back({b.a, b.b});
      b.J *= (1.0 - t);
    }
  }
  return m;
}

}  // namespace

double interpolation_integrand(int n, double t, const CouplingSpec& couplings, const FieldSpec& field, double lambda,
                               double beta, int dim, ExactOptions options) {
  std::vector<std::pair<int, int>> cut;
  CompiledModel m = xi_model(n, t, couplings, field, lambda, beta, dim, &cut);
  // Bare couplings of the cut bonds (before the (1 - t) factor).
  CompiledModel bare = xi_model(n, 0.0, couplings, field, lambda, beta, dim, nullptr);
  const FieldSpec mirrored = FieldSpec::mirrored(with_wall(field, lambda));
  std::vector<double> hbar(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) hbar[i] = field_at(mirrored, m.sites[i]);
  ExactSolver solver(std::move(m), options);
  double total = 0.0;
  for (const auto& [a, b] : cut) {
    double J = 0.0;
    for (const auto& bond : bare.bonds)
      if ((bond.a == a && bond.b == b) || (bond.a == b && bond.b == a)) J = bond.J;
    total -= J * solver.pair(a, b);
  }
  const auto& mag = solver.magnetizations();
  for (std::size_t i = 0; i < hbar.size(); ++i) total += hbar[i] * mag[i];
  return beta * total;
}

InterpolationReport interpolated_log_ratio(int n, std::span<const double> t_grid, const CouplingSpec& couplings,
                                           const FieldSpec& field, double lambda, double beta, int dim,
                                           ExactOptions options) {
  QuadratureRule rule;
  InterpolationReport rep;
  if (t_grid.empty()) {
    rule = gauss_legendre(64, 0.0, 1.0);
    rep.rule = "gauss(64)";
  } else {
    if (t_grid.size() < 2) throw std::invalid_argument("interpolated_log_ratio: insufficient nodes (need at least 2)");
    std::vector<double> nodes(t_grid.begin(), t_grid.end());
    if (!std::is_sorted(nodes.begin(), nodes.end()) || nodes.front() != 0.0 || nodes.back() != 1.0)
      throw std::invalid_argument("interpolated_log_ratio: t_grid must be sorted and span [0, 1]");
    rule = trapezoid_on(nodes);
    rep.rule = "trapezoid(" + std::to_string(nodes.size() - 1) + ")";
  }
  const double l1 = ExactSolver(xi_model(n, 1.0, couplings, field, lambda, beta, dim, nullptr), options).log_partition();
  const double l0 = ExactSolver(xi_model(n, 0.0, couplings, field, lambda, beta, dim, nullptr), options).log_partition();
  rep.direct = l1 - l0;
  double q = 0.0;
  for (std::size_t k = 0; k < rule.nodes.size(); ++k)
    q += rule.weights[k] * interpolation_integrand(n, rule.nodes[k], couplings, field, lambda, beta, dim, options);
  rep.quadrature = q;
  rep.gap = std::abs(rep.direct - rep.quadrature);
  rep.nodes = rule.nodes.size();
  rep.non_summable = field.has_non_summable_decay();
  return rep;
}

// ---------------------------------------------------------------------------

InequalityReport check_fkg(const ModelInstance& instance, int trials, std::uint64_t seed, ExactOptions) {
  require_non_negative(instance, "check_fkg");
  const CompiledModel m = compile(instance);
  const int n = static_cast<int>(m.size());
  const std::vector<double> dist = gibbs_distribution(m);
  CounterRng rng(seed, 0x464b47u);
  InequalityReport rep;
  rep.name = "fkg";
  auto random_increasing = [&] {
    // max over 1..3 terms of min over a subset of 1..3 sites.
    std::vector<std::uint64_t> terms(1 + rng.below(3));
    for (auto& t : terms) {
      const int size = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(std::min(n, 3))));
      t = 0;
      while (std::popcount(t) < size) t |= std::uint64_t{1} << rng.below(static_cast<std::uint64_t>(n));
    }
    return terms;
  };
  auto eval = [](const std::vector<std::uint64_t>& terms, std::uint64_t c) {
    for (auto t : terms)
      if ((c & t) == t) return 1.0;
    return 0.0;
  };
  auto describe = [&](const std::vector<std::uint64_t>& terms) {
    std::string s = "max(";
    for (std::size_t i = 0; i < terms.size(); ++i) s += (i ? "," : "") + bits_string(terms[i], n);
    return s + ")";
  };
  for (int trial = 0; trial < trials; ++trial) {
    const auto f = random_increasing();
    const auto g = random_increasing();
    double ef = 0.0, eg = 0.0, efg = 0.0;
    for (std::size_t c = 0; c < dist.size(); ++c) {
      const double fv = eval(f, c), gv = eval(g, c);
      ef += fv * dist[c];
      eg += gv * dist[c];
      efg += fv * gv * dist[c];
    }
    rep.record(efg - ef * eg, "f=" + describe(f) + " g=" + describe(g));
  }
  return rep;
}

InequalityReport check_dvi(const ModelInstance& instance, ExactOptions options) {
  require_non_negative(instance, "check_dvi");
  ExactSolver plus(compile(with_bc(instance, BoundaryCondition::plus())), options);
  ExactSolver minus(compile(with_bc(instance, BoundaryCondition::minus())), options);
  const auto& sites = plus.model().sites;
  const int n = static_cast<int>(sites.size());
  const auto mp = plus.magnetizations();
  const auto mm = minus.magnetizations();
  InequalityReport rep;
  rep.name = "dvi";
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      const double pp = plus.pair(i, j), pm = minus.pair(i, j);
      const std::string where = to_string(sites[static_cast<std::size_t>(i)]) + "," + to_string(sites[static_cast<std::size_t>(j)]);
      rep.record(pp - pm, "pair " + where);
      const double trunc_p = pp - mp[static_cast<std::size_t>(i)] * mp[static_cast<std::size_t>(j)];
      const double trunc_m = pm - mm[static_cast<std::size_t>(i)] * mm[static_cast<std::size_t>(j)];
      rep.record(trunc_m - trunc_p, "truncated " + where);
    }
  return rep;
}

std::vector<double> exact_gaps(const ModelInstance& instance, ExactOptions options) {
  ExactSolver plus(compile(with_bc(instance, BoundaryCondition::plus())), options);
  ExactSolver minus(compile(with_bc(instance, BoundaryCondition::minus())), options);
  std::vector<double> gap = plus.magnetizations();
  const auto& mm = minus.magnetizations();
  for (std::size_t i = 0; i < gap.size(); ++i) gap[i] -= mm[i];
  return gap;
}

GapScan check_gap_monotone_in_field(const ModelInstance& instance, const Site& i, const Site& j,
                                    std::span<const double> h_grid, ExactOptions options) {
  require_non_negative(instance, "check_gap_monotone_in_field");
  CompiledModel plus = compile(with_bc(instance, BoundaryCondition::plus()));
  CompiledModel minus = compile(with_bc(instance, BoundaryCondition::minus()));
  const int ii = plus.index_of(i), jj = plus.index_of(j);
  if (ii < 0 || jj < 0) throw std::invalid_argument("check_gap_monotone_in_field: site outside the region");
  GapScan scan;
  scan.report.name = "gap-monotone";
  for (double h : h_grid) {
    if (h < 0.0) throw std::invalid_argument("check_gap_monotone_in_field: field grid must be non-negative");
    plus.field[static_cast<std::size_t>(jj)] = h;
    minus.field[static_cast<std::size_t>(jj)] = h;
    const double gap = ExactSolver(plus, options).magnetization(ii) - ExactSolver(minus, options).magnetization(ii);
    if (!scan.gap.empty()) {
      std::ostringstream where;
      where << "h_j " << scan.h.back() << " -> " << h;
      scan.report.record(scan.gap.back() - gap, where.str());
    }
    scan.h.push_back(h);
    scan.gap.push_back(gap);
  }
  return scan;
}

InequalityReport check_tau_concavity_and_monotonicity(int n, std::span<const double> J_grid,
                                                      std::span<const double> lambda_grid, double delta, double beta,
                                                      int dim, int m, ExactOptions options) {
  if (m < 0) m = n;
  InequalityReport rep;
  rep.name = "tau-concavity-monotonicity";
  rep.slack = 1e-10;
  std::vector<double> Js(J_grid.begin(), J_grid.end());
  std::vector<double> ls(lambda_grid.begin(), lambda_grid.end());
  std::sort(Js.begin(), Js.end());
  std::sort(ls.begin(), ls.end());
  auto tau = [&](double J, const FieldSpec& f) {
    return finite_wall_free_energy(n, CouplingSpec::uniform(J), f, 0.0, beta, dim, m, options);
  };
  std::vector<std::vector<double>> table(Js.size(), std::vector<double>(ls.size()));
  for (std::size_t a = 0; a < Js.size(); ++a)
    for (std::size_t b = 0; b < ls.size(); ++b) table[a][b] = tau(Js[a], FieldSpec::decay_hat(ls[b], delta));

  auto fmt = [](const char* what, double J, double l) {
    std::ostringstream os;
    os << what << " J=" << J << " lambda=" << l;
    return os.str();
  };
  // (a) non-decreasing in J.
  for (std::size_t a = 0; a + 1 < Js.size(); ++a)
    for (std::size_t b = 0; b < ls.size(); ++b) rep.record(table[a + 1][b] - table[a][b], fmt("J-monotone", Js[a], ls[b]));
  // (a) non-decreasing under a bump of a single layer value.
  const double bump = 0.1;
  for (std::size_t a = 0; a < Js.size(); ++a)
    for (std::size_t b = 0; b < ls.size(); ++b)
      for (int layer = 1; layer <= m; ++layer) {
        std::vector<double> values(static_cast<std::size_t>(layer), 0.0);
        values.back() = bump;
        const FieldSpec bumped = FieldSpec::sum({FieldSpec::decay_hat(ls[b], delta), FieldSpec::layers(values)});
        rep.record(tau(Js[a], bumped) - table[a][b], fmt(("layer-" + std::to_string(layer) + " bump").c_str(), Js[a], ls[b]));
      }
  // (b) concave in lambda: slopes non-increasing.
  for (std::size_t a = 0; a < Js.size(); ++a)
    for (std::size_t b = 1; b + 1 < ls.size(); ++b) {
      const double s1 = (table[a][b] - table[a][b - 1]) / (ls[b] - ls[b - 1]);
      const double s2 = (table[a][b + 1] - table[a][b]) / (ls[b + 1] - ls[b]);
      rep.record(s1 - s2, fmt("concavity", Js[a], ls[b]));
    }
  return rep;
}

}  // namespace wetting
