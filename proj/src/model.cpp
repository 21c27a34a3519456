#include "wetting/model.hpp"

#include <cmath>
#include <stdexcept>

#include "wetting/error.hpp"

namespace wetting {

CouplingSpec::CouplingSpec(Uniform u) : v_(u) {
  if (!std::isfinite(u.J) || u.J < 0.0) throw std::invalid_argument("coupling: J must be finite and >= 0");
}

CouplingSpec::CouplingSpec(LayerWeakened w) : v_(w) {
  if (!std::isfinite(w.J) || w.J < 0.0) throw std::invalid_argument("coupling: J must be finite and >= 0");
  if (!std::isfinite(w.lambda) || w.lambda < 0.0)
    throw std::invalid_argument("coupling: lambda must be finite and >= 0");
}

double CouplingSpec::between(const Site& a, const Site& b) const {
  int dist = 0;
  for (int k = 0; k < a.dim; ++k) dist += std::abs(a[k] - b[k]);
  if (dist != 1) return 0.0;
  return std::visit(
      [&](const auto& spec) -> double {
        using T = std::decay_t<decltype(spec)>;
        if constexpr (std::is_same_v<T, Uniform>) {
          return spec.J;
        } else {
          const int ha = a.height();
          const int hb = b.height();
          const bool touches_zero = (ha == 0 && std::abs(hb) == 1) || (hb == 0 && std::abs(ha) == 1);
          return touches_zero ? spec.lambda / 2.0 : spec.J;
        }
      },
      v_);
}

double CouplingSpec::max_coupling() const {
  return std::visit(
      [](const auto& spec) -> double {
        using T = std::decay_t<decltype(spec)>;
        if constexpr (std::is_same_v<T, Uniform>)
          return spec.J;
        else
          return std::max(spec.J, spec.lambda / 2.0);
      },
      v_);
}

bool operator==(const FieldSpec::Mirrored& a, const FieldSpec::Mirrored& b) {
  if (!a.base || !b.base) return a.base == b.base;
  return *a.base == *b.base;
}

bool operator==(const FieldSpec::Sum& a, const FieldSpec::Sum& b) { return a.terms == b.terms; }

FieldSpec::FieldSpec(Variant v) : v_(std::move(v)) {}

FieldSpec FieldSpec::mirrored(FieldSpec base) {
  return FieldSpec(Mirrored{std::make_shared<const FieldSpec>(std::move(base))});
}

FieldSpec FieldSpec::negated() const {
  return std::visit(
      [](const auto& spec) -> FieldSpec {
        using T = std::decay_t<decltype(spec)>;
        if constexpr (std::is_same_v<T, Zero>) {
          return zero();
        } else if constexpr (std::is_same_v<T, WallOnly>) {
          return wall_only(-spec.lambda);
        } else if constexpr (std::is_same_v<T, DecayHat>) {
          return decay_hat(-spec.lambda, spec.delta);
        } else if constexpr (std::is_same_v<T, CenteredDecay>) {
          return centered_decay(-spec.hstar, spec.delta);
        } else if constexpr (std::is_same_v<T, LayerSequence>) {
          std::vector<double> v = spec.values;
          for (auto& x : v) x = -x;
          return layers(std::move(v));
        } else if constexpr (std::is_same_v<T, Mirrored>) {
          return mirrored(spec.base->negated());
        } else {
          std::vector<FieldSpec> terms;
          for (const auto& t : spec.terms) terms.push_back(t.negated());
          return sum(std::move(terms));
        }
      },
      v_);
}

bool FieldSpec::parameters_non_negative() const {
  return std::visit(
      [](const auto& spec) -> bool {
        using T = std::decay_t<decltype(spec)>;
        if constexpr (std::is_same_v<T, Zero>) {
          return true;
        } else if constexpr (std::is_same_v<T, WallOnly> || std::is_same_v<T, DecayHat>) {
          return spec.lambda >= 0.0;
        } else if constexpr (std::is_same_v<T, CenteredDecay>) {
          return spec.hstar >= 0.0;
        } else if constexpr (std::is_same_v<T, LayerSequence>) {
          for (double x : spec.values)
            if (x < 0.0) return false;
          return true;
        } else if constexpr (std::is_same_v<T, Mirrored>) {
          return spec.base->parameters_non_negative();
        } else {
          for (const auto& t : spec.terms)
            if (!t.parameters_non_negative()) return false;
          return true;
        }
      },
      v_);
}

bool FieldSpec::has_non_summable_decay() const {
  return std::visit(
      [](const auto& spec) -> bool {
        using T = std::decay_t<decltype(spec)>;
        if constexpr (std::is_same_v<T, DecayHat>) {
          return spec.lambda != 0.0 && spec.delta <= 1.0;
        } else if constexpr (std::is_same_v<T, Mirrored>) {
          return spec.base->has_non_summable_decay();
        } else if constexpr (std::is_same_v<T, Sum>) {
          for (const auto& t : spec.terms)
            if (t.has_non_summable_decay()) return true;
          return false;
        } else {
          return false;
        }
      },
      v_);
}

double field_at(const FieldSpec& field, const Site& site) {
  return std::visit(
      [&](const auto& spec) -> double {
        using T = std::decay_t<decltype(spec)>;
        const int h = site.height();
        if constexpr (std::is_same_v<T, FieldSpec::Zero>) {
          return 0.0;
        } else if constexpr (std::is_same_v<T, FieldSpec::WallOnly>) {
          return h == 1 ? spec.lambda : 0.0;
        } else if constexpr (std::is_same_v<T, FieldSpec::DecayHat>) {
          if (h < 1) return 0.0;
          return spec.lambda / std::pow(static_cast<double>(h), spec.delta);
        } else if constexpr (std::is_same_v<T, FieldSpec::CenteredDecay>) {
          const int norm = site.l1_norm();
          if (norm == 0) return spec.hstar;
          return spec.hstar / std::pow(static_cast<double>(norm), spec.delta);
        } else if constexpr (std::is_same_v<T, FieldSpec::LayerSequence>) {
          if (h < 1 || static_cast<std::size_t>(h) > spec.values.size()) return 0.0;
          return spec.values[static_cast<std::size_t>(h - 1)];
        } else if constexpr (std::is_same_v<T, FieldSpec::Mirrored>) {
          return h >= 1 ? field_at(*spec.base, site) : field_at(*spec.base, mirror_point(site));
        } else {
          double total = 0.0;
          for (const auto& t : spec.terms) total += field_at(t, site);
          return total;
        }
      },
      field.variant());
}

void validate(const FieldSpec& field) {
  std::visit(
      [](const auto& spec) {
        using T = std::decay_t<decltype(spec)>;
        const auto finite = [](double x, const char* what) {
          if (!std::isfinite(x)) throw std::invalid_argument(std::string("field: ") + what + " must be finite");
        };
        if constexpr (std::is_same_v<T, FieldSpec::WallOnly>) {
          finite(spec.lambda, "lambda");
        } else if constexpr (std::is_same_v<T, FieldSpec::DecayHat>) {
          finite(spec.lambda, "lambda");
          finite(spec.delta, "delta");
          if (spec.delta <= 0.0) throw std::invalid_argument("field: delta must be > 0");
        } else if constexpr (std::is_same_v<T, FieldSpec::CenteredDecay>) {
          finite(spec.hstar, "hstar");
          finite(spec.delta, "delta");
          if (spec.delta <= 0.0) throw std::invalid_argument("field: delta must be > 0");
        } else if constexpr (std::is_same_v<T, FieldSpec::LayerSequence>) {
          for (double x : spec.values) finite(x, "layer value");
        } else if constexpr (std::is_same_v<T, FieldSpec::Mirrored>) {
          if (!spec.base) throw std::invalid_argument("field: mirrored without base");
          validate(*spec.base);
        } else if constexpr (std::is_same_v<T, FieldSpec::Sum>) {
          for (const auto& t : spec.terms) validate(t);
        }
      },
      field.variant());
}

ModelInstance ModelInstance::make(Region region, BoundaryCondition bc, CouplingSpec couplings, FieldSpec field,
                                  double beta) {
  ModelInstance inst;
  inst.universe = region.default_universe();
  inst.region = std::move(region);
  inst.bc = std::move(bc);
  inst.couplings = std::move(couplings);
  inst.field = std::move(field);
  inst.beta = beta;
  return inst;
}

int CompiledModel::index_of(const Site& s) const {
  auto it = index_.find(s);
  return it == index_.end() ? -1 : it->second;
}

void CompiledModel::rebuild_index() {
  index_.clear();
  index_.reserve(sites.size());
  for (std::size_t i = 0; i < sites.size(); ++i) index_.emplace(sites[i], static_cast<int>(i));
}

std::vector<double> CompiledModel::boundary_field() const {
  std::vector<double> b(sites.size(), 0.0);
  for (const auto& f : frontier) b[static_cast<std::size_t>(f.inside)] += f.J * f.spin;
  return b;
}

std::vector<double> CompiledModel::effective_field() const {
  std::vector<double> h = boundary_field();
  for (std::size_t i = 0; i < h.size(); ++i) h[i] += field[i];
  return h;
}

std::vector<CompiledModel::Neighbor> CompiledModel::slot_table() const {
  const int slots = 2 * dim;
  std::vector<Neighbor> table(sites.size() * static_cast<std::size_t>(slots), Neighbor{-1, 0.0});
  for (const auto& bond : bonds) {
    const Site& a = sites[static_cast<std::size_t>(bond.a)];
    const Site& b = sites[static_cast<std::size_t>(bond.b)];
    int k = 0;
    while (a[k] == b[k]) ++k;
    const bool b_above = b[k] > a[k];
    table[static_cast<std::size_t>(bond.a) * slots + 2 * k + (b_above ? 1 : 0)] = {bond.b, bond.J};
    table[static_cast<std::size_t>(bond.b) * slots + 2 * k + (b_above ? 0 : 1)] = {bond.a, bond.J};
  }
  return table;
}

CompiledModel compile(const ModelInstance& instance, std::size_t max_sites) {
  if (!(instance.beta > 0.0) || !std::isfinite(instance.beta))
    throw std::invalid_argument("model: beta must be finite and > 0");
  validate(instance.field);
  CompiledModel m;
  m.dim = instance.region.dim();
  m.universe = instance.universe;
  m.beta = instance.beta;
  m.sites = sites_of(instance.region, max_sites);
  m.rebuild_index();
  m.field.reserve(m.sites.size());
  for (const auto& s : m.sites) {
    if (!in_universe(s, instance.universe))
      throw std::invalid_argument("model: site " + to_string(s) + " lies outside the universe");
    m.field.push_back(field_at(instance.field, s));
  }
  for (std::size_t i = 0; i < m.sites.size(); ++i) {
    const Site& s = m.sites[i];
    for (int slot = 0; slot < 2 * m.dim; ++slot) {
      Site t = neighbor_in_slot(s, slot);
      if (!in_universe(t, instance.universe)) continue;
      const int j = m.index_of(t);
      const double J = instance.couplings.between(s, t);
      if (j >= 0) {
        if (static_cast<int>(i) < j) m.bonds.push_back({static_cast<int>(i), j, J});
      } else {
        auto spin = instance.bc.spin_at(t);
        if (spin) m.frontier.push_back({static_cast<int>(i), J, *spin});
      }
    }
  }
  return m;
}

double hamiltonian(const CompiledModel& model, const SpinConfiguration& config) {
  if (config.size() != model.size())
    throw ConfigurationError("hamiltonian: configuration size does not match the region");
  double bond_sum = 0.0;
  for (const auto& b : model.bonds)
    bond_sum += b.J * config[static_cast<std::size_t>(b.a)] * config[static_cast<std::size_t>(b.b)];
  for (const auto& f : model.frontier) bond_sum += f.J * config[static_cast<std::size_t>(f.inside)] * f.spin;
  double field_sum = 0.0;
  for (std::size_t i = 0; i < config.size(); ++i) field_sum += model.field[i] * config[i];
  return -bond_sum - field_sum;
}

double hamiltonian(const ModelInstance& instance, const SpinConfiguration& config) {
  return hamiltonian(compile(instance), config);
}

double local_energy_delta(const CompiledModel& model, const SpinConfiguration& config, int site) {
  // Adjacency built on demand; MC kernels use precomputed tables instead.
  double local = model.field[static_cast<std::size_t>(site)];
  for (const auto& b : model.bonds) {
    if (b.a == site) local += b.J * config[static_cast<std::size_t>(b.b)];
    if (b.b == site) local += b.J * config[static_cast<std::size_t>(b.a)];
  }
  for (const auto& f : model.frontier)
    if (f.inside == site) local += f.J * f.spin;
  return 2.0 * config[static_cast<std::size_t>(site)] * local;
}

double local_energy_delta(const ModelInstance& instance, const SpinConfiguration& config, const Site& site) {
  CompiledModel m = compile(instance);
  const int idx = m.index_of(site);
  if (idx < 0) throw std::invalid_argument("local_energy_delta: site outside region");
  return local_energy_delta(m, config, idx);
}

SpinConfiguration config_from_bits(std::uint64_t bits, std::size_t n) {
  SpinConfiguration c(n);
  for (std::size_t k = 0; k < n; ++k) c[k] = ((bits >> k) & 1u) ? 1 : -1;
  return c;
}

}  // namespace wetting
