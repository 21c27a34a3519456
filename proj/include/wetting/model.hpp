#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

#include "wetting/lattice.hpp"

namespace wetting {

/// Nearest-neighbour ferromagnetic couplings.
class CouplingSpec {
 public:
  struct Uniform {
    double J = 1.0;
    friend bool operator==(const Uniform&, const Uniform&) = default;
  };
  /// J_lambda: lambda/2 on bonds between layer 0 and layers +-1, J elsewhere.
  struct LayerWeakened {
    double J = 1.0;
    double lambda = 0.0;
    friend bool operator==(const LayerWeakened&, const LayerWeakened&) = default;
  };
  using Variant = std::variant<Uniform, LayerWeakened>;

  CouplingSpec() : v_(Uniform{}) {}
  CouplingSpec(Uniform u);
  CouplingSpec(LayerWeakened w);

  static CouplingSpec uniform(double J) { return CouplingSpec(Uniform{J}); }
  static CouplingSpec layer_weakened(double J, double lambda) { return CouplingSpec(LayerWeakened{J, lambda}); }

  const Variant& variant() const { return v_; }
  /// Coupling of the bond {a, b}; 0 when a and b are not neighbours.
  double between(const Site& a, const Site& b) const;
  /// Largest coupling value this family can produce.
  double max_coupling() const;

  friend bool operator==(const CouplingSpec&, const CouplingSpec&) = default;

 private:
  Variant v_;
};

/// External field families. Values off the half-space are 0 for the
/// half-space families (WallOnly, DecayHat, LayerSequence).
class FieldSpec {
 public:
  struct Zero {
    friend bool operator==(const Zero&, const Zero&) = default;
  };
  struct WallOnly {
    double lambda = 0.0;
    friend bool operator==(const WallOnly&, const WallOnly&) = default;
  };
  /// lambda * i_d^{-delta} on H+.
  struct DecayHat {
    double lambda = 0.0;
    double delta = 1.0;
    friend bool operator==(const DecayHat&, const DecayHat&) = default;
  };
  /// h* at the origin, h* |i|_1^{-delta} elsewhere.
  struct CenteredDecay {
    double hstar = 0.0;
    double delta = 1.0;
    friend bool operator==(const CenteredDecay&, const CenteredDecay&) = default;
  };
  /// h_i = values[i_d - 1]; zero past the end of the sequence.
  struct LayerSequence {
    std::vector<double> values;
    friend bool operator==(const LayerSequence&, const LayerSequence&) = default;
  };
  /// base on H+, base(-i + e_d) below the wall.
  struct Mirrored {
    std::shared_ptr<const FieldSpec> base;
    friend bool operator==(const Mirrored& a, const Mirrored& b);
  };
  struct Sum {
    std::vector<FieldSpec> terms;
    friend bool operator==(const Sum&, const Sum&);
  };
  using Variant = std::variant<Zero, WallOnly, DecayHat, CenteredDecay, LayerSequence, Mirrored, Sum>;

  FieldSpec() : v_(Zero{}) {}
  FieldSpec(Variant v);

  static FieldSpec zero() { return FieldSpec(Zero{}); }
  static FieldSpec wall_only(double lambda) { return FieldSpec(WallOnly{lambda}); }
  static FieldSpec decay_hat(double lambda, double delta) { return FieldSpec(DecayHat{lambda, delta}); }
  static FieldSpec centered_decay(double hstar, double delta) { return FieldSpec(CenteredDecay{hstar, delta}); }
  static FieldSpec layers(std::vector<double> values) { return FieldSpec(LayerSequence{std::move(values)}); }
  static FieldSpec mirrored(FieldSpec base);
  static FieldSpec sum(std::vector<FieldSpec> terms) { return FieldSpec(Sum{std::move(terms)}); }

  const Variant& variant() const { return v_; }

  /// Field with every value negated.
  FieldSpec negated() const;

  /// True when every parameter that can make a value negative is >= 0.
  bool parameters_non_negative() const;

  /// Contains a decay family with delta <= 1 (non-summable along the wall normal).
  bool has_non_summable_decay() const;

  friend bool operator==(const FieldSpec& a, const FieldSpec& b) { return a.v_ == b.v_; }

 private:
  Variant v_;
};

double field_at(const FieldSpec& field, const Site& site);

/// Throws std::invalid_argument on non-finite parameters or delta <= 0.
void validate(const FieldSpec& field);

/// Spin configuration over a region, in sites_of() order, values +-1.
using SpinConfiguration = std::vector<std::int8_t>;

struct ModelInstance {
  Region region = Region::semi_box(2, 1, 1);
  Universe universe = Universe::semi_infinite;
  BoundaryCondition bc = BoundaryCondition::plus();
  CouplingSpec couplings;
  FieldSpec field;
  double beta = 1.0;

  /// Instance on `region` using the region's natural universe.
  static ModelInstance make(Region region, BoundaryCondition bc, CouplingSpec couplings, FieldSpec field,
                            double beta = 1.0);
};

/// Flattened instance: sites by index with the interior bonds, frontier
/// bonds folded into a boundary field, and the external field. Hot loops
/// work on this. Mutable on purpose so callers can build derived measures
/// (cut bonds, point fields) without a new spec type.
struct CompiledModel {
  struct Bond {
    int a;
    int b;
    double J;
  };
  struct Frontier {
    int inside;
    double J;
    int spin;  // exterior spin, +-1
  };
  struct Neighbor {
    int site;  // -1 when the slot is outside the region
    double J;
  };

  int dim = 2;
  Universe universe = Universe::semi_infinite;
  std::vector<Site> sites;
  std::vector<double> field;
  std::vector<Bond> bonds;
  std::vector<Frontier> frontier;
  double beta = 1.0;

  std::size_t size() const { return sites.size(); }
  int index_of(const Site& s) const;  // -1 when absent

  /// Sum over frontier bonds of J * exterior spin, per site.
  std::vector<double> boundary_field() const;
  /// field + boundary_field.
  std::vector<double> effective_field() const;
  /// Per-site neighbour slots (2*dim entries per site, slot order).
  std::vector<Neighbor> slot_table() const;

  void rebuild_index();

 private:
  std::unordered_map<Site, int, SiteHash> index_;
};

CompiledModel compile(const ModelInstance& instance, std::size_t max_sites = kDefaultSiteCap);

/// -sum J s_i s_j - sum h_i s_i over bonds meeting the region (beta not applied).
double hamiltonian(const ModelInstance& instance, const SpinConfiguration& config);
double hamiltonian(const CompiledModel& model, const SpinConfiguration& config);

/// H(config with `site` flipped) - H(config).
double local_energy_delta(const ModelInstance& instance, const SpinConfiguration& config, const Site& site);
double local_energy_delta(const CompiledModel& model, const SpinConfiguration& config, int site);

/// Spin configuration from bits: bit k set means site k is +1.
SpinConfiguration config_from_bits(std::uint64_t bits, std::size_t n);

}  // namespace wetting
