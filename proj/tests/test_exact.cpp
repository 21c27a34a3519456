#include <cmath>
#include <map>

#include "doctest.h"
#include "wetting/error.hpp"
#include "wetting/exact.hpp"
#include "wetting/rng.hpp"

using namespace wetting;

namespace {

struct Brute {
  double log_z;
  std::vector<double> mag;
  std::vector<double> pair;
};

// Independent oracle: loop over every configuration and call hamiltonian().
Brute brute_force(const CompiledModel& m) {
  const std::size_t n = m.size();
  const std::size_t states = std::size_t{1} << n;
  std::vector<double> logw(states);
  double top = -INFINITY;
  for (std::size_t c = 0; c < states; ++c) {
    logw[c] = -m.beta * hamiltonian(m, config_from_bits(c, n));
    top = std::max(top, logw[c]);
  }
  Brute b{0.0, std::vector<double>(n, 0.0), std::vector<double>(n * n, 0.0)};
  double z = 0.0;
  for (std::size_t c = 0; c < states; ++c) {
    const double w = std::exp(logw[c] - top);
    z += w;
    for (std::size_t i = 0; i < n; ++i) {
      const int si = ((c >> i) & 1u) ? 1 : -1;
      b.mag[i] += si * w;
      for (std::size_t j = 0; j < n; ++j) b.pair[i * n + j] += si * (((c >> j) & 1u) ? 1 : -1) * w;
    }
  }
  b.log_z = std::log(z) + top;
  for (auto& x : b.mag) x /= z;
  for (auto& x : b.pair) x /= z;
  return b;
}

FieldSpec random_field(CounterRng& rng) {
  switch (rng.below(4)) {
    case 0: return FieldSpec::decay_hat(2 * rng.uniform() - 0.5, 0.5 + 2 * rng.uniform());
    case 1: return FieldSpec::wall_only(rng.uniform());
    case 2: return FieldSpec::centered_decay(rng.uniform(), 1.0 + rng.uniform());
    default: return FieldSpec::zero();
  }
}

BoundaryCondition random_bc(CounterRng& rng) {
  switch (rng.below(4)) {
    case 0: return BoundaryCondition::plus();
    case 1: return BoundaryCondition::minus();
    case 2: return BoundaryCondition::minus_plus();
    default: return BoundaryCondition::free();
  }
}

ModelInstance random_instance(CounterRng& rng, int max_sites) {
  for (;;) {
    const int kind = static_cast<int>(rng.below(3));
    Region r = Region::semi_box(2, 1, 1);
    if (kind == 0) r = Region::semi_box(2, static_cast<int>(rng.below(3)), 1 + static_cast<int>(rng.below(4)));
    if (kind == 1) r = Region::full_box(2, static_cast<int>(rng.below(2)), static_cast<int>(rng.below(3)));
    if (kind == 2) r = Region::semi_box(3, 1, 1 + static_cast<int>(rng.below(2)));
    if (static_cast<int>(r.size()) > max_sites) continue;
    const auto c = rng.below(2) ? CouplingSpec::uniform(1.2 * rng.uniform())
                                : CouplingSpec::layer_weakened(1.2 * rng.uniform(), rng.uniform());
    return ModelInstance::make(r, random_bc(rng), c, random_field(rng), 0.3 + rng.uniform());
  }
}

ExactOptions with_method(ExactMethod m, const simd::Kernels* k = nullptr) {
  ExactOptions o;
  o.method = m;
  o.kernels = k;
  return o;
}

}  // namespace

TEST_CASE("closed forms") {
  for (double h : {0.0, 0.3, -1.1}) {
    const auto one = ModelInstance::make(Region::explicit_sites(2, {Site{0, 3}}), BoundaryCondition::free(),
                                         CouplingSpec::uniform(1.0), FieldSpec::layers({0, 0, h}));
    CHECK(log_partition(one) == doctest::Approx(std::log(2 * std::cosh(h))).epsilon(1e-14));
    CHECK(expectation(one, {Site{0, 3}}) == doctest::Approx(std::tanh(h)).epsilon(1e-14));
  }
  for (double J : {0.0, 0.4, 1.5}) {
    const auto two = ModelInstance::make(Region::explicit_sites(2, {Site{0, 1}, Site{0, 2}}), BoundaryCondition::free(),
                                         CouplingSpec::uniform(J), FieldSpec::zero());
    CHECK(log_partition(two) == doctest::Approx(std::log(4 * std::cosh(J))).epsilon(1e-14));
    CHECK(expectation(two, {Site{0, 1}, Site{0, 2}}) == doctest::Approx(std::tanh(J)).epsilon(1e-14));
  }
  const auto strong = ModelInstance::make(Region::semi_box(2, 1, 2), BoundaryCondition::plus(),
                                          CouplingSpec::uniform(20.0), FieldSpec::zero());
  for (const auto& s : sites_of(strong.region)) CHECK(std::abs(expectation(strong, {s}) - 1.0) < 1e-8);
}

TEST_CASE("enumeration matches brute force, both kernel sets") {
  CounterRng rng(101);
  std::vector<const simd::Kernels*> ks{&simd::scalar_kernels()};
  if (simd::avx2_available()) ks.push_back(&simd::avx2_kernels());
  for (int trial = 0; trial < 40; ++trial) {
    const auto inst = random_instance(rng, 14);
    const CompiledModel m = compile(inst);
    const Brute b = brute_force(m);
    for (const auto* k : ks) {
      const EnumerationResult r = enumerate(m, true, *k);
      CHECK(r.log_partition == doctest::Approx(b.log_z).epsilon(1e-12));
      for (std::size_t i = 0; i < m.size(); ++i) {
        CHECK(std::abs(r.magnetization[i] - b.mag[i]) < 1e-12);
        for (std::size_t j = 0; j < m.size(); ++j) CHECK(std::abs(r.pair[i * m.size() + j] - b.pair[i * m.size() + j]) < 1e-12);
      }
    }
  }
}

TEST_CASE("enumeration above the vector block size uses the Gray-code walk correctly") {
  // 3 x 6 box: 18 sites, 8 of them in the Gray-code block.
  const auto inst = ModelInstance::make(Region::semi_box(2, 1, 6), BoundaryCondition::minus(),
                                        CouplingSpec::uniform(0.7), FieldSpec::decay_hat(0.9, 1.5), 0.8);
  const CompiledModel m = compile(inst);
  const Brute b = brute_force(m);
  const EnumerationResult r = enumerate(m, true, simd::active_kernels());
  CHECK(r.log_partition == doctest::Approx(b.log_z).epsilon(1e-12));
  for (std::size_t i = 0; i < m.size(); ++i) CHECK(std::abs(r.magnetization[i] - b.mag[i]) < 1e-11);
  for (std::size_t i = 0; i < m.size() * m.size(); ++i) CHECK(std::abs(r.pair[i] - b.pair[i]) < 1e-11);
}

TEST_CASE("enumeration cap") {
  const auto inst = ModelInstance::make(Region::semi_box(2, 2, 5), BoundaryCondition::plus(),
                                        CouplingSpec::uniform(0.5), FieldSpec::zero());
  CHECK_THROWS_AS(enumerate(compile(inst), false, simd::active_kernels()), CapacityError);
  const auto wide = ModelInstance::make(Region::semi_box(3, 3, 3), BoundaryCondition::plus(),
                                        CouplingSpec::uniform(0.5), FieldSpec::zero());
  CHECK_THROWS_AS(log_partition(wide), CapacityError);
}

TEST_CASE("transfer matrix agrees with enumeration") {
  CounterRng rng(7);
  for (int trial = 0; trial < 25; ++trial) {
    const int X = 1 + static_cast<int>(rng.below(2));
    const int m = 1 + static_cast<int>(rng.below(6));
    const Region regions[] = {Region::semi_box(2, X, m), Region::full_box(2, X - 1, m / 2),
                              Region::extended_box(2, X, Reflection::half_plane)};
    const Region r = regions[rng.below(3)];
    if (r.size() > 20) continue;
    const auto c = rng.below(2) ? CouplingSpec::uniform(rng.uniform())
                                : CouplingSpec::layer_weakened(rng.uniform(), rng.uniform());
    const auto inst = ModelInstance::make(r, random_bc(rng), c, random_field(rng), 0.5 + rng.uniform());
    ExactSolver e(compile(inst), with_method(ExactMethod::enumeration));
    ExactSolver t(compile(inst), with_method(ExactMethod::transfer));
    CHECK(t.log_partition() == doctest::Approx(e.log_partition()).epsilon(1e-10));
    const auto& me = e.magnetizations();
    const auto& mt = t.magnetizations();
    for (std::size_t i = 0; i < me.size(); ++i) CHECK(std::abs(me[i] - mt[i]) < 1e-10);
    const int n = static_cast<int>(me.size());
    for (int a = 0; a < n; a += 2)
      for (int b = 0; b < n; b += 3) CHECK(std::abs(e.pair(a, b) - t.pair(a, b)) < 1e-10);
  }
}

TEST_CASE("transfer matrix above the enumeration cap: spin-flip symmetry and pinning") {
  const auto inst = ModelInstance::make(Region::semi_box(2, 3, 6), BoundaryCondition::plus(),
                                        CouplingSpec::uniform(0.6), FieldSpec::decay_hat(0.4, 2.0), 0.7);
  auto flipped = inst;
  flipped.bc = BoundaryCondition::minus();
  flipped.field = inst.field.negated();
  CHECK(log_partition(inst) == doctest::Approx(log_partition(flipped)).epsilon(1e-12));
  const double m1 = expectation(inst, {Site{0, 1}});
  const double m2 = expectation(flipped, {Site{0, 1}});
  CHECK(std::abs(m1 + m2) < 1e-12);
  const double triple = expectation(inst, {Site{0, 1}, Site{1, 1}, Site{0, 2}});
  CHECK(triple > 0.0);
  CHECK(triple <= 1.0);
}

TEST_CASE("expectations are bounded and symmetric under global flip") {
  CounterRng rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const auto inst = random_instance(rng, 12);
    auto flip = inst;
    flip.bc = inst.bc.kind() == BoundaryCondition::Kind::minus_plus ? inst.bc : inst.bc.flipped();
    if (inst.bc.kind() == BoundaryCondition::Kind::minus_plus) continue;
    flip.field = inst.field.negated();
    CHECK(log_partition(inst) == doctest::Approx(log_partition(flip)).epsilon(1e-12));
    ExactSolver s(compile(inst));
    for (double v : s.magnetizations()) CHECK(std::abs(v) <= 1.0 + 1e-15);
    const int n = static_cast<int>(s.model().size());
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) CHECK(std::abs(s.pair(a, b)) <= 1.0 + 1e-15);
  }
}

TEST_CASE("gibbs distribution") {
  const auto inst = ModelInstance::make(Region::semi_box(2, 1, 2), BoundaryCondition::minus(),
                                        CouplingSpec::uniform(0.5), FieldSpec::wall_only(0.4));
  const CompiledModel m = compile(inst);
  const auto p = gibbs_distribution(m);
  const Brute b = brute_force(m);
  double total = 0.0;
  for (std::size_t c = 0; c < p.size(); ++c) {
    total += p[c];
    CHECK(p[c] == doctest::Approx(std::exp(-m.beta * hamiltonian(m, config_from_bits(c, m.size())) - b.log_z)).epsilon(1e-12));
  }
  CHECK(total == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("wall free energy") {
  for (double J : {0.0, 0.5, 1.0})
    CHECK(std::abs(finite_wall_free_energy(1, CouplingSpec::uniform(J), FieldSpec::zero(), 0.0)) < 1e-14);
  CHECK(std::abs(finite_wall_free_energy(2, CouplingSpec::uniform(0.0), FieldSpec::decay_hat(0.7, 1.0), 0.3)) < 1e-14);
  const double tau = finite_wall_free_energy(1, CouplingSpec::uniform(0.5), FieldSpec::decay_hat(0.4, 2.0), 0.0);
  CHECK(tau > 0.0);
  // Wall influence as a parameter or as a WallOnly field: same value.
  for (double lambda : {0.1, 0.6})
    CHECK(finite_wall_free_energy(2, CouplingSpec::uniform(0.7), FieldSpec::zero(), lambda) ==
          doctest::Approx(finite_wall_free_energy(2, CouplingSpec::uniform(0.7), FieldSpec::wall_only(lambda), 0.0))
              .epsilon(1e-13));
  // Direct definition from brute-force partition functions.
  const auto plus = ModelInstance::make(Region::semi_box(2, 1, 1), BoundaryCondition::plus(), CouplingSpec::uniform(0.5),
                                        FieldSpec::decay_hat(0.4, 2.0));
  auto minus = plus;
  minus.bc = BoundaryCondition::minus();
  CHECK(tau == doctest::Approx(-(brute_force(compile(minus)).log_z - brute_force(compile(plus)).log_z) / 3.0).epsilon(1e-12));
}

TEST_CASE("surface free energy") {
  for (double J : {0.3, 0.8}) {
    const double fp = finite_surface_free_energy(1, Sign::plus, CouplingSpec::uniform(J), FieldSpec::zero(), 0.0);
    const double fm = finite_surface_free_energy(1, Sign::minus, CouplingSpec::uniform(J), FieldSpec::zero(), 0.0);
    CHECK(fp == doctest::Approx(fm).epsilon(1e-13));
  }
  CHECK(std::abs(finite_surface_free_energy(2, Sign::plus, CouplingSpec::uniform(0.0), FieldSpec::zero(), 0.0)) < 1e-14);

  // n = 1, J = 0.5, layer field 2^-l, by brute force over the boxes.
  std::vector<double> layers;
  for (int l = 1; l <= 8; ++l) layers.push_back(std::ldexp(1.0, -l));
  const FieldSpec h = FieldSpec::layers(layers);
  const double f = finite_surface_free_energy(1, Sign::plus, CouplingSpec::uniform(0.5), h, 0.0);
  const auto semi = ModelInstance::make(Region::semi_box(2, 1, 1), BoundaryCondition::plus(), CouplingSpec::uniform(0.5), h);
  const auto bulk = ModelInstance::make(Region::extended_box(2, 1), BoundaryCondition::plus(), CouplingSpec::uniform(0.5),
                                        FieldSpec::zero());
  const double expect = -(2 * brute_force(compile(semi)).log_z - brute_force(compile(bulk)).log_z) / 6.0;
  CHECK(f == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("interface free energy") {
  CHECK(std::abs(finite_interface_free_energy(1, 1, 0.0)) < 1e-14);
  // Strong coupling: one flat interface between heights 0 and 1 costs 2J per column.
  CHECK(finite_interface_free_energy(1, 2, 20.0) == doctest::Approx(40.0).epsilon(1e-9));
  CHECK(finite_interface_free_energy(2, 1, 20.0) == doctest::Approx(40.0).epsilon(1e-9));
  const double tau = finite_interface_free_energy(1, 1, 0.5);
  CHECK(tau >= 0.0);
  const auto plus = ModelInstance::make(Region::full_box(2, 1, 1), BoundaryCondition::plus(), CouplingSpec::uniform(0.5),
                                        FieldSpec::zero());
  auto mp = plus;
  mp.bc = BoundaryCondition::minus_plus();
  CHECK(tau == doctest::Approx(-(brute_force(compile(mp)).log_z - brute_force(compile(plus)).log_z) / 3.0).epsilon(1e-12));
}

TEST_CASE("interpolation identity") {
  const std::vector<double> none;
  auto zero = interpolated_log_ratio(1, none, CouplingSpec::uniform(0.0), FieldSpec::zero(), 0.0);
  CHECK(std::abs(zero.direct) < 1e-14);
  CHECK(std::abs(zero.quadrature) < 1e-14);

  for (int n : {1, 2}) {
    const auto c = CouplingSpec::uniform(0.6);
    const FieldSpec f = FieldSpec::decay_hat(0.5, 2.0);
    auto rep = interpolated_log_ratio(n, none, c, f, 0.2, 0.9);
    CHECK(rep.nodes == 64);
    CHECK(rep.gap < 1e-8);
    // ln Xi(1) - ln Xi(0) = -2 |W_n| F^+.
    const double F = finite_surface_free_energy(n, Sign::plus, c, f, 0.2, 0.9);
    CHECK(rep.direct == doctest::Approx(-2.0 * (2 * n + 1) * F).epsilon(1e-12));
  }
  const std::vector<double> one{0.0};
  CHECK_THROWS_AS(interpolated_log_ratio(1, one, CouplingSpec::uniform(0.5), FieldSpec::zero(), 0.0),
                  std::invalid_argument);
  std::vector<double> grid;
  for (int i = 0; i <= 200; ++i) grid.push_back(i / 200.0);
  auto trap = interpolated_log_ratio(1, grid, CouplingSpec::uniform(0.5), FieldSpec::decay_hat(0.3, 0.5), 0.0);
  CHECK(trap.gap < 1e-4);
  CHECK(trap.non_summable);
}

TEST_CASE("fkg") {
  const auto box = ModelInstance::make(Region::semi_box(2, 1, 2), BoundaryCondition::plus(), CouplingSpec::uniform(0.5),
                                       FieldSpec::decay_hat(1.0, 2.0));
  auto rep = check_fkg(box, 200, 42);
  CHECK(rep.checks == 200);
  CHECK(rep.passed());
  auto negative = box;
  negative.field = FieldSpec::wall_only(-0.1);
  CHECK_THROWS(check_fkg(negative, 10, 1));
  // Product measure: functions of disjoint sites are uncorrelated.
  auto free = box;
  free.couplings = CouplingSpec::uniform(0.0);
  auto rep0 = check_fkg(free, 100, 3);
  CHECK(rep0.worst_margin > -1e-15);
}

TEST_CASE("duplicated variable inequalities") {
  const auto inst = ModelInstance::make(Region::semi_box(2, 1, 2), BoundaryCondition::plus(), CouplingSpec::uniform(0.7),
                                        FieldSpec::decay_hat(0.3, 1.5));
  auto rep = check_dvi(inst);
  CHECK(rep.passed());
  CHECK(rep.checks == 2 * 21);
  auto zero = inst;
  zero.couplings = CouplingSpec::uniform(0.0);
  auto rep0 = check_dvi(zero);
  CHECK(rep0.passed());
  CHECK(std::abs(rep0.worst_margin) < 1e-15);
}

TEST_CASE("gap is non-increasing in the field at another site") {
  const auto inst = ModelInstance::make(Region::semi_box(2, 1, 2), BoundaryCondition::plus(), CouplingSpec::uniform(0.6),
                                        FieldSpec::decay_hat(0.2, 2.0));
  std::vector<double> grid;
  for (int i = 0; i <= 10; ++i) grid.push_back(0.2 * i);
  auto scan = check_gap_monotone_in_field(inst, Site{0, 1}, Site{1, 2}, grid);
  CHECK(scan.report.passed());
  CHECK(scan.gap.front() > scan.gap.back());

  auto zero = inst;
  zero.couplings = CouplingSpec::uniform(0.0);
  auto flat = check_gap_monotone_in_field(zero, Site{0, 1}, Site{1, 2}, grid);
  for (double g : flat.gap) CHECK(std::abs(g) < 1e-15);

  // A huge field at j acts like freezing sigma_j = +1.
  const std::vector<double> big{30.0};
  const double g30 = check_gap_monotone_in_field(inst, Site{0, 1}, Site{1, 2}, big).gap[0];
  std::vector<Site> rest;
  for (const auto& s : sites_of(inst.region))
    if (!(s == Site{1, 2})) rest.push_back(s);
  std::map<Site, int> ext_plus, ext_minus;
  for (const auto& s : rest)
    for (const auto& t : neighbors(s, Universe::semi_infinite))
      if (std::find(rest.begin(), rest.end(), t) == rest.end()) {
        ext_plus[t] = 1;
        ext_minus[t] = t == Site{1, 2} ? 1 : -1;
      }
  auto frozen_plus = ModelInstance::make(Region::explicit_sites(2, rest), BoundaryCondition::fixed(ext_plus),
                                         inst.couplings, inst.field);
  auto frozen_minus = frozen_plus;
  frozen_minus.bc = BoundaryCondition::fixed(ext_minus);
  const double frozen = expectation(frozen_plus, {Site{0, 1}}) - expectation(frozen_minus, {Site{0, 1}});
  CHECK(std::abs(g30 - frozen) < 1e-8);
}

TEST_CASE("wall free energy concavity and monotonicity") {
  std::vector<double> lambdas;
  for (int i = 0; i <= 10; ++i) lambdas.push_back(0.1 * i);
  const std::vector<double> Js{0.3, 0.6};
  auto rep = check_tau_concavity_and_monotonicity(1, Js, lambdas, 2.0);
  CHECK(rep.passed());
  const std::vector<double> single{0.0};
  CHECK(check_tau_concavity_and_monotonicity(1, Js, single, 2.0).passed());
  const std::vector<double> zeroJ{0.0};
  CHECK(check_tau_concavity_and_monotonicity(1, zeroJ, lambdas, 2.0).passed());
}

TEST_CASE("zero gap at one site means zero gap everywhere") {
  CounterRng rng(19);
  for (int trial = 0; trial < 12; ++trial) {
    const bool decoupled = trial % 3 == 0;
    const auto inst = ModelInstance::make(Region::semi_box(2, 1, 1 + static_cast<int>(rng.below(3))),
                                          BoundaryCondition::plus(),
                                          CouplingSpec::uniform(decoupled ? 0.0 : 0.2 + rng.uniform()),
                                          FieldSpec::decay_hat(rng.uniform(), 1.5));
    const auto gaps = exact_gaps(inst);
    bool any_zero = false, all_zero = true;
    for (double g : gaps) {
      any_zero = any_zero || std::abs(g) < 1e-10;
      all_zero = all_zero && std::abs(g) < 1e-10;
    }
    CHECK(any_zero == all_zero);
    CHECK(all_zero == decoupled);
  }
}
