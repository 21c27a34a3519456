#include <cmath>
#include <queue>

#include "doctest.h"
#include "wetting/error.hpp"
#include "wetting/graphical.hpp"
#include "wetting/spin_mc.hpp"

using namespace wetting;

namespace {

EdgeGraph path_graph(std::vector<double> field, double J, double beta = 1.0) {
  EdgeGraph g;
  for (std::size_t i = 0; i < field.size(); ++i) g.sites.push_back(Site{static_cast<int>(i), 1});
  g.field = std::move(field);
  for (std::size_t i = 0; i + 1 < g.sites.size(); ++i)
    g.edges.push_back({static_cast<int>(i), static_cast<int>(i + 1), J});
  g.beta = beta;
  return g;
}

EdgeGraph cycle4(double J) {
  EdgeGraph g = path_graph({0.2, 0.0, 0.4, 0.1}, J, 0.8);
  g.edges.push_back({3, 0, J});
  return g;
}

ModelInstance random_small_instance(CounterRng& rng) {
  // Up to 10 sites and 12 E(Lambda) edges.
  static const std::vector<ModelInstance> shapes = {
      ModelInstance::make(Region::semi_box(2, 0, 3), BoundaryCondition::plus(), CouplingSpec::uniform(1), FieldSpec::zero()),
      ModelInstance::make(Region::semi_box(2, 1, 1), BoundaryCondition::minus(), CouplingSpec::uniform(1), FieldSpec::zero()),
      ModelInstance::make(Region::semi_box(2, 0, 4), BoundaryCondition::free(), CouplingSpec::uniform(1), FieldSpec::zero()),
      ModelInstance::make(Region::explicit_sites(2, {Site{0, 1}, Site{1, 1}, Site{0, 2}}), BoundaryCondition::minus_plus(),
                          CouplingSpec::uniform(1), FieldSpec::zero()),
  };
  ModelInstance inst = shapes[rng.below(shapes.size())];
  const double J = 0.1 + 1.2 * rng.uniform();
  inst.couplings = rng.below(2) ? CouplingSpec::uniform(J) : CouplingSpec::layer_weakened(J, 2 * rng.uniform());
  switch (rng.below(3)) {
    case 0: inst.field = FieldSpec::decay_hat(2 * rng.uniform() - 0.5, 0.5 + 2 * rng.uniform()); break;
    case 1: inst.field = FieldSpec::wall_only(2 * rng.uniform() - 1.0); break;
    default: inst.field = FieldSpec::centered_decay(1.5 * rng.uniform(), 1.0 + rng.uniform()); break;
  }
  inst.beta = 0.3 + rng.uniform();
  return inst;
}

// Farthest sup-norm distance from `start` over open edges with both ends ordinary.
int reach(const EdgeGraph& g, std::uint64_t bits, int start) {
  const std::size_t n = g.ordinary();
  std::vector<char> seen(n, 0);
  std::queue<int> q;
  q.push(start);
  seen[static_cast<std::size_t>(start)] = 1;
  int best = 0;
  const Site& o = g.sites[static_cast<std::size_t>(start)];
  while (!q.empty()) {
    const int v = q.front();
    q.pop();
    const Site& s = g.sites[static_cast<std::size_t>(v)];
    best = std::max({best, std::abs(s[0] - o[0]), std::abs(s[1] - o[1])});
    for (std::size_t e = 0; e < g.edges.size(); ++e) {
      if (!((bits >> e) & 1u)) continue;
      const auto& ed = g.edges[e];
      if (static_cast<std::size_t>(ed.u) >= n || static_cast<std::size_t>(ed.v) >= n) continue;
      const int w = ed.u == v ? ed.v : ed.v == v ? ed.u : -1;
      if (w >= 0 && !seen[static_cast<std::size_t>(w)]) {
        seen[static_cast<std::size_t>(w)] = 1;
        q.push(w);
      }
    }
  }
  return best;
}

}  // namespace

TEST_CASE("random-cluster weights on tiny graphs") {
  const EdgeGraph g = path_graph({0.0, 0.0, 0.0}, 0.7);
  CHECK(rc_weight(g, {0, 0}) == doctest::Approx(8.0));
  CHECK(rc_weight(g, {1, 0}) == doctest::Approx((std::exp(1.4) - 1) * 4.0));
  CHECK(rc_weight(path_graph({0.0, 0.0}, 0.0), {1}) == 0.0);
  CHECK(log_cluster_factor(0.3, true, true) == -INFINITY);
  CHECK(log_cluster_factor(0.3, false, true) == doctest::Approx(-0.6));
  CHECK(log_cluster_factor(-40.0, false, false) == doctest::Approx(80.0));
  CHECK(std::isfinite(log_cluster_factor(-400.0, false, false)));
}

TEST_CASE("single edge opens with probability tanh(beta J)") {
  for (double J : {0.1, 0.5, 1.3}) {
    const auto p = rc_exact_distribution(path_graph({0.0, 0.0}, J));
    CHECK(p[1] == doctest::Approx(std::tanh(J)).epsilon(1e-12));
  }
  CHECK(rc_exact_distribution(path_graph({0.0, 0.0}, 0.0))[1] == 0.0);
  // Strong fields on both ends: the clusters no longer matter.
  const auto strong = rc_exact_distribution(path_graph({20.0, 20.0}, 0.6));
  CHECK(strong[1] == doctest::Approx(1 - std::exp(-1.2)).epsilon(1e-9));
}

TEST_CASE("random-cluster edge marginals match the spin side") {
  // P(e open) = (1 - e^{-2 beta J}) * P_Gibbs(sigma_u = sigma_v).
  CounterRng rng(71, 0);
  for (int trial = 0; trial < 12; ++trial) {
    const ModelInstance inst = random_small_instance(rng);
    const EdgeGraph g = rc_graph(inst, RcBoundary::spin_bc);
    const CompiledModel cm = compile(inst);
    const auto gibbs = gibbs_distribution(cm);
    const auto rc = rc_exact_distribution(g);
    for (std::size_t e = 0; e < g.edges.size(); ++e) {
      double agree = 0.0;
      for (std::size_t s = 0; s < gibbs.size(); ++s) {
        const auto sigma = config_from_bits(s, cm.size());
        auto spin = [&](int v) {
          return static_cast<std::size_t>(v) < cm.size() ? sigma[static_cast<std::size_t>(v)] : g.ghost_spin(v);
        };
        if (spin(g.edges[e].u) == spin(g.edges[e].v)) agree += gibbs[s];
      }
      double open = 0.0;
      for (std::size_t b = 0; b < rc.size(); ++b)
        if ((b >> e) & 1u) open += rc[b];
      CHECK(open == doctest::Approx(-std::expm1(-2 * inst.beta * g.edges[e].J) * agree).epsilon(1e-10));
    }
  }
}

TEST_CASE("graph construction for each boundary") {
  const auto inst = ModelInstance::make(Region::semi_box(2, 1, 1), BoundaryCondition::minus_plus(),
                                        CouplingSpec::uniform(0.5), FieldSpec::wall_only(0.3));
  const auto spin = rc_graph(inst, RcBoundary::spin_bc);
  CHECK(spin.ordinary() == 3);
  CHECK(spin.edges.size() == 2 + 5);
  CHECK(spin.frozen.empty());
  const auto wired = rc_graph(inst, RcBoundary::wired);
  CHECK(wired.vertices() == 4);
  CHECK(wired.minus_ghost == EdgeGraph::kNoGhost);
  const auto free = rc_graph(inst, RcBoundary::free);
  CHECK(free.ordinary() == 3 + 5);
  CHECK(free.edges.size() == wired.edges.size());
  const auto interior = rc_graph(inst, RcBoundary::spin_bc, EdgeSet::interior);
  CHECK(interior.edges.size() == 2);
  CHECK(interior.frozen.size() == 5);
  CHECK(rc_graph(inst, RcBoundary::free, EdgeSet::interior).vertices() == 3);
  auto free_bc = inst;
  free_bc.bc = BoundaryCondition::free();
  CHECK(rc_graph(free_bc, RcBoundary::spin_bc).edges.size() == 2);
}

TEST_CASE("Edwards-Sokal weights and conditionals") {
  EdgeGraph g = path_graph({0.5, 0.0}, 0.4);
  g.plus_ghost = 2;
  g.edges.push_back({1, 2, 0.4});
  CHECK(es_weight(g, {1, 1}, {1, 1}) == doctest::Approx(std::pow(std::exp(0.8) - 1, 2) * std::exp(0.5)));
  CHECK(es_weight(g, {1, -1}, {1, 0}) == 0.0);
  CHECK(es_weight(g, {-1, -1}, {0, 1}) == 0.0);
  CHECK(es_weight(g, {-1, 1}, {0, 0}) == doctest::Approx(std::exp(-0.5)));

  CounterRng rng(3, 0);
  CHECK(sample_spins_given_edges(g, {1, 1}, rng) == SpinConfiguration{1, 1});
  EdgeGraph both = g;
  both.minus_ghost = 3;
  both.edges.push_back({0, 3, 0.4});
  CHECK_THROWS_AS(sample_spins_given_edges(both, {1, 1, 1}, rng), ConditioningError);

  // Open rate of an agreeing edge.
  const std::size_t draws = 100000;
  double open = 0.0;
  for (std::size_t t = 0; t < draws; ++t) open += sample_edges_given_spins(g, {1, 1}, rng)[0];
  const double p = 1 - std::exp(-0.8);
  CHECK(std::abs(open / draws - p) < 4 * std::sqrt(p * (1 - p) / draws));
  for (int t = 0; t < 100; ++t) CHECK(sample_edges_given_spins(g, {1, -1}, rng)[0] == 0);
}

TEST_CASE("decoupled SW step draws independent spins") {
  const EdgeGraph g = path_graph({0.3, -0.2, 0.0}, 0.0, 1.5);
  CounterRng rng(9, 1);
  SpinConfiguration sigma(3, 1);
  std::vector<double> plus(3, 0.0);
  const int steps = 40000;
  for (int t = 0; t < steps; ++t) {
    sigma = sw_step(g, sigma, rng);
    for (int i = 0; i < 3; ++i) plus[static_cast<std::size_t>(i)] += sigma[static_cast<std::size_t>(i)] > 0;
  }
  for (int i = 0; i < 3; ++i) {
    const double p = logistic(2 * 1.5 * g.field[static_cast<std::size_t>(i)]);
    CHECK(std::abs(plus[static_cast<std::size_t>(i)] / steps - p) < 4 * std::sqrt(p * (1 - p) / steps));
  }
}

TEST_CASE("SW transition fixes the Gibbs measure") {
  CounterRng rng(15, 0);
  for (int trial = 0; trial < 6; ++trial) {
    const ModelInstance inst = random_small_instance(rng);
    const auto pi = gibbs_distribution(compile(inst));
    const auto next = sw_apply(rc_graph(inst, RcBoundary::spin_bc), pi);
    CHECK(total_variation(pi, next) <= 1e-10);
  }
  // Interior edge set with frozen attachments: still a probability kernel.
  const auto inst = ModelInstance::make(Region::semi_box(2, 0, 3), BoundaryCondition::plus(), CouplingSpec::uniform(0.7),
                                        FieldSpec::zero());
  const auto g = rc_graph(inst, RcBoundary::spin_bc, EdgeSet::interior);
  std::vector<double> pi(8, 0.0);
  pi[7] = 1.0;
  const auto next = sw_apply(g, pi);
  CHECK(next[7] == doctest::Approx(1.0));
}

TEST_CASE("SW steps are deterministic in the seed") {
  const auto inst = ModelInstance::make(Region::semi_box(2, 2, 2), BoundaryCondition::minus(), CouplingSpec::uniform(0.6),
                                        FieldSpec::wall_only(0.4));
  const auto g = rc_graph(inst, RcBoundary::spin_bc);
  CounterRng a(5, 2), b(5, 2);
  SpinConfiguration x(g.ordinary(), 1), y = x;
  for (int t = 0; t < 50; ++t) {
    x = sw_step(g, x, a);
    y = sw_step(g, y, b);
  }
  CHECK(x == y);
}

TEST_CASE("edge heat bath matches the exact random-cluster law") {
  const EdgeGraph g = cycle4(0.5);
  const auto exact = rc_exact_distribution(g);
  RcChain chain(g, EdgeConfiguration(4, 0), 21, 3);
  for (int t = 0; t < 1000; ++t) chain.sweep();
  const int sweeps = 100000;
  std::vector<std::vector<double>> series(5);
  for (int t = 0; t < sweeps; ++t) {
    chain.sweep();
    std::uint64_t bits = 0;
    for (std::size_t e = 0; e < 4; ++e) {
      series[e].push_back(chain.omega()[e]);
      bits |= std::uint64_t{chain.omega()[e]} << e;
    }
    series[4].push_back(bits == 15 ? 1.0 : 0.0);
  }
  for (std::size_t e = 0; e < 4; ++e) {
    double p = 0.0;
    for (std::size_t b = 0; b < exact.size(); ++b)
      if ((b >> e) & 1u) p += exact[b];
    const auto est = jackknife_mean(series[e]);
    CHECK(std::abs(est.mean - p) < 4 * est.stderr_);
  }
  const auto all = jackknife_mean(series[4]);
  CHECK(std::abs(all.mean - exact[15]) < 4 * all.stderr_);
  CHECK(chain.rebuilds() > 0);

  // The free-function form follows the same trajectory from the same stream.
  RcChain twin(g, EdgeConfiguration(4, 0), 8, 1);
  EdgeConfiguration omega(4, 0);
  CounterRng rng(8, 1);
  for (int t = 0; t < 300; ++t) {
    twin.sweep();
    for (std::size_t e = 0; e < 4; ++e) rc_heat_bath_edge(g, omega, e, rng);
  }
  CHECK(omega == twin.omega());
}

TEST_CASE("edge heat bath with ghosts") {
  const auto inst = ModelInstance::make(Region::semi_box(2, 0, 2), BoundaryCondition::minus_plus(),
                                        CouplingSpec::uniform(0.6), FieldSpec::wall_only(0.3));
  const auto g = rc_graph(inst, RcBoundary::spin_bc);
  const auto exact = rc_exact_distribution(g);
  RcChain chain(g, EdgeConfiguration(g.edges.size(), 0), 4, 0);
  for (int t = 0; t < 500; ++t) chain.sweep();
  std::vector<std::vector<double>> series(g.edges.size());
  for (int t = 0; t < 60000; ++t) {
    chain.sweep();
    for (std::size_t e = 0; e < g.edges.size(); ++e) series[e].push_back(chain.omega()[e]);
  }
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    double p = 0.0;
    for (std::size_t b = 0; b < exact.size(); ++b)
      if ((b >> e) & 1u) p += exact[b];
    const auto est = jackknife_mean(series[e]);
    CHECK(std::abs(est.mean - p) < 4 * std::max(est.stderr_, 1e-4));
  }
}

TEST_CASE("increasing events") {
  const IncreasingEvent f{{0b011, 0b100}};
  CHECK(f(0b011));
  CHECK(f(0b100));
  CHECK_FALSE(f(0b001));
  CHECK(f.describe(3) == "max(110,001)");
  CounterRng rng(2, 0);
  for (int t = 0; t < 200; ++t) {
    const auto g = IncreasingEvent::random(rng, 6);
    // Monotone: adding open edges never turns the event off.
    for (std::uint64_t b = 0; b < 64; ++b)
      for (int e = 0; e < 6; ++e)
        if (g(b)) CHECK(g(b | (std::uint64_t{1} << e)));
  }
}

TEST_CASE("random-cluster measure increases with the coupling") {
  auto inst = ModelInstance::make(Region::explicit_sites(2, {Site{0, 0}, Site{1, 0}, Site{0, 1}, Site{1, 1}}),
                                  BoundaryCondition::plus(), CouplingSpec::uniform(0.3), FieldSpec::wall_only(0.2));
  inst.universe = Universe::full;
  auto weak = inst;
  weak.couplings = CouplingSpec::layer_weakened(0.3, 0.2);
  const auto low = rc_graph(weak, RcBoundary::wired), high = rc_graph(inst, RcBoundary::wired);
  REQUIRE(low.edges.size() == 12);
  bool weakened = false;
  for (std::size_t e = 0; e < low.edges.size(); ++e) weakened = weakened || low.edges[e].J < high.edges[e].J;
  CHECK(weakened);
  CounterRng rng(4, 0);
  std::vector<IncreasingEvent> events;
  for (int t = 0; t < 40; ++t) events.push_back(IncreasingEvent::random(rng, low.edges.size()));
  const auto rep = compare_rc_in_J(low, high, events);
  CHECK(rep.passed());
  CHECK(rep.checks == 40);
  CHECK_THROWS_AS(compare_rc_in_J(high, low, events), std::invalid_argument);
  auto neg = inst;
  neg.field = FieldSpec::wall_only(-0.2);
  CHECK_THROWS_AS(check_rc_fkg(rc_graph(neg, RcBoundary::wired), 5, 1), std::invalid_argument);
}

TEST_CASE("FKG and free-wired domination") {
  for (double J : {0.2, 0.7, 1.5}) {
    const auto inst = ModelInstance::make(Region::semi_box(2, 1, 2), BoundaryCondition::plus(), CouplingSpec::uniform(J),
                                          FieldSpec::decay_hat(0.4, 1.5));
    const auto wired = rc_graph(inst, RcBoundary::wired);
    CHECK(check_rc_fkg(wired, 60, 7).passed());
    CHECK(check_free_wired_domination(rc_graph(inst, RcBoundary::free), wired, 60, 8).passed());
  }
}

TEST_CASE("disjoint graphs give product measures") {
  EdgeGraph g = path_graph({0.1, 0.2, 0.3, 0.4}, 0.6);
  g.edges.erase(g.edges.begin() + 1);  // edges {0,1} and {2,3}
  const auto joint = rc_exact_distribution(g);
  const auto a = rc_exact_distribution(path_graph({0.1, 0.2}, 0.6));
  const auto b = rc_exact_distribution(path_graph({0.3, 0.4}, 0.6));
  for (std::size_t x = 0; x < 2; ++x)
    for (std::size_t y = 0; y < 2; ++y) CHECK(joint[x | (y << 1)] == doctest::Approx(a[x] * b[y]).epsilon(1e-12));
}

TEST_CASE("Edwards-Sokal marginals") {
  CounterRng rng(33, 0);
  int checked = 0;
  for (int trial = 0; trial < 16; ++trial) {
    const auto inst = random_small_instance(rng);
    if (!inst.field.parameters_non_negative()) {
      CHECK_THROWS_AS(es_marginal_check(inst), std::invalid_argument);
      continue;
    }
    const auto m = es_marginal_check(inst);
    CHECK(m.spin_tv <= 1e-12);
    CHECK(m.rc_tv <= 1e-12);
    ++checked;
  }
  CHECK(checked >= 4);
}

TEST_CASE("percolation proxy") {
  const auto inst = ModelInstance::make(Region::semi_box(2, 1, 3), BoundaryCondition::plus(), CouplingSpec::uniform(0.5),
                                        FieldSpec::wall_only(0.2), 1.0);
  const Site origin{0, 1};
  const auto c = percolation_proxy(inst, origin, {0, 1, 2}, 20000, 12);
  CHECK(c.probability[0] == 1.0);
  CHECK(c.probability[1] >= c.probability[2]);

  // Exact reference by enumeration of the same graph.
  auto plus = inst;
  plus.bc = BoundaryCondition::plus();
  const auto g = rc_graph(plus, RcBoundary::spin_bc);
  const auto exact = rc_exact_distribution(g, 22);
  int start = -1;
  for (std::size_t i = 0; i < g.ordinary(); ++i)
    if (g.sites[i] == origin) start = static_cast<int>(i);
  std::vector<double> p(3, 0.0);
  for (std::uint64_t b = 0; b < exact.size(); ++b) {
    const int r = reach(g, b, start);
    for (int k = 0; k < 3; ++k)
      if (r >= k) p[static_cast<std::size_t>(k)] += exact[b];
  }
  for (std::size_t k = 1; k < 3; ++k) CHECK(std::abs(c.probability[k] - p[k]) <= 4 * c.stderr_[k] + 1e-12);
  CHECK(p[2] > 0.0);

  auto zero = inst;
  zero.couplings = CouplingSpec::uniform(0.0);
  const auto z = percolation_proxy(zero, origin, {0, 1, 2}, 500, 1);
  CHECK(z.probability[0] == 1.0);
  CHECK(z.probability[1] == 0.0);
  CHECK_THROWS_AS(percolation_proxy(inst, Site{5, 5}, {1}, 10, 1), std::invalid_argument);
}
