#include <atomic>
#include <cmath>

#include "doctest.h"
#include "wetting/thermo.hpp"

using namespace wetting;

TEST_CASE("parallel_for visits every index and rethrows") {
  std::vector<int> seen(100, 0);
  parallel_for(100, 3, [&](std::size_t i) { seen[i] += 1; });
  for (int s : seen) CHECK(s == 1);
  CHECK_THROWS_AS(parallel_for(10, 2, [](std::size_t i) {
                    if (i == 7) throw std::runtime_error("boom");
                  }),
                  std::runtime_error);
  parallel_for(0, 1, [](std::size_t) { FAIL("called"); });
}

TEST_CASE("decoupled boundary gives a zero integrand") {
  const Box box{1, 3, 2};
  CHECK(gap_integrand(0.0, 2.0, 0.7, box, 0, Estimator::exact_oracle()).total == 0.0);
  const auto mc = gap_integrand(0.0, 2.0, 0.7, box, 0, Estimator::monte_carlo({2000, 100, 1}, 3));
  CHECK(mc.total == 0.0);
  CHECK(mc.stderr_ == 0.0);
}

TEST_CASE("strong field closes the gap") {
  const auto s = gap_integrand(0.5, 2.0, 30.0, Box{1, 2, 2}, 0, Estimator::exact_oracle());
  CHECK(s.total >= 0.0);
  CHECK(s.total <= 1e-6);
}

TEST_CASE("integrand terms are non-negative and bounded") {
  for (double s : {0.0, 0.3, 1.0}) {
    const auto x = gap_integrand(0.7, 1.5, s, Box{1, 4, 2}, 0, Estimator::exact_oracle(), FieldPath::decay,
                                 Observable::layer_average, 0.8);
    REQUIRE(x.gap_terms.size() == 4);
    for (std::size_t l = 0; l < 4; ++l) {
      CHECK(x.gap_terms[l] >= -1e-15);
      CHECK(x.gap_terms[l] <= 2 * 0.8 * std::pow(l + 1.0, -1.5) + 1e-15);
    }
  }
  CHECK_THROWS_AS(gap_integrand(0.5, 2.0, -1.0, Box{1, 2, 2}, 0, Estimator::exact_oracle()), std::invalid_argument);
  CHECK_THROWS_AS(gap_integrand(0.5, 2.0, 0.1, Box{1, 2, 2}, 3, Estimator::exact_oracle()), std::invalid_argument);
}

TEST_CASE("exact and Monte Carlo integrands agree") {
  const Box box{1, 3, 2};
  for (auto obs : {Observable::layer_average, Observable::central_column}) {
    const auto ex = gap_integrand(0.5, 2.0, 0.3, box, 0, Estimator::exact_oracle(), FieldPath::decay, obs);
    const auto mc = gap_integrand(0.5, 2.0, 0.3, box, 0, Estimator::monte_carlo({100000, 1000, 1}, 11),
                                  FieldPath::decay, obs);
    CHECK(mc.stderr_ > 0.0);
    CHECK(std::abs(mc.total - ex.total) < 4 * mc.stderr_);
  }
}

TEST_CASE("integrated wall free energy equals the direct log ratio") {
  const Box box{1, 3, 2};
  const double direct = finite_wall_free_energy(1, CouplingSpec::uniform(0.5), FieldSpec::decay_hat(0.4, 2.0), 0.0,
                                                1.0, 2, 3);
  const auto p = tau_w_by_integration(0.5, 2.0, 0.4, box, QuadratureSpec{QuadratureKind::gauss, 32},
                                      Estimator::exact_oracle());
  CHECK(std::abs(p.tau - direct) <= 1e-6);
  CHECK(p.nodes == 32);
  CHECK_FALSE(p.non_summable);

  const auto zero = tau_w_by_integration(0.5, 2.0, 0.0, box, QuadratureSpec{}, Estimator::exact_oracle());
  CHECK(zero.tau == 0.0);
  CHECK(tau_w_by_integration(0.5, 0.5, 0.2, box, QuadratureSpec{}, Estimator::exact_oracle()).non_summable);

  // Wall-only path against the direct ratio with lambda on the wall.
  const auto w = tau_w_by_integration(0.8, 2.0, 0.6, Box{2, 2, 2}, QuadratureSpec{QuadratureKind::gauss, 32},
                                      Estimator::exact_oracle(), 0.7, 0, FieldPath::wall_only);
  CHECK(std::abs(w.tau - finite_wall_free_energy(2, CouplingSpec::uniform(0.8), FieldSpec::zero(), 0.6, 0.7, 2, 2)) <=
        1e-6);
}

TEST_CASE("wall-only tau is dominated by the decaying-field tau") {
  for (double J : {0.3, 0.8})
    for (double lambda : {0.1, 0.5, 1.2}) {
      const double wall = finite_wall_free_energy(1, CouplingSpec::uniform(J), FieldSpec::wall_only(lambda), 0.0, 1.0, 2, 3);
      const double both = finite_wall_free_energy(
          1, CouplingSpec::uniform(J),
          FieldSpec::sum({FieldSpec::wall_only(lambda), FieldSpec::decay_hat(lambda, 2.0)}), 0.0, 1.0, 2, 3);
      CHECK(wall <= both + 1e-12);
    }
}

TEST_CASE("truncation bound controls the dropped layers") {
  const Box box{1, 6, 2};
  const auto full = gap_integrand(0.9, 1.5, 0.2, box, 0, Estimator::exact_oracle());
  for (int depth = 1; depth < 6; ++depth) {
    const auto part = gap_integrand(0.9, 1.5, 0.2, box, depth, Estimator::exact_oracle());
    CHECK(full.total - part.total <= part.truncation_bound + 1e-15);
    CHECK(full.total - part.total >= -1e-15);
  }
  CHECK(full.truncation_bound == 0.0);
}

TEST_CASE("exact tau curve passes its audit") {
  std::vector<double> grid;
  for (int i = 0; i <= 10; ++i) grid.push_back(0.1 * i);
  const auto c = tau_curve(0.6, 2.0, grid, Box{1, 3, 2}, Estimator::exact_oracle());
  CHECK(c.source == "exact_oracle");
  CHECK(c.tau[0] == 0.0);
  const auto a = audit_curve(c);
  CHECK(a.passed());
  CHECK(a.worst_second_difference <= 1e-10);
  CHECK(c.tau.back() == doctest::Approx(finite_wall_free_energy(1, CouplingSpec::uniform(0.6),
                                                                FieldSpec::decay_hat(1.0, 2.0), 0.0, 1.0, 2, 3))
                            .epsilon(1e-10));
  // An increasing-slope curve fails the concavity audit.
  TauCurve bad = c;
  for (std::size_t k = 0; k < bad.tau.size(); ++k) bad.tau[k] = grid[k] * grid[k];
  CHECK(audit_curve(bad).concavity_violations > 0);
  CHECK_THROWS_AS(tau_curve(0.6, 2.0, {0.1, 0.2}, Box{1, 3, 2}, Estimator::exact_oracle()), std::invalid_argument);
}

TEST_CASE("Monte Carlo tau curve tracks the exact one") {
  const std::vector<double> grid{0.0, 0.25, 0.5, 0.75, 1.0};
  const Box box{1, 3, 2};
  const auto mc = tau_curve(0.6, 2.0, grid, box, Estimator::monte_carlo({40000, 1000, 1}, 5));
  CHECK(mc.source == "mc");
  CHECK(audit_curve(mc).passed());
  // Same trapezoid on exact integrand values.
  double tau = 0.0;
  for (std::size_t k = 1; k < grid.size(); ++k) {
    const double a = gap_integrand(0.6, 2.0, grid[k - 1], box, 0, Estimator::exact_oracle()).total;
    const double b = gap_integrand(0.6, 2.0, grid[k], box, 0, Estimator::exact_oracle()).total;
    tau += 0.5 * (grid[k] - grid[k - 1]) * (a + b);
    CHECK(std::abs(mc.tau[k] - tau) < 4 * mc.stderr_[k]);
  }
}

TEST_CASE("lambda_c scan") {
  const std::vector<double> grid{0.0, 0.5, 1.0, 2.0};
  ScanOptions opt;
  opt.depth = 1;
  // J = 0: integrand identically zero.
  const auto zero = lambda_c_scan(0.0, 2.0, grid, {Box{1, 2, 2}, Box{2, 2, 2}}, Estimator::exact_oracle(), opt);
  REQUIRE(zero.crossing.has_value());
  CHECK(*zero.crossing == 0.0);
  CHECK(zero.crossing_error == 0.0);
  CHECK_FALSE(zero.open_ended);

  // Weak coupling, boundary influence already below epsilon at lambda = 0.
  const auto weak = lambda_c_scan(0.1, 2.0, grid, {Box{4, 4, 2}, Box{5, 5, 2}}, Estimator::exact_oracle(), opt);
  REQUIRE(weak.crossing.has_value());
  CHECK(*weak.crossing == 0.0);
  CHECK(weak.monotone_violations == 0);

  // Strong coupling on a small grid: open-ended, not an error.
  const auto strong = lambda_c_scan(2.0, 2.0, {0.0, 0.1}, {Box{1, 3, 2}}, Estimator::exact_oracle(), opt);
  CHECK(strong.open_ended);
  CHECK_FALSE(strong.crossing.has_value());

  // Crossing index and error on a hand-checked curve.
  ScanOptions wall = opt;
  wall.path = FieldPath::wall_only;
  const std::vector<double> fine{0.0, 1.0, 2.0, 4.0, 8.0, 16.0};
  const auto w = lambda_c_scan(0.6, 2.0, fine, {Box{1, 2, 2}}, Estimator::exact_oracle(), wall);
  CHECK(w.depth == 1);
  const auto& c = w.curves[0];
  std::size_t k = fine.size();
  while (k > 0 && c.integrand[k - 1] < w.epsilon) --k;
  if (k < fine.size()) {
    REQUIRE(w.crossing.has_value());
    CHECK(*w.crossing == fine[k]);
    CHECK(w.crossing_error == (k > 0 ? fine[k] - fine[k - 1] : 0.0));
  }
  CHECK(w.monotone_violations == 0);
  CHECK_THROWS_AS(lambda_c_scan(0.6, 2.0, {0.5, 0.2}, {Box{1, 2, 2}}, Estimator::exact_oracle(), opt),
                  std::invalid_argument);
}
