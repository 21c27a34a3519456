#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wetting/model.hpp"
#include "wetting/simd/kernels.hpp"

namespace wetting {

inline constexpr int kEnumerationCap = 24;
inline constexpr int kTransferWidthCap = 20;
inline constexpr int kDistributionCap = 20;

enum class ExactMethod { automatic, enumeration, transfer };

struct ExactOptions {
  ExactMethod method = ExactMethod::automatic;
  int enumeration_cap = kEnumerationCap;
  int transfer_width_cap = kTransferWidthCap;
  const simd::Kernels* kernels = nullptr;  // null: active ISA
};

/// Raw output of the exhaustive enumerator.
struct EnumerationResult {
  double log_partition = 0.0;
  std::vector<double> magnetization;
  std::vector<double> pair;  // n * n, empty unless requested
};

/// Sums e^{-beta H} over all 2^n configurations. The first min(n, 10) sites
/// form a block handled by the vector kernels; the rest are walked in
/// Gray-code order with incremental field updates.
EnumerationResult enumerate(const CompiledModel& model, bool pairs, const simd::Kernels& kernels,
                            int cap = kEnumerationCap);

/// Site-by-site transfer matrix for 2-d product boxes. The state holds the
/// spins of the last W sites, W the shorter box extent.
class TransferMatrix {
 public:
  static bool applicable(const CompiledModel& model, int width_cap = kTransferWidthCap);
  static int width_of(const CompiledModel& model);

  explicit TransferMatrix(const CompiledModel& model, int width_cap = kTransferWidthCap);

  /// log Z with some spins pinned (site index, spin).
  double log_partition(std::span<const std::pair<int, int>> pins = {}) const;
  double magnetization(int site) const;
  double pair(int a, int b) const;
  int width() const { return width_; }

 private:
  struct Step {
    int site;
    int left_bit;  // bit holding the neighbour W steps back, -1 if not bonded
    double left_J;
    int down_bit;  // bit of the previous step when bonded, -1 otherwise
    double down_J;
    double h;
  };
  int width_ = 0;
  double beta_ = 1.0;
  std::vector<Step> steps_;
};

/// Exact solver over a compiled model picking enumeration or transfer matrix.
class ExactSolver {
 public:
  explicit ExactSolver(CompiledModel model, ExactOptions options = {});

  const CompiledModel& model() const { return model_; }
  ExactMethod method() const { return method_; }

  double log_partition();
  const std::vector<double>& magnetizations();
  double magnetization(int site);
  double pair(int a, int b);

 private:
  void run_enumeration(bool pairs);

  CompiledModel model_;
  ExactOptions options_;
  ExactMethod method_;
  std::optional<TransferMatrix> tm_;
  std::optional<double> log_z_;
  std::vector<double> mag_;
  std::vector<double> pairs_;
};

double log_partition(const ModelInstance& instance, ExactOptions options = {});

/// <prod_{s in sites} sigma_s>; sites must be distinct and inside the region.
double expectation(const ModelInstance& instance, const std::vector<Site>& sites, ExactOptions options = {});

/// Gibbs probabilities indexed by configuration bits (bit k: site k is +1).
std::vector<double> gibbs_distribution(const CompiledModel& model, int cap = kDistributionCap);

// ---------------------------------------------------------------------------
// Finite-volume free energies. The wall influence lambda is added to the
// field as WallOnly(lambda); beta multiplies the whole Hamiltonian.

enum class Sign { plus, minus };

/// -(1 / (2 |W_n|)) ln[(Z^{+-}_n)^2 / Q^{+-}_{Delta_n; 0}].
double finite_surface_free_energy(int n, Sign sign, const CouplingSpec& couplings, const FieldSpec& field,
                                  double lambda, double beta = 1.0, int dim = 2, ExactOptions options = {});

/// -(1 / |W_n|) ln[Z^-_{n,m} / Z^+_{n,m}] on SemiBox(n, m); m < 0 means m = n.
double finite_wall_free_energy(int n, const CouplingSpec& couplings, const FieldSpec& field, double lambda,
                               double beta = 1.0, int dim = 2, int m = -1, ExactOptions options = {});

/// -(1 / (2m+1)^{d-1}) ln[Q^{-+}_{Delta_{m,n}} / Q^{+}_{Delta_{m,n}}], zero field.
double finite_interface_free_energy(int m, int n, double J, double beta = 1.0, int dim = 2, ExactOptions options = {});

struct InterpolationReport {
  double direct = 0.0;
  double quadrature = 0.0;
  double gap = 0.0;
  std::size_t nodes = 0;
  std::string rule;
  bool non_summable = false;
};

/// Xi_n(t): Ising on Delta_n with plus boundary, bonds across the wall scaled
/// by (1 - t) and field t * mirrored(lambda on the wall + field). Returns
/// ln Xi(1) - ln Xi(0) directly and by quadrature of its t-derivative.
/// Empty t_grid: 64-node Gauss-Legendre; otherwise trapezoid on the sorted
/// grid, which must start at 0 and end at 1.
InterpolationReport interpolated_log_ratio(int n, std::span<const double> t_grid, const CouplingSpec& couplings,
                                           const FieldSpec& field, double lambda, double beta = 1.0, int dim = 2,
                                           ExactOptions options = {});

/// The integrand d/dt ln Xi_n(t).
double interpolation_integrand(int n, double t, const CouplingSpec& couplings, const FieldSpec& field, double lambda,
                               double beta = 1.0, int dim = 2, ExactOptions options = {});

// ---------------------------------------------------------------------------
// Inequality checkers.

struct InequalityReport {
  std::string name;
  std::size_t checks = 0;
  std::size_t violations = 0;
  double worst_margin = 0.0;  // most negative margin seen (>= -slack passes)
  std::string witness;        // description of the worst case
  double slack = 1e-12;
  std::vector<std::string> notes;
  bool passed() const { return violations == 0; }
  void record(double margin, const std::string& where);
};

/// <fg> >= <f><g> for random increasing f, g built as maxima of minima of
/// eta_i = (sigma_i + 1) / 2 over random site subsets.
InequalityReport check_fkg(const ModelInstance& instance, int trials, std::uint64_t seed, ExactOptions options = {});

/// Both duplicated-variable inequalities for every site pair, comparing the
/// plus and minus boundary versions of `instance`.
InequalityReport check_dvi(const ModelInstance& instance, ExactOptions options = {});

struct GapScan {
  std::vector<double> h;
  std::vector<double> gap;
  InequalityReport report;
};

/// Gap <sigma_i>^+ - <sigma_i>^- as the field at site j is set to each h in
/// h_grid; checks it is non-increasing.
GapScan check_gap_monotone_in_field(const ModelInstance& instance, const Site& i, const Site& j,
                                    std::span<const double> h_grid, ExactOptions options = {});

/// Finite-n wall free energy with field DecayHat(lambda, delta): monotone in
/// J and in single-layer field bumps, concave along lambda_grid.
InequalityReport check_tau_concavity_and_monotonicity(int n, std::span<const double> J_grid,
                                                      std::span<const double> lambda_grid, double delta,
                                                      double beta = 1.0, int dim = 2, int m = -1,
                                                      ExactOptions options = {});

/// gap_i = <sigma_i>^+ - <sigma_i>^- on the plus/minus versions of `instance`.
std::vector<double> exact_gaps(const ModelInstance& instance, ExactOptions options = {});

}  // namespace wetting
