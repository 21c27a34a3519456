#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "wetting/exact.hpp"
#include "wetting/model.hpp"
#include "wetting/rng.hpp"
#include "wetting/union_find.hpp"

namespace wetting {

/// How the outside of the box enters the random-cluster graph.
enum class RcBoundary {
  /// Exterior endpoints of E(Lambda) are ordinary vertices carrying their field.
  free,
  /// Exterior endpoints are merged into one plus ghost (S = +infinity).
  wired,
  /// Ghosts follow the spin boundary condition: plus ghost for +1 exterior
  /// spins, minus ghost for -1, and dropped frontier edges for free.
  spin_bc
};

/// Which edges are random. E(Lambda): every edge touching the box.
/// E0(Lambda): only edges with both ends inside; frontier edges are frozen
/// open for ghost boundaries and closed for the free one.
enum class EdgeSet { touching, interior };

/// Finite multigraph for the random-cluster and Edwards-Sokal measures.
/// Vertices 0..n-1 are ordinary; ghosts (when present) follow and carry a
/// frozen spin. Field values and couplings are stored without beta.
struct EdgeGraph {
  struct GraphEdge {
    int u;
    int v;
    double J;
  };
  static constexpr int kNoGhost = -1;

  std::vector<Site> sites;     // ordinary vertices
  std::vector<double> field;   // per ordinary vertex
  int plus_ghost = kNoGhost;
  int minus_ghost = kNoGhost;
  std::vector<GraphEdge> edges;
  /// Frozen-open attachments (E0 with ghost boundaries): (vertex, ghost).
  std::vector<std::pair<int, int>> frozen;
  double beta = 1.0;

  std::size_t ordinary() const { return sites.size(); }
  std::size_t vertices() const;
  /// Frozen spin of a ghost, 0 for ordinary vertices.
  int ghost_spin(int v) const;
};

EdgeGraph rc_graph(const ModelInstance& instance, RcBoundary boundary, EdgeSet set = EdgeSet::touching);

/// Open/closed bit per edge of the graph.
using EdgeConfiguration = std::vector<std::uint8_t>;

EdgeConfiguration edges_from_bits(std::uint64_t bits, std::size_t m);

struct ClusterPartition {
  struct Cluster {
    std::vector<int> vertices;  // ghosts included
    double field_sum = 0.0;     // over ordinary vertices
    bool plus = false;          // touches the plus ghost
    bool minus = false;         // touches the minus ghost
  };
  std::vector<int> label;  // per vertex
  std::vector<Cluster> clusters;
};

ClusterPartition clusters(const EdgeGraph& graph, const EdgeConfiguration& omega);

/// log of the cluster factor: ln(1 + e^{-2 beta S}) free, 0 with the plus
/// ghost, -2 beta S with the minus ghost, -inf with both.
double log_cluster_factor(double beta_S, bool plus, bool minus);

/// ln[prod_{open e} (e^{2 beta J_e} - 1) * prod_C cluster factor]; -inf for zero weight.
double log_rc_weight(const EdgeGraph& graph, const EdgeConfiguration& omega);
double rc_weight(const EdgeGraph& graph, const EdgeConfiguration& omega);

inline constexpr int kRcEdgeCap = 20;

/// Normalized probabilities over all 2^|E| edge configurations (bit k: edge k open).
std::vector<double> rc_exact_distribution(const EdgeGraph& graph, int cap = kRcEdgeCap);

/// prod_{open} delta(sigma_u, sigma_v)(e^{2 beta J} - 1) * prod_i e^{beta h_i sigma_i}.
/// `sigma` covers the ordinary vertices; ghosts use their frozen spins.
double es_weight(const EdgeGraph& graph, const SpinConfiguration& sigma, const EdgeConfiguration& omega);

EdgeConfiguration sample_edges_given_spins(const EdgeGraph& graph, const SpinConfiguration& sigma, CounterRng& rng);

/// Throws ConditioningError when a cluster holds both ghosts.
SpinConfiguration sample_spins_given_edges(const EdgeGraph& graph, const EdgeConfiguration& omega, CounterRng& rng);

/// One edges-given-spins then spins-given-edges draw. `omega_out` receives
/// the intermediate edge configuration when non-null.
SpinConfiguration sw_step(const EdgeGraph& graph, const SpinConfiguration& sigma, CounterRng& rng,
                          EdgeConfiguration* omega_out = nullptr);

/// Exact SW transition applied to a distribution over spin configurations
/// (index bits over the ordinary vertices).
std::vector<double> sw_apply(const EdgeGraph& graph, const std::vector<double>& spin_distribution);

/// Random-cluster chain resampling single edges from their conditional law.
/// Connectivity is a union-find forest rebuilt after an open edge is
/// examined; cluster field sums and ghost flags live at the roots.
class RcChain {
 public:
  RcChain(EdgeGraph graph, EdgeConfiguration omega, std::uint64_t seed, std::uint32_t stream = 0);

  /// Resample edge e.
  void heat_bath_edge(std::size_t e);
  /// One pass over all edges in order.
  void sweep();

  const EdgeConfiguration& omega() const { return omega_; }
  const EdgeGraph& graph() const { return graph_; }
  std::uint64_t rebuilds() const { return rebuilds_; }

 private:
  void rebuild(std::size_t skip);
  void join(int a, int b);
  double log_factor(int root) const;

  EdgeGraph graph_;
  EdgeConfiguration omega_;
  CounterRng rng_;
  UnionFind uf_;
  std::vector<double> sum_;
  std::vector<std::uint8_t> plus_, minus_;
  std::uint64_t rebuilds_ = 0;
};

/// Free-function form: resamples `edge` of `omega` in place.
void rc_heat_bath_edge(const EdgeGraph& graph, EdgeConfiguration& omega, std::size_t edge, CounterRng& rng);

/// Increasing event on edges: max over terms of (all edges of the term open).
struct IncreasingEvent {
  std::vector<std::uint64_t> terms;
  bool operator()(std::uint64_t omega_bits) const;
  std::string describe(std::size_t m) const;
  static IncreasingEvent random(CounterRng& rng, std::size_t m, int max_terms = 3, int max_size = 3);
};

/// phi(f) under an exact distribution indexed by edge bits.
double rc_expectation(const std::vector<double>& distribution, const IncreasingEvent& f);

/// phi_{J}(f) <= phi_{J'}(f); the graphs must share vertices and edges with J <= J' edgewise.
InequalityReport compare_rc_in_J(const EdgeGraph& low, const EdgeGraph& high, const std::vector<IncreasingEvent>& events);

/// phi(fg) >= phi(f) phi(g) for `trials` random increasing pairs.
InequalityReport check_rc_fkg(const EdgeGraph& graph, int trials, std::uint64_t seed);

/// phi^0(f) <= phi^1(f) for random increasing events; the graphs are the
/// free and wired versions of one box.
InequalityReport check_free_wired_domination(const EdgeGraph& free, const EdgeGraph& wired, int trials,
                                             std::uint64_t seed);

struct EsMarginals {
  double spin_tv = 0.0;  // against the Gibbs measure of the instance
  double rc_tv = 0.0;    // against rc_exact_distribution
};

/// Exact ES joint on the spin_bc graph of `instance` over E(Lambda), summed both ways.
EsMarginals es_marginal_check(const ModelInstance& instance);

double total_variation(const std::vector<double>& p, const std::vector<double>& q);

struct PercolationCurve {
  std::vector<int> radii;
  std::vector<double> probability;
  std::vector<double> stderr_;
  std::size_t samples = 0;
};

/// P(origin connected to the sup-norm shell at distance R) under the wired
/// (plus) random-cluster measure of `instance`, sampled through SW steps.
/// Only edges with both ends in the box count for connectivity.
PercolationCurve percolation_proxy(const ModelInstance& instance, const Site& origin, const std::vector<int>& radii,
                                   std::size_t samples, std::uint64_t seed, std::size_t burn_in = 100);

}  // namespace wetting
