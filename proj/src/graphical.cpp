#include "wetting/graphical.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>
#include <unordered_map>

#include "wetting/error.hpp"
#include "wetting/spin_mc.hpp"

namespace wetting {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double log_q(double beta_J) { return beta_J > 0.0 ? std::log(std::expm1(2.0 * beta_J)) : kNegInf; }

double softplus(double x) { return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x)); }

void require_non_negative_field(const EdgeGraph& g, const char* what) {
  for (double h : g.field)
    if (h < 0.0) throw std::invalid_argument(std::string(what) + ": requires a non-negative field");
  for (const auto& e : g.edges)
    if (e.J < 0.0) throw std::invalid_argument(std::string(what) + ": requires non-negative couplings");
}

std::string bits_string(std::uint64_t bits, std::size_t m) {
  std::string s(m, '0');
  for (std::size_t k = 0; k < m; ++k)
    if ((bits >> k) & 1u) s[k] = '1';
  return s;
}

}  // namespace

std::size_t EdgeGraph::vertices() const {
  return sites.size() + (plus_ghost != kNoGhost ? 1 : 0) + (minus_ghost != kNoGhost ? 1 : 0);
}

int EdgeGraph::ghost_spin(int v) const {
  if (v == plus_ghost) return 1;
  if (v == minus_ghost) return -1;
  return 0;
}

EdgeGraph rc_graph(const ModelInstance& instance, RcBoundary boundary, EdgeSet set) {
  const CompiledModel m = compile(instance);
  EdgeGraph g;
  g.sites = m.sites;
  g.field = m.field;
  g.beta = m.beta;
  for (const auto& b : m.bonds) g.edges.push_back({b.a, b.b, b.J});

  struct Pending {
    int inside;
    int ghost_sign;  // +1 / -1 ghost, 0: ordinary exterior vertex
    Site outside;
    double J;
  };
  std::vector<Pending> pending;
  const auto frontier = boundary_edges(instance.region, instance.universe).frontier;
  for (const auto& f : frontier) {
    const int inside = m.index_of(f.inside);
    const double J = instance.couplings.between(f.inside, f.outside);
    switch (boundary) {
      case RcBoundary::free:
        if (set == EdgeSet::touching) pending.push_back({inside, 0, f.outside, J});
        break;
      case RcBoundary::wired: pending.push_back({inside, 1, f.outside, J}); break;
      case RcBoundary::spin_bc: {
        const auto spin = instance.bc.spin_at(f.outside);
        if (spin) pending.push_back({inside, *spin > 0 ? 1 : -1, f.outside, J});
        break;
      }
    }
  }
  // Exterior vertices first, then ghosts, so ghosts come last.
  std::unordered_map<Site, int, SiteHash> exterior;
  for (const auto& p : pending)
    if (p.ghost_sign == 0 && !exterior.count(p.outside)) {
      exterior[p.outside] = static_cast<int>(g.sites.size());
      g.sites.push_back(p.outside);
      g.field.push_back(field_at(instance.field, p.outside));
    }
  int next = static_cast<int>(g.sites.size());
  for (const auto& p : pending)
    if (p.ghost_sign > 0 && g.plus_ghost == EdgeGraph::kNoGhost) g.plus_ghost = next++;
  for (const auto& p : pending)
    if (p.ghost_sign < 0 && g.minus_ghost == EdgeGraph::kNoGhost) g.minus_ghost = next++;
  for (const auto& p : pending) {
    const int other = p.ghost_sign == 0 ? exterior[p.outside] : (p.ghost_sign > 0 ? g.plus_ghost : g.minus_ghost);
    if (set == EdgeSet::touching || p.ghost_sign == 0)
      g.edges.push_back({p.inside, other, p.J});
    else
      g.frozen.push_back({p.inside, other});
  }
  return g;
}

EdgeConfiguration edges_from_bits(std::uint64_t bits, std::size_t m) {
  EdgeConfiguration w(m);
  for (std::size_t k = 0; k < m; ++k) w[k] = static_cast<std::uint8_t>((bits >> k) & 1u);
  return w;
}

ClusterPartition clusters(const EdgeGraph& g, const EdgeConfiguration& omega) {
  if (omega.size() != g.edges.size()) throw std::invalid_argument("clusters: edge configuration size mismatch");
  const std::size_t V = g.vertices();
  UnionFind uf(V);
  for (std::size_t e = 0; e < omega.size(); ++e)
    if (omega[e]) uf.unite(g.edges[e].u, g.edges[e].v);
  for (const auto& [a, b] : g.frozen) uf.unite(a, b);
  ClusterPartition p;
  p.label.assign(V, -1);
  for (std::size_t v = 0; v < V; ++v) {
    const int root = uf.find(static_cast<int>(v));
    if (p.label[static_cast<std::size_t>(root)] < 0) {
      p.label[static_cast<std::size_t>(root)] = static_cast<int>(p.clusters.size());
      p.clusters.emplace_back();
    }
    const int c = p.label[static_cast<std::size_t>(root)];
    p.label[v] = c;
    auto& cl = p.clusters[static_cast<std::size_t>(c)];
    cl.vertices.push_back(static_cast<int>(v));
    if (v < g.ordinary()) cl.field_sum += g.field[v];
    cl.plus = cl.plus || static_cast<int>(v) == g.plus_ghost;
    cl.minus = cl.minus || static_cast<int>(v) == g.minus_ghost;
  }
  return p;
}

double log_cluster_factor(double beta_S, bool plus, bool minus) {
  if (plus && minus) return kNegInf;
  if (plus) return 0.0;
  if (minus) return -2.0 * beta_S;
  return softplus(-2.0 * beta_S);
}

double log_rc_weight(const EdgeGraph& g, const EdgeConfiguration& omega) {
  const ClusterPartition p = clusters(g, omega);
  double w = 0.0;
  for (std::size_t e = 0; e < omega.size(); ++e)
    if (omega[e]) w += log_q(g.beta * g.edges[e].J);
  for (const auto& c : p.clusters) w += log_cluster_factor(g.beta * c.field_sum, c.plus, c.minus);
  return w;
}

double rc_weight(const EdgeGraph& g, const EdgeConfiguration& omega) { return std::exp(log_rc_weight(g, omega)); }

namespace {

std::vector<double> normalize_log(std::vector<double> logw) {
  double top = kNegInf;
  for (double x : logw) top = std::max(top, x);
  if (top == kNegInf) throw ConditioningError("distribution has no configuration of positive weight");
  double z = 0.0;
  for (auto& x : logw) {
    x = std::exp(x - top);
    z += x;
  }
  for (auto& x : logw) x /= z;
  return logw;
}

}  // namespace

std::vector<double> rc_exact_distribution(const EdgeGraph& g, int cap) {
  const std::size_t m = g.edges.size();
  if (m > static_cast<std::size_t>(cap))
    throw CapacityError("rc_exact_distribution: " + std::to_string(m) + " edges exceed the cap of " +
                        std::to_string(cap));
  std::vector<double> logw(std::size_t{1} << m);
  for (std::size_t bits = 0; bits < logw.size(); ++bits) logw[bits] = log_rc_weight(g, edges_from_bits(bits, m));
  return normalize_log(std::move(logw));
}

namespace {

int spin_of(const EdgeGraph& g, const SpinConfiguration& sigma, int v) {
  return static_cast<std::size_t>(v) < g.ordinary() ? sigma[static_cast<std::size_t>(v)] : g.ghost_spin(v);
}

double log_es_weight(const EdgeGraph& g, const SpinConfiguration& sigma, const EdgeConfiguration& omega) {
  double w = 0.0;
  for (std::size_t e = 0; e < omega.size(); ++e) {
    if (!omega[e]) continue;
    const auto& ed = g.edges[e];
    if (spin_of(g, sigma, ed.u) != spin_of(g, sigma, ed.v)) return kNegInf;
    w += log_q(g.beta * ed.J);
  }
  for (const auto& [a, b] : g.frozen)
    if (spin_of(g, sigma, a) != spin_of(g, sigma, b)) return kNegInf;
  for (std::size_t i = 0; i < g.ordinary(); ++i) w += g.beta * g.field[i] * sigma[i];
  return w;
}

}  // namespace

double es_weight(const EdgeGraph& g, const SpinConfiguration& sigma, const EdgeConfiguration& omega) {
  if (sigma.size() != g.ordinary() || omega.size() != g.edges.size())
    throw std::invalid_argument("es_weight: configuration size mismatch");
  return std::exp(log_es_weight(g, sigma, omega));
}

EdgeConfiguration sample_edges_given_spins(const EdgeGraph& g, const SpinConfiguration& sigma, CounterRng& rng) {
  if (sigma.size() != g.ordinary()) throw std::invalid_argument("sample_edges_given_spins: size mismatch");
  EdgeConfiguration omega(g.edges.size(), 0);
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    const auto& ed = g.edges[e];
    const double u = rng.uniform();
    if (spin_of(g, sigma, ed.u) == spin_of(g, sigma, ed.v)) omega[e] = u < -std::expm1(-2.0 * g.beta * ed.J);
  }
  return omega;
}

SpinConfiguration sample_spins_given_edges(const EdgeGraph& g, const EdgeConfiguration& omega, CounterRng& rng) {
  const ClusterPartition p = clusters(g, omega);
  SpinConfiguration sigma(g.ordinary(), 1);
  for (const auto& c : p.clusters) {
    if (c.plus && c.minus) throw ConditioningError("open cluster joins the plus and minus boundary");
    const double u = rng.uniform();
    const int s = c.plus ? 1 : c.minus ? -1 : (u < logistic(2.0 * g.beta * c.field_sum) ? 1 : -1);
    for (int v : c.vertices)
      if (static_cast<std::size_t>(v) < g.ordinary()) sigma[static_cast<std::size_t>(v)] = static_cast<std::int8_t>(s);
  }
  return sigma;
}

SpinConfiguration sw_step(const EdgeGraph& g, const SpinConfiguration& sigma, CounterRng& rng,
                          EdgeConfiguration* omega_out) {
  EdgeConfiguration omega = sample_edges_given_spins(g, sigma, rng);
  SpinConfiguration next = sample_spins_given_edges(g, omega, rng);
  if (omega_out) *omega_out = std::move(omega);
  return next;
}

std::vector<double> sw_apply(const EdgeGraph& g, const std::vector<double>& pi) {
  const std::size_t n = g.ordinary(), m = g.edges.size();
  if (n + m > 24) throw CapacityError("sw_apply: state space too large");
  if (pi.size() != (std::size_t{1} << n)) throw std::invalid_argument("sw_apply: distribution size mismatch");
  std::vector<double> p_open(m);
  for (std::size_t e = 0; e < m; ++e) p_open[e] = -std::expm1(-2.0 * g.beta * g.edges[e].J);

  // Edge law after the first half-step.
  std::vector<double> mu(std::size_t{1} << m, 0.0);
  for (std::size_t s = 0; s < pi.size(); ++s) {
    if (pi[s] == 0.0) continue;
    const SpinConfiguration sigma = config_from_bits(s, n);
    std::uint64_t agree = 0;
    for (std::size_t e = 0; e < m; ++e)
      if (spin_of(g, sigma, g.edges[e].u) == spin_of(g, sigma, g.edges[e].v)) agree |= std::uint64_t{1} << e;
    for (std::size_t w = 0; w < mu.size(); ++w) {
      if (w & ~agree) continue;
      double p = pi[s];
      for (std::size_t e = 0; e < m && p != 0.0; ++e)
        if ((agree >> e) & 1u) p *= ((w >> e) & 1u) ? p_open[e] : 1.0 - p_open[e];
      mu[w] += p;
    }
  }
  // Spins given edges.
  std::vector<double> out(pi.size(), 0.0);
  for (std::size_t w = 0; w < mu.size(); ++w) {
    if (mu[w] == 0.0) continue;
    const ClusterPartition p = clusters(g, edges_from_bits(w, m));
    for (const auto& c : p.clusters)
      if (c.plus && c.minus) throw ConditioningError("sw_apply: reachable edge state with an empty conditional");
    for (std::size_t s = 0; s < out.size(); ++s) {
      double prob = mu[w];
      for (const auto& c : p.clusters) {
        int value = 0;
        bool constant = true;
        for (int v : c.vertices) {
          if (static_cast<std::size_t>(v) >= n) continue;
          const int sv = ((s >> v) & 1u) ? 1 : -1;
          if (value == 0) value = sv;
          constant = constant && sv == value;
        }
        if (!constant) {
          prob = 0.0;
          break;
        }
        if (value == 0) continue;  // ghost-only cluster
        if (c.plus) prob *= value == 1 ? 1.0 : 0.0;
        else if (c.minus) prob *= value == -1 ? 1.0 : 0.0;
        else {
          const double pp = logistic(2.0 * g.beta * c.field_sum);
          prob *= value == 1 ? pp : 1.0 - pp;
        }
        if (prob == 0.0) break;
      }
      out[s] += prob;
    }
  }
  return out;
}

RcChain::RcChain(EdgeGraph graph, EdgeConfiguration omega, std::uint64_t seed, std::uint32_t stream)
    : graph_(std::move(graph)), omega_(std::move(omega)), rng_(seed, stream) {
  if (omega_.size() != graph_.edges.size()) throw std::invalid_argument("RcChain: edge configuration size mismatch");
  rebuild(omega_.size());
}

void RcChain::rebuild(std::size_t skip) {
  const std::size_t V = graph_.vertices();
  uf_.reset(V);
  sum_.assign(V, 0.0);
  plus_.assign(V, 0);
  minus_.assign(V, 0);
  for (std::size_t v = 0; v < graph_.ordinary(); ++v) sum_[v] = graph_.field[v];
  if (graph_.plus_ghost >= 0) plus_[static_cast<std::size_t>(graph_.plus_ghost)] = 1;
  if (graph_.minus_ghost >= 0) minus_[static_cast<std::size_t>(graph_.minus_ghost)] = 1;
  for (std::size_t e = 0; e < omega_.size(); ++e)
    if (omega_[e] && e != skip) join(graph_.edges[e].u, graph_.edges[e].v);
  for (const auto& [a, b] : graph_.frozen) join(a, b);
}

void RcChain::join(int a, int b) {
  const int ra = uf_.find(a), rb = uf_.find(b);
  const int root = uf_.unite(ra, rb);
  if (root < 0) return;
  const int other = root == ra ? rb : ra;
  const auto r = static_cast<std::size_t>(root), o = static_cast<std::size_t>(other);
  sum_[r] += sum_[o];
  plus_[r] |= plus_[o];
  minus_[r] |= minus_[o];
}

double RcChain::log_factor(int root) const {
  const auto r = static_cast<std::size_t>(root);
  return log_cluster_factor(graph_.beta * sum_[r], plus_[r], minus_[r]);
}

void RcChain::heat_bath_edge(std::size_t e) {
  if (omega_[e]) {
    rebuild(e);
    ++rebuilds_;
  }
  const auto& ed = graph_.edges[e];
  const double u = rng_.uniform();
  const double lq = log_q(graph_.beta * ed.J);
  const int ra = uf_.find(ed.u), rb = uf_.find(ed.v);
  double p_open = 0.0;
  if (lq > kNegInf) {
    if (ra == rb) {
      p_open = -std::expm1(-2.0 * graph_.beta * ed.J);
    } else {
      const auto a = static_cast<std::size_t>(ra), b = static_cast<std::size_t>(rb);
      const double merged = log_cluster_factor(graph_.beta * (sum_[a] + sum_[b]), plus_[a] || plus_[b],
                                               minus_[a] || minus_[b]);
      const double split = log_factor(ra) + log_factor(rb);
      p_open = merged == kNegInf ? 0.0 : logistic(lq + merged - split);
    }
  }
  if (u < p_open) {
    omega_[e] = 1;
    join(ra, rb);
  } else {
    omega_[e] = 0;
  }
}

void RcChain::sweep() {
  for (std::size_t e = 0; e < omega_.size(); ++e) heat_bath_edge(e);
}

void rc_heat_bath_edge(const EdgeGraph& graph, EdgeConfiguration& omega, std::size_t edge, CounterRng& rng) {
  if (edge >= omega.size()) throw std::out_of_range("rc_heat_bath_edge: edge index");
  EdgeConfiguration closed = omega;
  closed[edge] = 0;
  EdgeConfiguration open = omega;
  open[edge] = 1;
  const double u = rng.uniform();
  const double lo = log_rc_weight(graph, open), lc = log_rc_weight(graph, closed);
  const double p_open = lo == kNegInf ? 0.0 : logistic(lo - lc);
  omega[edge] = u < p_open ? 1 : 0;
}

bool IncreasingEvent::operator()(std::uint64_t bits) const {
  for (auto t : terms)
    if ((bits & t) == t) return true;
  return false;
}

std::string IncreasingEvent::describe(std::size_t m) const {
  std::string s = "max(";
  for (std::size_t i = 0; i < terms.size(); ++i) s += (i ? "," : "") + bits_string(terms[i], m);
  return s + ")";
}

IncreasingEvent IncreasingEvent::random(CounterRng& rng, std::size_t m, int max_terms, int max_size) {
  if (m == 0) return IncreasingEvent{{0}};
  IncreasingEvent f;
  f.terms.resize(1 + rng.below(static_cast<std::uint64_t>(max_terms)));
  for (auto& t : f.terms) {
    const int size = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(std::min<std::size_t>(m, static_cast<std::size_t>(max_size)))));
    t = 0;
    while (std::popcount(t) < size) t |= std::uint64_t{1} << rng.below(m);
  }
  return f;
}

double rc_expectation(const std::vector<double>& dist, const IncreasingEvent& f) {
  double s = 0.0;
  for (std::size_t b = 0; b < dist.size(); ++b)
    if (f(b)) s += dist[b];
  return s;
}

InequalityReport compare_rc_in_J(const EdgeGraph& low, const EdgeGraph& high, const std::vector<IncreasingEvent>& events) {
  require_non_negative_field(low, "compare_rc_in_J");
  require_non_negative_field(high, "compare_rc_in_J");
  if (low.edges.size() != high.edges.size() || low.vertices() != high.vertices() || low.field != high.field)
    throw std::invalid_argument("compare_rc_in_J: graphs differ beyond their couplings");
  for (std::size_t e = 0; e < low.edges.size(); ++e) {
    const auto &a = low.edges[e], &b = high.edges[e];
    if (a.u != b.u || a.v != b.v) throw std::invalid_argument("compare_rc_in_J: edge lists differ");
    if (a.J > b.J) throw std::invalid_argument("compare_rc_in_J: requires J <= J' edgewise");
  }
  const auto p = rc_exact_distribution(low), q = rc_exact_distribution(high);
  InequalityReport rep;
  rep.name = "rc_monotone_in_J";
  for (const auto& f : events) rep.record(rc_expectation(q, f) - rc_expectation(p, f), f.describe(low.edges.size()));
  return rep;
}

InequalityReport check_rc_fkg(const EdgeGraph& g, int trials, std::uint64_t seed) {
  require_non_negative_field(g, "check_rc_fkg");
  const auto dist = rc_exact_distribution(g);
  const std::size_t m = g.edges.size();
  CounterRng rng(seed, 0x52434647u);
  InequalityReport rep;
  rep.name = "rc_fkg";
  for (int t = 0; t < trials; ++t) {
    const auto f = IncreasingEvent::random(rng, m), h = IncreasingEvent::random(rng, m);
    double ef = 0.0, eh = 0.0, efh = 0.0;
    for (std::size_t b = 0; b < dist.size(); ++b) {
      const bool x = f(b), y = h(b);
      ef += x ? dist[b] : 0.0;
      eh += y ? dist[b] : 0.0;
      efh += x && y ? dist[b] : 0.0;
    }
    rep.record(efh - ef * eh, "f=" + f.describe(m) + " g=" + h.describe(m));
  }
  return rep;
}

InequalityReport check_free_wired_domination(const EdgeGraph& free, const EdgeGraph& wired, int trials,
                                             std::uint64_t seed) {
  require_non_negative_field(free, "check_free_wired_domination");
  require_non_negative_field(wired, "check_free_wired_domination");
  if (free.edges.size() != wired.edges.size())
    throw std::invalid_argument("check_free_wired_domination: edge sets differ");
  const auto p0 = rc_exact_distribution(free), p1 = rc_exact_distribution(wired);
  const std::size_t m = free.edges.size();
  CounterRng rng(seed, 0x46574455u);
  InequalityReport rep;
  rep.name = "free_wired_domination";
  for (int t = 0; t < trials; ++t) {
    const auto f = IncreasingEvent::random(rng, m);
    rep.record(rc_expectation(p1, f) - rc_expectation(p0, f), f.describe(m));
  }
  return rep;
}

double total_variation(const std::vector<double>& p, const std::vector<double>& q) {
  if (p.size() != q.size()) throw std::invalid_argument("total_variation: size mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) s += std::abs(p[i] - q[i]);
  return 0.5 * s;
}

EsMarginals es_marginal_check(const ModelInstance& instance) {
  const EdgeGraph g = rc_graph(instance, RcBoundary::spin_bc, EdgeSet::touching);
  require_non_negative_field(g, "es_marginal_check");
  const std::size_t n = g.ordinary(), m = g.edges.size();
  if (n + m > 24) throw CapacityError("es_marginal_check: joint state space too large");
  std::vector<double> joint((std::size_t{1} << n) << m);
  for (std::size_t s = 0; s < (std::size_t{1} << n); ++s) {
    const SpinConfiguration sigma = config_from_bits(s, n);
    for (std::size_t w = 0; w < (std::size_t{1} << m); ++w)
      joint[(s << m) | w] = log_es_weight(g, sigma, edges_from_bits(w, m));
  }
  joint = normalize_log(std::move(joint));
  std::vector<double> spin(std::size_t{1} << n, 0.0), rc(std::size_t{1} << m, 0.0);
  for (std::size_t s = 0; s < spin.size(); ++s)
    for (std::size_t w = 0; w < rc.size(); ++w) {
      spin[s] += joint[(s << m) | w];
      rc[w] += joint[(s << m) | w];
    }
  EsMarginals out;
  out.spin_tv = total_variation(spin, gibbs_distribution(compile(instance)));
  out.rc_tv = total_variation(rc, rc_exact_distribution(g, 24));
  return out;
}

PercolationCurve percolation_proxy(const ModelInstance& instance, const Site& origin, const std::vector<int>& radii,
                                   std::size_t samples, std::uint64_t seed, std::size_t burn_in) {
  if (!std::is_sorted(radii.begin(), radii.end())) throw std::invalid_argument("percolation_proxy: radii must increase");
  ModelInstance wired = instance;
  wired.bc = BoundaryCondition::plus();
  const EdgeGraph g = rc_graph(wired, RcBoundary::spin_bc, EdgeSet::touching);
  require_non_negative_field(g, "percolation_proxy");
  int start = -1;
  for (std::size_t i = 0; i < g.ordinary(); ++i)
    if (g.sites[i] == origin) start = static_cast<int>(i);
  if (start < 0) throw std::invalid_argument("percolation_proxy: origin outside the box");

  const std::size_t n = g.ordinary();
  std::vector<std::vector<std::pair<int, std::size_t>>> adj(n);
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    const auto& ed = g.edges[e];
    if (static_cast<std::size_t>(ed.u) < n && static_cast<std::size_t>(ed.v) < n) {
      adj[static_cast<std::size_t>(ed.u)].push_back({ed.v, e});
      adj[static_cast<std::size_t>(ed.v)].push_back({ed.u, e});
    }
  }
  auto sup_distance = [&](int v) {
    int d = 0;
    for (int k = 0; k < origin.dim; ++k) d = std::max(d, std::abs(g.sites[static_cast<std::size_t>(v)][k] - origin[k]));
    return d;
  };

  CounterRng rng(seed, 0x50455243u);
  SpinConfiguration sigma(n, 1);
  EdgeConfiguration omega;
  for (std::size_t t = 0; t < burn_in; ++t) sigma = sw_step(g, sigma, rng, &omega);
  std::vector<std::vector<double>> hits(radii.size());
  std::vector<int> seen(n, -1);
  for (std::size_t t = 0; t < samples; ++t) {
    sigma = sw_step(g, sigma, rng, &omega);
    int reach = 0;
    std::queue<int> q;
    q.push(start);
    seen[static_cast<std::size_t>(start)] = static_cast<int>(t);
    while (!q.empty()) {
      const int v = q.front();
      q.pop();
      reach = std::max(reach, sup_distance(v));
      for (const auto& [w, e] : adj[static_cast<std::size_t>(v)])
        if (omega[e] && seen[static_cast<std::size_t>(w)] != static_cast<int>(t)) {
          seen[static_cast<std::size_t>(w)] = static_cast<int>(t);
          q.push(w);
        }
    }
    for (std::size_t r = 0; r < radii.size(); ++r) hits[r].push_back(reach >= radii[r] ? 1.0 : 0.0);
  }
  PercolationCurve c;
  c.radii = radii;
  c.samples = samples;
  for (const auto& h : hits) {
    const auto est = jackknife_mean(h);
    c.probability.push_back(est.mean);
    c.stderr_.push_back(est.stderr_);
  }
  return c;
}

}  // namespace wetting
