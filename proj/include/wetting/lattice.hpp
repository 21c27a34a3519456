#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <functional>
#include <initializer_list>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace wetting {

inline constexpr int kMaxDim = 6;

/// A point of Z^d. The last coordinate is the height above the substrate;
/// the wall is the layer with last coordinate 1.
struct Site {
  std::array<int, kMaxDim> c{};
  int dim = 0;

  Site() = default;
  Site(std::initializer_list<int> coords);
  static Site from(std::span<const int> coords);

  int operator[](int k) const { return c[static_cast<std::size_t>(k)]; }
  int& operator[](int k) { return c[static_cast<std::size_t>(k)]; }
  int height() const { return c[static_cast<std::size_t>(dim - 1)]; }
  int l1_norm() const;

  friend bool operator==(const Site&, const Site&) = default;
  friend std::strong_ordering operator<=>(const Site& a, const Site& b);
};

std::string to_string(const Site& s);

struct SiteHash {
  std::size_t operator()(const Site& s) const noexcept;
};

/// Unordered nearest-neighbour pair, stored with a < b.
struct Edge {
  Site a;
  Site b;

  Edge() = default;
  Edge(const Site& x, const Site& y);
  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Universe the lattice lives in: the half-space H+ (last coordinate >= 1)
/// or all of Z^d.
enum class Universe { semi_infinite, full };

bool in_universe(const Site& s, Universe u);

/// Reflection used to build the extended box.
///  - half_plane: i_d -> 1 - i_d (plane i_d = 1/2), extended box is the
///    product [-n,n]^{d-1} x [1-n, n].
///  - negate:     i_d -> -i_d, extended box is [-n,n]^{d-1} x ([-n,-1] u [1,n]).
enum class Reflection { half_plane, negate };

Site reflect(const Site& s, Reflection r);

/// Point mirror used by mirrored fields: i -> -i + e_d.
Site mirror_point(const Site& s);

struct BoxBounds {
  std::array<int, kMaxDim> lo{};
  std::array<int, kMaxDim> hi{};
  int dim = 0;

  std::size_t extent(int k) const { return static_cast<std::size_t>(hi[k] - lo[k] + 1); }
  std::size_t volume() const;
};

class Region {
 public:
  enum class Kind { semi_box, extended_box, full_box, explicit_sites };

  /// Lambda_{n,m}: |i_k| <= n for k < d, 1 <= i_d <= m.
  static Region semi_box(int dim, int n, int m);
  /// Lambda_n united with its reflection.
  static Region extended_box(int dim, int n, Reflection r = Reflection::half_plane);
  /// Delta_{m,n} = [-m,m]^{d-1} x [-n,n].
  static Region full_box(int dim, int m, int n);
  static Region explicit_sites(int dim, std::vector<Site> sites);

  Kind kind() const { return kind_; }
  int dim() const { return dim_; }
  int n() const { return n_; }
  int m() const { return m_; }
  Reflection reflection() const { return reflection_; }

  bool contains(const Site& s) const;
  std::size_t size() const;

  /// Bounds when the region is a full product box, nullopt otherwise.
  std::optional<BoxBounds> product_bounds() const;

  /// Natural universe: semi-infinite for semi boxes, full otherwise.
  Universe default_universe() const;

  const std::vector<Site>& explicit_list() const { return explicit_; }

  friend bool operator==(const Region& a, const Region& b);

 private:
  Region() = default;

  Kind kind_ = Kind::semi_box;
  int dim_ = 2;
  int n_ = 0;
  int m_ = 0;
  Reflection reflection_ = Reflection::half_plane;
  std::vector<Site> explicit_;  // sorted, unique
};

inline constexpr std::size_t kDefaultSiteCap = std::size_t{1} << 22;

/// Sites in lexicographic order (first coordinate most significant).
std::vector<Site> sites_of(const Region& region, std::size_t max_sites = kDefaultSiteCap);

/// Nearest neighbours inside the universe, in slot order
/// (-e_1, +e_1, -e_2, +e_2, ...).
std::vector<Site> neighbors(const Site& s, Universe u);

/// Neighbour in direction slot (2k: -e_k, 2k+1: +e_k).
Site neighbor_in_slot(const Site& s, int slot);

struct FrontierEdge {
  Site inside;
  Site outside;
};

struct BoundaryEdges {
  std::vector<Edge> interior;
  std::vector<FrontierEdge> frontier;
};

/// All edges with at least one endpoint in the region, split into interior
/// and frontier edges. Deterministic order: by site, then by slot.
BoundaryEdges boundary_edges(const Region& region, Universe u);

/// Boundary condition: frozen exterior spins.
class BoundaryCondition {
 public:
  enum class Kind { plus, minus, minus_plus, free, fixed };

  static BoundaryCondition plus() { return BoundaryCondition(Kind::plus); }
  static BoundaryCondition minus() { return BoundaryCondition(Kind::minus); }
  /// -1 on H+, +1 below the wall.
  static BoundaryCondition minus_plus() { return BoundaryCondition(Kind::minus_plus); }
  static BoundaryCondition free() { return BoundaryCondition(Kind::free); }
  static BoundaryCondition fixed(std::map<Site, int> spins);
  /// eta+ embedding: eta on H+ and +1 on the complement.
  static BoundaryCondition embed_plus(const BoundaryCondition& eta);

  Kind kind() const { return kind_; }

  /// Exterior spin at s, or nullopt when the frontier edge is dropped (free).
  /// Throws ConfigurationError for a fixed boundary missing s.
  std::optional<int> spin_at(const Site& s) const;

  /// Global spin flip of the boundary values.
  BoundaryCondition flipped() const;

  friend bool operator==(const BoundaryCondition&, const BoundaryCondition&) = default;

 private:
  explicit BoundaryCondition(Kind k) : kind_(k) {}

  Kind kind_;
  std::map<Site, int> fixed_;
  bool embed_ = false;
};

std::string to_string(BoundaryCondition::Kind k);

}  // namespace wetting
