#include "wetting/lattice.hpp"

#include <algorithm>
#include <cstdlib>
#include <stdexcept>

#include "wetting/error.hpp"

namespace wetting {

Site::Site(std::initializer_list<int> coords) {
  if (coords.size() < 1 || coords.size() > static_cast<std::size_t>(kMaxDim))
    throw std::invalid_argument("Site: dimension out of range");
  dim = static_cast<int>(coords.size());
  std::copy(coords.begin(), coords.end(), c.begin());
}

Site Site::from(std::span<const int> coords) {
  if (coords.empty() || coords.size() > static_cast<std::size_t>(kMaxDim))
    throw std::invalid_argument("Site: dimension out of range");
  Site s;
  s.dim = static_cast<int>(coords.size());
  std::copy(coords.begin(), coords.end(), s.c.begin());
  return s;
}

int Site::l1_norm() const {
  int total = 0;
  for (int k = 0; k < dim; ++k) total += std::abs(c[k]);
  return total;
}

std::strong_ordering operator<=>(const Site& a, const Site& b) {
  if (auto cmp = a.dim <=> b.dim; cmp != 0) return cmp;
  for (int k = 0; k < a.dim; ++k)
    if (auto cmp = a.c[k] <=> b.c[k]; cmp != 0) return cmp;
  return std::strong_ordering::equal;
}

std::string to_string(const Site& s) {
  std::string out = "(";
  for (int k = 0; k < s.dim; ++k) {
    if (k) out += ",";
    out += std::to_string(s[k]);
  }
  return out + ")";
}

std::size_t SiteHash::operator()(const Site& s) const noexcept {
  std::size_t h = static_cast<std::size_t>(s.dim) * 0x9E3779B97F4A7C15ull;
  for (int k = 0; k < s.dim; ++k) {
    h ^= static_cast<std::size_t>(static_cast<unsigned>(s[k])) + 0x9E3779B97F4A7C15ull + (h << 6) + (h >> 2);
  }
  return h;
}

Edge::Edge(const Site& x, const Site& y) {
  if (x.dim != y.dim) throw std::invalid_argument("Edge: dimension mismatch");
  int dist = 0;
  for (int k = 0; k < x.dim; ++k) dist += std::abs(x[k] - y[k]);
  if (dist != 1) throw std::invalid_argument("Edge: endpoints are not nearest neighbours");
  if (x < y) {
    a = x;
    b = y;
  } else {
    a = y;
    b = x;
  }
}

bool in_universe(const Site& s, Universe u) {
  return u == Universe::full || s.height() >= 1;
}

Site reflect(const Site& s, Reflection r) {
  Site out = s;
  out[s.dim - 1] = (r == Reflection::half_plane) ? 1 - s.height() : -s.height();
  return out;
}

Site mirror_point(const Site& s) {
  Site out = s;
  for (int k = 0; k < s.dim; ++k) out[k] = -s[k];
  out[s.dim - 1] += 1;
  return out;
}

std::size_t BoxBounds::volume() const {
  std::size_t v = 1;
  for (int k = 0; k < dim; ++k) v *= extent(k);
  return v;
}

namespace {

void check_dim(int dim) {
  if (dim < 2 || dim > kMaxDim) throw std::invalid_argument("Region: dimension must be in [2, 6]");
}

std::size_t ipow(std::size_t base, int e) {
  std::size_t r = 1;
  for (int k = 0; k < e; ++k) r *= base;
  return r;
}

}  // namespace

Region Region::semi_box(int dim, int n, int m) {
  check_dim(dim);
  if (n < 0 || m < 0) throw std::invalid_argument("semi_box: n and m must be non-negative");
  Region r;
  r.kind_ = Kind::semi_box;
  r.dim_ = dim;
  r.n_ = n;
  r.m_ = m;
  return r;
}

Region Region::extended_box(int dim, int n, Reflection refl) {
  check_dim(dim);
  if (n < 0) throw std::invalid_argument("extended_box: n must be non-negative");
  Region r;
  r.kind_ = Kind::extended_box;
  r.dim_ = dim;
  r.n_ = n;
  r.m_ = n;
  r.reflection_ = refl;
  return r;
}

Region Region::full_box(int dim, int m, int n) {
  check_dim(dim);
  if (n < 0 || m < 0) throw std::invalid_argument("full_box: m and n must be non-negative");
  Region r;
  r.kind_ = Kind::full_box;
  r.dim_ = dim;
  r.m_ = m;
  r.n_ = n;
  return r;
}

Region Region::explicit_sites(int dim, std::vector<Site> sites) {
  check_dim(dim);
  for (const auto& s : sites)
    if (s.dim != dim) throw std::invalid_argument("explicit_sites: site dimension mismatch");
  std::sort(sites.begin(), sites.end());
  sites.erase(std::unique(sites.begin(), sites.end()), sites.end());
  Region r;
  r.kind_ = Kind::explicit_sites;
  r.dim_ = dim;
  r.explicit_ = std::move(sites);
  return r;
}

bool Region::contains(const Site& s) const {
  if (s.dim != dim_) return false;
  const int h = s.height();
  const int lateral = (kind_ == Kind::full_box) ? m_ : n_;
  if (kind_ != Kind::explicit_sites)
    for (int k = 0; k + 1 < dim_; ++k)
      if (s[k] < -lateral || s[k] > lateral) return false;
  switch (kind_) {
    case Kind::semi_box:
      return h >= 1 && h <= m_;
    case Kind::extended_box:
      if (h >= 1 && h <= n_) return true;
      if (reflection_ == Reflection::half_plane) return h <= 0 && h >= 1 - n_;
      return h <= -1 && h >= -n_;
    case Kind::full_box:
      return h >= -n_ && h <= n_;
    case Kind::explicit_sites:
      return std::binary_search(explicit_.begin(), explicit_.end(), s);
  }
  return false;
}

std::size_t Region::size() const {
  const auto lateral = [&](int half) { return ipow(static_cast<std::size_t>(2 * half + 1), dim_ - 1); };
  switch (kind_) {
    case Kind::semi_box:
      return lateral(n_) * static_cast<std::size_t>(m_);
    case Kind::extended_box:
      return 2 * lateral(n_) * static_cast<std::size_t>(n_);
    case Kind::full_box:
      return lateral(m_) * static_cast<std::size_t>(2 * n_ + 1);
    case Kind::explicit_sites:
      return explicit_.size();
  }
  return 0;
}

std::optional<BoxBounds> Region::product_bounds() const {
  BoxBounds b;
  b.dim = dim_;
  const int lateral = (kind_ == Kind::full_box) ? m_ : n_;
  for (int k = 0; k + 1 < dim_; ++k) {
    b.lo[k] = -lateral;
    b.hi[k] = lateral;
  }
  const int d = dim_ - 1;
  switch (kind_) {
    case Kind::semi_box:
      if (m_ == 0) return std::nullopt;
      b.lo[d] = 1;
      b.hi[d] = m_;
      return b;
    case Kind::extended_box:
      if (n_ == 0 || reflection_ != Reflection::half_plane) return std::nullopt;
      b.lo[d] = 1 - n_;
      b.hi[d] = n_;
      return b;
    case Kind::full_box:
      b.lo[d] = -n_;
      b.hi[d] = n_;
      return b;
    case Kind::explicit_sites: {
      if (explicit_.empty()) return std::nullopt;
      for (int k = 0; k < dim_; ++k) {
        b.lo[k] = explicit_.front()[k];
        b.hi[k] = explicit_.front()[k];
      }
      for (const auto& s : explicit_)
        for (int k = 0; k < dim_; ++k) {
          b.lo[k] = std::min(b.lo[k], s[k]);
          b.hi[k] = std::max(b.hi[k], s[k]);
        }
      if (b.volume() != explicit_.size()) return std::nullopt;
      return b;
    }
  }
  return std::nullopt;
}

Universe Region::default_universe() const {
  if (kind_ == Kind::semi_box) return Universe::semi_infinite;
  if (kind_ == Kind::explicit_sites) {
    for (const auto& s : explicit_)
      if (s.height() < 1) return Universe::full;
    return Universe::semi_infinite;
  }
  return Universe::full;
}

bool operator==(const Region& a, const Region& b) {
  return a.kind_ == b.kind_ && a.dim_ == b.dim_ && a.n_ == b.n_ && a.m_ == b.m_ &&
         a.reflection_ == b.reflection_ && a.explicit_ == b.explicit_;
}

std::vector<Site> sites_of(const Region& region, std::size_t max_sites) {
  const std::size_t count = region.size();
  if (count > max_sites)
    throw CapacityError("region has " + std::to_string(count) + " sites, cap is " + std::to_string(max_sites));
  if (region.kind() == Region::Kind::explicit_sites) return region.explicit_list();

  // Enumerate the bounding box lexicographically and filter.
  const int dim = region.dim();
  const int lateral = (region.kind() == Region::Kind::full_box) ? region.m() : region.n();
  std::array<int, kMaxDim> lo{}, hi{};
  for (int k = 0; k + 1 < dim; ++k) {
    lo[k] = -lateral;
    hi[k] = lateral;
  }
  switch (region.kind()) {
    case Region::Kind::semi_box:
      lo[dim - 1] = 1;
      hi[dim - 1] = region.m();
      break;
    case Region::Kind::extended_box:
      lo[dim - 1] = -region.n();
      hi[dim - 1] = region.n();
      break;
    default:
      lo[dim - 1] = -region.n();
      hi[dim - 1] = region.n();
      break;
  }
  std::vector<Site> out;
  out.reserve(count);
  if (count == 0) return out;
  Site s;
  s.dim = dim;
  for (int k = 0; k < dim; ++k) s[k] = lo[k];
  while (true) {
    if (region.contains(s)) out.push_back(s);
    int k = dim - 1;
    while (k >= 0) {
      if (++s[k] <= hi[k]) break;
      s[k] = lo[k];
      --k;
    }
    if (k < 0) break;
  }
  return out;
}

Site neighbor_in_slot(const Site& s, int slot) {
  Site out = s;
  out[slot / 2] += (slot % 2 == 0) ? -1 : 1;
  return out;
}

std::vector<Site> neighbors(const Site& s, Universe u) {
  std::vector<Site> out;
  out.reserve(static_cast<std::size_t>(2 * s.dim));
  for (int slot = 0; slot < 2 * s.dim; ++slot) {
    Site t = neighbor_in_slot(s, slot);
    if (in_universe(t, u)) out.push_back(t);
  }
  return out;
}

BoundaryEdges boundary_edges(const Region& region, Universe u) {
  BoundaryEdges out;
  for (const auto& s : sites_of(region)) {
    if (!in_universe(s, u)) throw std::invalid_argument("boundary_edges: region leaves the universe");
    for (int slot = 0; slot < 2 * s.dim; ++slot) {
      Site t = neighbor_in_slot(s, slot);
      if (!in_universe(t, u)) continue;
      if (region.contains(t)) {
        if (s < t) out.interior.emplace_back(s, t);
      } else {
        out.frontier.push_back({s, t});
      }
    }
  }
  return out;
}

BoundaryCondition BoundaryCondition::fixed(std::map<Site, int> spins) {
  for (const auto& [site, v] : spins)
    if (v != 1 && v != -1) throw std::invalid_argument("fixed boundary: spins must be +1 or -1");
  BoundaryCondition bc(Kind::fixed);
  bc.fixed_ = std::move(spins);
  return bc;
}

BoundaryCondition BoundaryCondition::embed_plus(const BoundaryCondition& eta) {
  switch (eta.kind_) {
    case Kind::plus:
    case Kind::minus_plus:
      return eta;
    case Kind::minus:
      return minus_plus();
    case Kind::fixed: {
      BoundaryCondition bc = eta;
      bc.embed_ = true;
      return bc;
    }
    case Kind::free:
      break;
  }
  throw std::invalid_argument("embed_plus: free boundary has no spin values to embed");
}

std::optional<int> BoundaryCondition::spin_at(const Site& s) const {
  switch (kind_) {
    case Kind::plus:
      return 1;
    case Kind::minus:
      return -1;
    case Kind::minus_plus:
      return s.height() >= 1 ? -1 : 1;
    case Kind::free:
      return std::nullopt;
    case Kind::fixed: {
      if (embed_ && s.height() < 1) return 1;
      auto it = fixed_.find(s);
      if (it == fixed_.end()) throw ConfigurationError("fixed boundary has no spin at " + to_string(s));
      return it->second;
    }
  }
  return std::nullopt;
}

BoundaryCondition BoundaryCondition::flipped() const {
  switch (kind_) {
    case Kind::plus:
      return minus();
    case Kind::minus:
      return plus();
    case Kind::free:
      return free();
    case Kind::minus_plus: {
      // Flip of (-1 on H+, +1 below) is (+1 on H+, -1 below); only
      // expressible as a fixed boundary, which cannot be infinite. Callers
      // that need it use a Fixed map over the finite frontier.
      throw std::invalid_argument("flipped: minus_plus has no finite representation; use fixed()");
    }
    case Kind::fixed: {
      if (embed_) throw std::invalid_argument("flipped: embedded fixed boundary has no finite flip");
      std::map<Site, int> m;
      for (const auto& [site, v] : fixed_) m.emplace(site, -v);
      return fixed(std::move(m));
    }
  }
  return *this;
}

std::string to_string(BoundaryCondition::Kind k) {
  switch (k) {
    case BoundaryCondition::Kind::plus:
      return "plus";
    case BoundaryCondition::Kind::minus:
      return "minus";
    case BoundaryCondition::Kind::minus_plus:
      return "minusplus";
    case BoundaryCondition::Kind::free:
      return "free";
    case BoundaryCondition::Kind::fixed:
      return "fixed";
  }
  return "?";
}

}  // namespace wetting
