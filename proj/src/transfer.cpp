#include <algorithm>
#include <cmath>
#include <map>

#include "wetting/error.hpp"
#include "wetting/exact.hpp"

namespace wetting {

namespace {

struct Layout {
  BoxBounds box;
  bool transposed;  // true: sweep y-major so the state spans the x extent
  int width;
};

std::optional<Layout> layout_of(const CompiledModel& m) {
  if (m.dim != 2 || m.sites.empty()) return std::nullopt;
  BoxBounds box;
  box.dim = 2;
  box.lo = m.sites.front().c;
  box.hi = m.sites.front().c;
  for (const auto& s : m.sites)
    for (int k = 0; k < 2; ++k) {
      box.lo[static_cast<std::size_t>(k)] = std::min(box.lo[static_cast<std::size_t>(k)], s[k]);
      box.hi[static_cast<std::size_t>(k)] = std::max(box.hi[static_cast<std::size_t>(k)], s[k]);
    }
  if (box.volume() != m.sites.size()) return std::nullopt;
  const int X = static_cast<int>(box.extent(0));
  const int Y = static_cast<int>(box.extent(1));
  Layout l{box, X < Y, std::min(X, Y)};
  return l;
}

}  // namespace

int TransferMatrix::width_of(const CompiledModel& model) {
  auto l = layout_of(model);
  return l ? l->width : -1;
}

bool TransferMatrix::applicable(const CompiledModel& model, int width_cap) {
  const int w = width_of(model);
  return w > 0 && w <= width_cap;
}

TransferMatrix::TransferMatrix(const CompiledModel& model, int width_cap) : beta_(model.beta) {
  auto l = layout_of(model);
  if (!l) throw CapacityError("transfer matrix: region is not a 2-d product box");
  if (l->width > width_cap)
    throw CapacityError("transfer matrix: width " + std::to_string(l->width) + " exceeds the cap of " +
                        std::to_string(width_cap));
  width_ = l->width;
  const int X = static_cast<int>(l->box.extent(0));
  const int Y = static_cast<int>(l->box.extent(1));
  const int outer = l->transposed ? Y : X;
  const int inner = l->transposed ? X : Y;

  std::map<std::pair<int, int>, double> J;
  for (const auto& b : model.bonds) {
    J[{b.a, b.b}] = b.J;
    J[{b.b, b.a}] = b.J;
  }
  auto bond = [&](int a, int b) {
    auto it = J.find({a, b});
    return it == J.end() ? std::optional<double>{} : std::optional<double>{it->second};
  };
  const std::vector<double> h = model.effective_field();

  std::vector<int> order;
  order.reserve(model.size());
  for (int o = 0; o < outer; ++o)
    for (int in = 0; in < inner; ++in) {
      Site s{0, 0};
      s[0] = l->box.lo[0] + (l->transposed ? in : o);
      s[1] = l->box.lo[1] + (l->transposed ? o : in);
      order.push_back(model.index_of(s));
    }
  for (std::size_t t = 0; t < order.size(); ++t) {
    Step st{order[t], -1, 0.0, -1, 0.0, h[static_cast<std::size_t>(order[t])]};
    const int bit = static_cast<int>(t % static_cast<std::size_t>(width_));
    if (t >= static_cast<std::size_t>(width_)) {
      if (auto j = bond(order[t], order[t - static_cast<std::size_t>(width_)])) {
        st.left_bit = bit;
        st.left_J = *j;
      }
    }
    if (t % static_cast<std::size_t>(inner) != 0) {
      if (auto j = bond(order[t], order[t - 1])) {
        st.down_bit = (bit + width_ - 1) % width_;
        st.down_J = *j;
      }
    }
    steps_.push_back(st);
  }
}

double TransferMatrix::log_partition(std::span<const std::pair<int, int>> pins) const {
  const std::size_t states = std::size_t{1} << width_;
  std::vector<double> v(states, 0.0), next(states);
  v[0] = 1.0;
  double log_scale = 0.0;
  for (std::size_t t = 0; t < steps_.size(); ++t) {
    const Step& st = steps_[t];
    int pinned = 0;
    for (const auto& [site, spin] : pins)
      if (site == st.site) pinned = spin;
    const int bit = static_cast<int>(t % static_cast<std::size_t>(width_));
    const std::size_t mask = std::size_t{1} << bit;
    // Weights exp(beta * sigma * (J_left tau + J_down sigma_down + h)).
    double w[2][2][2];  // [sigma][tau][down]
    for (int s = 0; s < 2; ++s)
      for (int tau = 0; tau < 2; ++tau)
        for (int d = 0; d < 2; ++d) {
          const double sig = s ? 1.0 : -1.0;
          const double local = st.left_J * (tau ? 1.0 : -1.0) + st.down_J * (d ? 1.0 : -1.0) + st.h;
          w[s][tau][d] = std::exp(beta_ * sig * local);
        }
    double top = 0.0;
    for (std::size_t sp = 0; sp < states; ++sp) {
      const int s = (sp & mask) ? 1 : 0;
      if (pinned != 0 && (pinned > 0) != (s == 1)) {
        next[sp] = 0.0;
        continue;
      }
      const int d = st.down_bit >= 0 ? static_cast<int>((sp >> st.down_bit) & 1u) : 0;
      const std::size_t s0 = sp & ~mask;
      const std::size_t s1 = sp | mask;
      double val;
      if (st.left_bit >= 0) {
        val = v[s0] * w[s][0][d] + v[s1] * w[s][1][d];
      } else {
        // No bond to the dropped site: its spin is summed out with weight 1.
        val = (v[s0] + v[s1]) * w[s][0][d];
      }
      next[sp] = val;
      top = std::max(top, val);
    }
    if (!(top > 0.0)) return -INFINITY;
    for (std::size_t sp = 0; sp < states; ++sp) v[sp] = next[sp] / top;
    log_scale += std::log(top);
  }
  double z = 0.0;
  for (double x : v) z += x;
  return log_scale + std::log(z);
}

double TransferMatrix::magnetization(int site) const {
  const std::pair<int, int> plus[] = {{site, 1}};
  const std::pair<int, int> minus[] = {{site, -1}};
  const double a = log_partition(plus);
  const double b = log_partition(minus);
  return std::tanh(0.5 * (a - b));
}

double TransferMatrix::pair(int a, int b) const {
  if (a == b) return 1.0;
  double logs[4];
  int idx = 0;
  for (int sa : {1, -1})
    for (int sb : {1, -1}) {
      const std::pair<int, int> pins[] = {{a, sa}, {b, sb}};
      logs[idx++] = log_partition(pins);
    }
  const double top = std::max(std::max(logs[0], logs[1]), std::max(logs[2], logs[3]));
  double num = 0.0, den = 0.0;
  const double sgn[4] = {1.0, -1.0, -1.0, 1.0};
  for (int k = 0; k < 4; ++k) {
    const double w = std::exp(logs[k] - top);
    num += sgn[k] * w;
    den += w;
  }
  return num / den;
}

}  // namespace wetting
