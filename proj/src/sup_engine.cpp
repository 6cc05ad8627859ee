#include "sup_engine.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

namespace remrec::detail {

namespace {
constexpr std::int64_t kLeaf = 16;
}

SupEngine::SupEngine(const Trajectory& traj) : traj_(traj) {
  if (traj.kind() != TimeKind::Continuous) return;
  const auto& v = traj.values();
  const auto& d = traj.derivatives();
  const std::size_t n = v.size() - 1;
  leaves_ = 1;
  while (leaves_ < n) leaves_ <<= 1;
  tree_.assign(2 * leaves_, 0.0);
  const double h = traj.step();
  // |p'| <= 1.5|dv|/h + |d_i| + |d_{i+1}| for the cubic Hermite piece.
  for (std::size_t i = 0; i < n; ++i)
    tree_[leaves_ + i] = 1.5 * std::fabs(v[i + 1] - v[i]) / h + std::fabs(d[i]) + std::fabs(d[i + 1]);
  for (std::size_t i = leaves_ - 1; i >= 1; --i) tree_[i] = std::max(tree_[2 * i], tree_[2 * i + 1]);
}

double SupEngine::diff(double t, double tau) const {
  return std::fabs(traj_.at(t + tau) - traj_.at(t));
}

double SupEngine::slope(double a, double b) const {
  const double h = traj_.step();
  const auto n = static_cast<std::int64_t>(traj_.size()) - 1;
  auto lo = static_cast<std::int64_t>(std::floor((a - traj_.t0()) / h)) - 1;
  auto hi = static_cast<std::int64_t>(std::ceil((b - traj_.t0()) / h));
  lo = std::clamp<std::int64_t>(lo, 0, n - 1);
  hi = std::clamp<std::int64_t>(hi, 0, n - 1);
  double m = 0.0;
  std::size_t l = leaves_ + static_cast<std::size_t>(lo);
  std::size_t r = leaves_ + static_cast<std::size_t>(hi) + 1;
  while (l < r) {
    if (l & 1) m = std::max(m, tree_[l++]);
    if (r & 1) m = std::max(m, tree_[--r]);
    l >>= 1;
    r >>= 1;
  }
  return m;
}

SupEngine::Block SupEngine::make_block(std::int64_t lo, std::int64_t hi, double tau,
                                       double delta) const {
  const double t0 = traj_.t0();
  Block b{lo, hi, lo + (hi - lo) / 2, 0.0, 0.0};
  b.gc = diff(t0 + static_cast<double>(b.c) * delta, tau);
  const double ta = t0 + static_cast<double>(lo) * delta;
  const double tb = t0 + static_cast<double>(hi) * delta;
  const double radius = static_cast<double>(std::max(b.c - lo, hi - b.c)) * delta;
  b.ub = b.gc + (slope(ta, tb) + slope(ta + tau, tb + tau)) * radius;
  return b;
}

bool SupEngine::discrete_fast(double tau, double delta) const {
  return traj_.kind() == TimeKind::Discrete && delta == 1.0 && tau == std::nearbyint(tau);
}

SupEngine::Max SupEngine::grid_max(double tau, std::int64_t j_lo, std::int64_t j_hi,
                                   double delta) const {
  Max best{-1.0, 0.0};
  if (j_hi < j_lo) return {0.0, 0.0};
  const double t0 = traj_.t0();
  auto consider = [&](std::int64_t j, double g) {
    if (g > best.value) best = {g, t0 + static_cast<double>(j) * delta};
  };
  if (traj_.kind() == TimeKind::Discrete) {
    if (discrete_fast(tau, delta)) {
      const auto& v = traj_.values();
      const auto off = static_cast<std::int64_t>(tau);
      for (std::int64_t j = j_lo; j <= j_hi; ++j)
        consider(j, std::fabs(v[static_cast<std::size_t>(j + off)] - v[static_cast<std::size_t>(j)]));
    } else {
      for (std::int64_t j = j_lo; j <= j_hi; ++j) consider(j, diff(t0 + static_cast<double>(j) * delta, tau));
    }
    return best;
  }
  auto leaf = [&](std::int64_t lo, std::int64_t hi) {
    for (std::int64_t j = lo; j <= hi; ++j) consider(j, diff(t0 + static_cast<double>(j) * delta, tau));
  };
  auto cmp = [](const Block& a, const Block& b) { return a.ub < b.ub; };
  std::priority_queue<Block, std::vector<Block>, decltype(cmp)> queue(cmp);
  auto push = [&](std::int64_t lo, std::int64_t hi) {
    if (hi - lo + 1 <= kLeaf) {
      leaf(lo, hi);
      return;
    }
    Block b = make_block(lo, hi, tau, delta);
    consider(b.c, b.gc);
    if (b.ub > best.value) queue.push(b);
  };
  push(j_lo, j_hi);
  while (!queue.empty()) {
    Block b = queue.top();
    queue.pop();
    if (b.ub <= best.value) break;
    push(b.lo, b.c);
    push(b.c + 1, b.hi);
  }
  return best;
}

bool SupEngine::exceeds(double tau, std::int64_t j_lo, std::int64_t j_hi, double delta, double eps,
                        double* where) const {
  if (j_hi < j_lo) return false;
  const double t0 = traj_.t0();
  auto hit = [&](std::int64_t j) {
    if (where) *where = t0 + static_cast<double>(j) * delta;
    return true;
  };
  if (traj_.kind() == TimeKind::Discrete) {
    if (discrete_fast(tau, delta)) {
      const auto& v = traj_.values();
      const auto off = static_cast<std::int64_t>(tau);
      for (std::int64_t j = j_lo; j <= j_hi; ++j)
        if (std::fabs(v[static_cast<std::size_t>(j + off)] - v[static_cast<std::size_t>(j)]) > eps) return hit(j);
      return false;
    }
    for (std::int64_t j = j_lo; j <= j_hi; ++j)
      if (diff(t0 + static_cast<double>(j) * delta, tau) > eps) return hit(j);
    return false;
  }
  std::vector<std::pair<std::int64_t, std::int64_t>> stack{{j_lo, j_hi}};
  while (!stack.empty()) {
    auto [lo, hi] = stack.back();
    stack.pop_back();
    if (hi - lo + 1 <= kLeaf) {
      for (std::int64_t j = lo; j <= hi; ++j)
        if (diff(t0 + static_cast<double>(j) * delta, tau) > eps) return hit(j);
      continue;
    }
    const Block b = make_block(lo, hi, tau, delta);
    if (b.gc > eps) return hit(b.c);
    if (b.ub <= eps) continue;
    stack.emplace_back(b.c + 1, hi);
    stack.emplace_back(lo, b.c);
  }
  return false;
}

}  // namespace remrec::detail
