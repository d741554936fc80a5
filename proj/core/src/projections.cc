#include "onebit/projections.h"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "onebit/error.h"

namespace onebit {
namespace {

constexpr int kMaxBisections = 200;

// Stop bisecting once TV(u) is this close below the radius.
double BisectionTolerance(double radius) {
  return std::max(1e-9, 1e-8 * radius);
}

bool WithinRadius(double tv, double radius) {
  return tv <= radius * (1.0 + 1e-8) + 1e-10;
}

}  // namespace

VectorXd HardThreshold(const VectorXd& v, Index k) {
  if (k < 0 || k > v.size()) {
    throw ConfigError(fmt::format(
        "hard threshold level K = {} outside [0, {}]", k, v.size()));
  }
  if (k == v.size()) return v;

  std::vector<Index> order(static_cast<std::size_t>(v.size()));
  std::iota(order.begin(), order.end(), Index{0});
  const auto larger = [&v](Index a, Index b) {
    const double ma = std::abs(v[a]);
    const double mb = std::abs(v[b]);
    return ma > mb || (ma == mb && a < b);
  };
  std::nth_element(order.begin(), order.begin() + k, order.end(), larger);

  VectorXd out = VectorXd::Zero(v.size());
  for (Index i = 0; i < k; ++i) {
    const Index idx = order[static_cast<std::size_t>(i)];
    out[idx] = v[idx];
  }
  return out;
}

double TotalVariation(const Eigen::Ref<const VectorXd>& v) {
  const Index n = v.size();
  if (n <= 1) return 0.0;
  return (v.tail(n - 1) - v.head(n - 1)).cwiseAbs().sum();
}

// Condat's direct algorithm ("A direct algorithm for 1D total variation
// denoising", IEEE SPL 2013). Linear time in practice, exact up to rounding.
VectorXd TvProx(const Eigen::Ref<const VectorXd>& v, double lambda) {
  const Index n = v.size();
  VectorXd out(n);
  if (n == 0) return out;
  if (n == 1 || lambda <= 0.0) {
    out = v;
    return out;
  }

  Index k = 0, k0 = 0, kplus = 0, kminus = 0;
  double umin = lambda, umax = -lambda;
  double vmin = v[0] - lambda, vmax = v[0] + lambda;
  const double two_lambda = 2.0 * lambda;

  for (;;) {
    while (k == n - 1) {
      if (umin < 0.0) {
        do out[k0++] = vmin; while (k0 <= kminus);
        if (k0 >= n) return out;
        k = kminus = k0;
        vmin = v[k];
        umin = lambda;
        umax = vmin + umin - vmax;
      } else if (umax > 0.0) {
        do out[k0++] = vmax; while (k0 <= kplus);
        if (k0 >= n) return out;
        k = kplus = k0;
        vmax = v[k];
        umax = -lambda;
        umin = vmax + umax - vmin;
      } else {
        vmin += umin / static_cast<double>(k - k0 + 1);
        do out[k0++] = vmin; while (k0 <= k);
        return out;
      }
    }
    umin += v[k + 1] - vmin;
    if (umin < -lambda) {
      do out[k0++] = vmin; while (k0 <= kminus);
      k = kminus = kplus = k0;
      vmin = v[k];
      vmax = vmin + two_lambda;
      umin = lambda;
      umax = -lambda;
      continue;
    }
    umax += v[k + 1] - vmax;
    if (umax > lambda) {
      do out[k0++] = vmax; while (k0 <= kplus);
      k = kminus = kplus = k0;
      vmax = v[k];
      vmin = vmax - two_lambda;
      umin = lambda;
      umax = -lambda;
      continue;
    }
    ++k;
    if (umin >= lambda) {
      kminus = k;
      vmin += (umin - lambda) / static_cast<double>(kminus - k0 + 1);
      umin = lambda;
    }
    if (umax <= -lambda) {
      kplus = k;
      vmax += (umax + lambda) / static_cast<double>(kplus - k0 + 1);
      umax = -lambda;
    }
  }
}

VectorXd ProjectTvBall(const Eigen::Ref<const VectorXd>& v, double radius) {
  if (!(radius >= 0.0)) {
    throw ConfigError(fmt::format("TV radius must be nonnegative, got {}", radius));
  }
  const Index n = v.size();
  const double tv0 = TotalVariation(v);
  if (tv0 <= radius) return v;

  const double mean = v.mean();
  if (radius == 0.0) return VectorXd::Constant(n, mean);

  // For lambda above the largest centred partial sum the prox is constant.
  double hi = 0.0;
  double partial = 0.0;
  for (Index i = 0; i + 1 < n; ++i) {
    partial += v[i] - mean;
    hi = std::max(hi, std::abs(partial));
  }
  double lo = 0.0;
  double tv_lo = tv0;
  double tv_hi = 0.0;
  VectorXd best = VectorXd::Constant(n, mean);
  const double tol = BisectionTolerance(radius);

  for (int it = 0; it < kMaxBisections; ++it) {
    if (radius - tv_hi <= tol || hi - lo <= 1e-16 * hi) break;
    // The TV curve is piecewise linear in lambda; try the secant point first
    // and fall back to the midpoint when it does not shrink the bracket much.
    double mid = lo + (tv_lo - radius) / (tv_lo - tv_hi) * (hi - lo);
    if (!(mid > lo && mid < hi) || it % 2 == 1) mid = 0.5 * (lo + hi);
    VectorXd u = TvProx(v, mid);
    const double t = TotalVariation(u);
    if (WithinRadius(t, radius)) {
      hi = mid;
      tv_hi = t;
      best = std::move(u);
    } else {
      lo = mid;
      tv_lo = t;
    }
  }
  return best;
}

GroupPartition FindGroups(const VectorXd& v) {
  GroupPartition partition;
  const Index n = v.size();
  Index i = 0;
  while (i < n) {
    if (v[i] == 0.0) {
      ++i;
      continue;
    }
    Index j = i;
    while (j < n && v[j] != 0.0) ++j;
    partition.groups.push_back(Group{i, j - i});
    i = j;
  }
  return partition;
}

VectorXd ProjectSEps(const VectorXd& v, double epsilon) {
  if (!(epsilon >= 0.0)) {
    throw ConfigError(fmt::format("epsilon must be nonnegative, got {}", epsilon));
  }
  VectorXd out = VectorXd::Zero(v.size());
  for (const Group& g : FindGroups(v).groups) {
    if (g.length == 1) {
      out[g.start] = v[g.start];
      continue;
    }
    const double radius = epsilon * static_cast<double>(g.length - 1);
    out.segment(g.start, g.length) =
        ProjectTvBall(v.segment(g.start, g.length), radius);
  }
  return out;
}

bool InSEps(const VectorXd& v, double epsilon, double tol) {
  for (const Group& g : FindGroups(v).groups) {
    if (g.length == 1) continue;
    const double radius = epsilon * static_cast<double>(g.length - 1);
    if (TotalVariation(v.segment(g.start, g.length)) >
        radius * (1.0 + tol) + 1e-10) {
      return false;
    }
  }
  return true;
}

VectorXd ProjectNonneg(const VectorXd& v) { return v.cwiseMax(0.0); }

}  // namespace onebit
