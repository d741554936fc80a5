#pragma once

#include <vector>

#include "onebit/model.h"

namespace onebit {

// A maximal run of consecutive nonzero entries. `start` is 0-based.
struct Group {
  Index start = 0;
  Index length = 0;

  Index end() const { return start + length; }
  bool operator==(const Group&) const = default;
};

// Maximal nonzero runs of a vector in increasing index order.
struct GroupPartition {
  std::vector<Group> groups;

  Index count() const { return static_cast<Index>(groups.size()); }
};

// Best K-term approximation: keeps the K largest-magnitude entries and zeros
// the rest. Equal magnitudes are resolved in favour of the lower index.
// Throws ConfigError if k > v.size() or k < 0.
VectorXd HardThreshold(const VectorXd& v, Index k);

// Sum of absolute consecutive differences; 0 for vectors of length <= 1.
double TotalVariation(const Eigen::Ref<const VectorXd>& v);

// Exact proximal operator of lambda * TV on a 1-D signal, i.e.
// argmin_u 0.5 ||u - v||^2 + lambda * TV(u).
VectorXd TvProx(const Eigen::Ref<const VectorXd>& v, double lambda);

// Euclidean projection onto {u : TV(u) <= radius}.
//
// Computed by bisection on the multiplier lambda of TvProx; the map
// lambda -> TV(TvProx(v, lambda)) is nonincreasing and piecewise linear.
// The result always satisfies TV(u) <= radius * (1 + 1e-8) + 1e-10.
// radius == 0 returns the constant vector at mean(v).
// Throws ConfigError for a negative radius.
VectorXd ProjectTvBall(const Eigen::Ref<const VectorXd>& v, double radius);

GroupPartition FindGroups(const VectorXd& v);

// Projection onto S_eps, the set of vectors whose every nonzero group G has
// TV(x_G) / (|G| - 1) <= epsilon. Each group of `v` is projected onto the TV
// ball of radius epsilon * (|G| - 1); entries outside the groups stay zero
// and single-sample groups pass through unchanged.
// Throws ConfigError for a negative epsilon.
VectorXd ProjectSEps(const VectorXd& v, double epsilon);

// True if every group of `v` satisfies the normalized-TV budget, allowing a
// relative slack `tol` on each group radius.
bool InSEps(const VectorXd& v, double epsilon, double tol = 1e-8);

// Element-wise max(v, 0).
VectorXd ProjectNonneg(const VectorXd& v);

}  // namespace onebit
