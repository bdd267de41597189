#pragma once

#include <cstdint>
#include <vector>

#include "kts/geometry.hpp"
#include "kts/spd.hpp"

namespace kts {

/// Result of geodesic k-means: K centers (Karcher means), member counts,
/// per-point assignments, and the sum of squared geodesic distances to the
/// assigned centers. `round_inertia` records the inertia after every
/// assignment pass, so Lloyd monotonicity is checkable from the outside.
struct Clustering {
  std::vector<SpdMatrix> centers;
  std::vector<int> counts;
  std::vector<int> assignments;
  double inertia = 0.0;
  bool converged = false;
  std::vector<double> round_inertia;
};

/// k-means++ seeding under the geodesic distance: the first center is chosen
/// uniformly, each subsequent one with probability proportional to the
/// squared distance to the nearest center chosen so far. Deterministic per
/// seed. Throws KTooLarge when k exceeds the number of points.
std::vector<SpdMatrix> kmeans_pp_init(const std::vector<SpdMatrix>& points, int k,
                                      std::uint64_t seed);

/// Lloyd iteration from explicit initial centers: assign each point to its
/// nearest center (ties to the lowest index), recompute each center as the
/// Karcher mean of its members, stop when assignments are unchanged or after
/// max_rounds (converged=false in the latter case). A cluster that loses all
/// members is reseeded at the point farthest from its current center.
Clustering lloyd_iterate(const std::vector<SpdMatrix>& points,
                         std::vector<SpdMatrix> centers, int max_rounds = 100);

/// Geodesic k-means: kmeans_pp_init followed by lloyd_iterate.
Clustering geodesic_kmeans(const std::vector<SpdMatrix>& points, int k, std::uint64_t seed,
                           int max_rounds = 100);

}  // namespace kts
