#include "kts/clustering.hpp"

#include <limits>
#include <string>

#include "kts/rng.hpp"

namespace kts {

namespace {

void check_points(const std::vector<SpdMatrix>& points) {
  if (points.empty()) throw EmptyInput("clustering: empty point set");
  const int d = points.front().dim();
  for (const SpdMatrix& p : points) {
    if (p.dim() != d) {
      throw DimensionMismatch("clustering: points of dim " + std::to_string(d) + " and " +
                              std::to_string(p.dim()) + " mixed");
    }
  }
}

/// Distances from every point to one center.
std::vector<double> distances_to(const std::vector<SpdMatrix>& points, const SpdMatrix& center) {
  const PoleCache cache(center);
  std::vector<double> d(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) d[i] = cache.distance(points[i]);
  return d;
}

}  // namespace

std::vector<SpdMatrix> kmeans_pp_init(const std::vector<SpdMatrix>& points, int k,
                                      std::uint64_t seed) {
  check_points(points);
  const std::size_t n = points.size();
  if (k < 1) throw Error("E_BAD_ARGUMENT", "kmeans_pp_init: k must be >= 1");
  if (static_cast<std::size_t>(k) > n) {
    throw KTooLarge("kmeans_pp_init: k=" + std::to_string(k) + " exceeds " + std::to_string(n) +
                    " points");
  }

  Rng rng(seed);
  std::vector<SpdMatrix> centers;
  centers.reserve(k);
  std::vector<bool> chosen(n, false);

  const std::size_t first =
      static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(n) - 1));
  centers.push_back(points[first]);
  chosen[first] = true;

  // Squared distance to the nearest chosen center, updated incrementally.
  std::vector<double> d2(n, std::numeric_limits<double>::infinity());
  while (centers.size() < static_cast<std::size_t>(k)) {
    const std::vector<double> d = distances_to(points, centers.back());
    for (std::size_t i = 0; i < n; ++i) d2[i] = std::min(d2[i], d[i] * d[i]);

    std::size_t next = rng.categorical(d2);
    if (next >= n) {
      // Every remaining point coincides with a chosen center; take the
      // lowest unchosen index so k centers are always produced.
      next = 0;
      while (next < n && chosen[next]) ++next;
    }
    centers.push_back(points[next]);
    chosen[next] = true;
  }
  return centers;
}

Clustering lloyd_iterate(const std::vector<SpdMatrix>& points, std::vector<SpdMatrix> centers,
                         int max_rounds) {
  check_points(points);
  if (centers.empty()) throw EmptyInput("lloyd_iterate: no initial centers");
  if (max_rounds < 1) throw Error("E_BAD_ARGUMENT", "lloyd_iterate: max_rounds must be >= 1");
  const std::size_t n = points.size();
  const std::size_t k = centers.size();
  if (k > n) {
    throw KTooLarge("lloyd_iterate: more centers than points");
  }

  Clustering result;
  std::vector<std::vector<double>> dist(k);  // dist[c][i]

  // One assignment pass: nearest center per point, ties to the lowest index.
  // An empty cluster is reseeded at the point farthest from its stale center
  // and the pass redone (bumping inertia for this pass is acceptable; the
  // reseeded center gains a zero-distance member). Reseeds are budgeted:
  // with exactly duplicated centers the tie-break can starve the reseeded
  // one indefinitely, in which case a member is transferred outright from a
  // cluster that can spare one — a point at zero distance from both centers,
  // so "nearest center" still holds up to ties.
  auto assign_pass = [&](std::vector<int>& assign) -> double {
    std::vector<int> members(k, 0);
    int reseed_budget = static_cast<int>(k);
    for (;;) {
      for (std::size_t c = 0; c < k; ++c) dist[c] = distances_to(points, centers[c]);
      members.assign(k, 0);
      for (std::size_t i = 0; i < n; ++i) {
        int best = 0;
        double best_d = dist[0][i];
        for (std::size_t c = 1; c < k; ++c) {
          if (dist[c][i] < best_d) {
            best_d = dist[c][i];
            best = static_cast<int>(c);
          }
        }
        assign[i] = best;
        ++members[best];
      }
      std::size_t empty = k;
      for (std::size_t c = 0; c < k; ++c) {
        if (members[c] == 0) {
          empty = c;
          break;
        }
      }
      if (empty == k) break;
      if (reseed_budget-- > 0) {
        std::size_t far = 0;
        for (std::size_t i = 1; i < n; ++i) {
          if (dist[empty][i] > dist[empty][far]) far = i;
        }
        centers[empty] = points[far];
        continue;
      }
      // Budget exhausted: transfer, for each empty cluster, the farthest
      // point that belongs to a cluster with at least two members. Such a
      // donor always exists while n >= k.
      for (std::size_t c = 0; c < k; ++c) {
        if (members[c] != 0) continue;
        std::size_t pick = n;
        for (std::size_t i = 0; i < n; ++i) {
          if (members[assign[i]] < 2) continue;
          if (pick == n || dist[c][i] > dist[c][pick]) pick = i;
        }
        --members[assign[pick]];
        assign[pick] = static_cast<int>(c);
        ++members[c];
      }
      break;
    }
    double inertia = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double d = dist[assign[i]][i];
      inertia += d * d;
    }
    return inertia;
  };

  std::vector<int> assign(n, 0);
  double inertia = assign_pass(assign);
  result.round_inertia.push_back(inertia);

  for (int round = 0; round < max_rounds; ++round) {
    // Center update: Karcher mean of each cluster's members. If the mean
    // iteration fails to converge the stale center is kept (best so far).
    for (std::size_t c = 0; c < k; ++c) {
      std::vector<SpdMatrix> cluster;
      for (std::size_t i = 0; i < n; ++i) {
        if (assign[i] == static_cast<int>(c)) cluster.push_back(points[i]);
      }
      try {
        centers[c] = karcher_mean(cluster);
      } catch (const NonConvergence&) {
      }
    }

    std::vector<int> next(n, 0);
    inertia = assign_pass(next);
    result.round_inertia.push_back(inertia);
    const bool stable = next == assign;
    assign = std::move(next);
    if (stable) {
      result.converged = true;
      break;
    }
  }

  result.centers = std::move(centers);
  result.assignments = std::move(assign);
  result.inertia = inertia;
  result.counts.assign(k, 0);
  for (std::size_t i = 0; i < n; ++i) ++result.counts[result.assignments[i]];
  return result;
}

Clustering geodesic_kmeans(const std::vector<SpdMatrix>& points, int k, std::uint64_t seed,
                           int max_rounds) {
  return lloyd_iterate(points, kmeans_pp_init(points, k, seed), max_rounds);
}

}  // namespace kts
