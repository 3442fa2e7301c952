#include "mkf/init.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <limits>
#include <numeric>
#include <string>

#include "mkf/errors.hpp"

namespace mkf {

SubspaceBasis random_basis(int d, int D, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss;
  while (true) {
    Eigen::MatrixXd m(d, D);
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j < D; ++j) m(i, j) = gauss(rng);
    }
    try {
      return orthonormalize(m);
    } catch (const RankDeficient&) {
      // measure-zero event; redraw
    }
  }
}

std::vector<SubspaceBasis> random_init(int K, int d, int D,
                                       std::mt19937_64& rng) {
  if (d >= D) throw InvalidParams("need d < D");
  std::vector<SubspaceBasis> bases;
  bases.reserve(K);
  for (int i = 0; i < K; ++i) bases.push_back(random_basis(d, D, rng));
  return bases;
}

namespace {

// Indices of the j nearest neighbors of point `center` (excluding itself),
// by Euclidean distance.
std::vector<long> nearest_neighbors(const Eigen::MatrixXd& points,
                                    long center) {
  const long n = points.rows();
  std::vector<long> order;
  order.reserve(n - 1);
  for (long i = 0; i < n; ++i) {
    if (i != center) order.push_back(i);
  }
  std::vector<double> dist(n);
  for (long i = 0; i < n; ++i) {
    dist[i] = (points.row(i) - points.row(center)).norm();
  }
  std::sort(order.begin(), order.end(),
            [&](long a, long b) { return dist[a] < dist[b]; });
  return order;
}

int numerical_rank(const Eigen::MatrixXd& m, double rel_tol) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv[0] <= 0) return 0;
  int rank = 0;
  for (long i = 0; i < sv.size(); ++i) {
    if (sv[i] > rel_tol * sv[0]) ++rank;
  }
  return rank;
}

}  // namespace

std::vector<SubspaceBasis> farthest_insertion_init(const PointCloud& cloud,
                                                   int K, int d,
                                                   std::mt19937_64& rng,
                                                   double rank_tol) {
  const long n = cloud.size();
  if (n < static_cast<long>(K) * (d + 1)) {
    throw InsufficientData("farthest insertion needs at least K*(d+1) points");
  }

  std::vector<SubspaceBasis> bases;
  bases.reserve(K);
  for (int i = 0; i < K; ++i) {
    long seed_idx;
    if (i == 0) {
      std::uniform_int_distribution<long> pick(0, n - 1);
      seed_idx = pick(rng);
    } else {
      // Farthest point: maximize the min residual over the existing flats.
      seed_idx = 0;
      double best = -1.0;
      for (long j = 0; j < n; ++j) {
        double min_res = std::numeric_limits<double>::infinity();
        const Eigen::VectorXd x = cloud.points.row(j).normalized();
        for (const auto& b : bases) min_res = std::min(min_res, residual(x, b));
        if (min_res > best) {
          best = min_res;
          seed_idx = j;
        }
      }
    }

    const auto neighbors = nearest_neighbors(cloud.points, seed_idx);

    // Smallest j with rank(span{jNN(x) - x}) = d.
    long j = 0;
    Eigen::MatrixXd diffs(0, cloud.ambient());
    while (true) {
      if (j >= static_cast<long>(neighbors.size())) {
        throw InitFailure("local dimension below " + std::to_string(d) +
                          " around point " + std::to_string(seed_idx));
      }
      diffs.conservativeResize(j + 1, Eigen::NoChange);
      diffs.row(j) =
          cloud.points.row(neighbors[j]) - cloud.points.row(seed_idx);
      ++j;
      if (j >= d && numerical_rank(diffs, rank_tol) == d) break;
    }

    // Top-d un-centered PCA subspace of the seed plus its neighborhood.
    Eigen::MatrixXd local(j + 1, cloud.ambient());
    local.row(0) = cloud.points.row(seed_idx);
    for (long t = 0; t < j; ++t) {
      local.row(t + 1) = cloud.points.row(neighbors[t]);
    }
    bases.push_back(best_l2_subspace(local, d));
  }
  return bases;
}

}  // namespace mkf
