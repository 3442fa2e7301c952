#include "mkf/eval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mkf/errors.hpp"
#include "mkf/synth.hpp"

namespace mkf {

std::vector<int> hungarian(const Eigen::MatrixXd& cost) {
  const int n = static_cast<int>(cost.rows());
  const double inf = std::numeric_limits<double>::infinity();

  // Potentials over 1-based rows/columns; match[j] = row matched to column j.
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<int> match(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    match[0] = i;
    int j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<char> used(n + 1, false);
    do {
      used[j0] = true;
      const int i0 = match[j0];
      double delta = inf;
      int j1 = 0;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[match[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (match[j0] != 0);
    do {
      const int j1 = way[j0];
      match[j0] = match[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  std::vector<int> assignment(n);
  for (int j = 1; j <= n; ++j) assignment[match[j] - 1] = j - 1;
  return assignment;
}

double misclassification_rate(const std::vector<int>& pred,
                              const std::vector<int>& truth) {
  if (pred.size() != truth.size())
    throw InvalidParams("pred/truth length mismatch");

  int k = 0;
  long inliers = 0;
  for (size_t j = 0; j < truth.size(); ++j) {
    k = std::max({k, pred[j], truth[j]});
    if (truth[j] != kOutlierLabel) ++inliers;
  }
  if (inliers == 0) throw NoInliers();

  // matches(p, t): inliers predicted p with truth t; maximize total matches
  // over bijections p -> t, i.e. minimize negated counts.
  Eigen::MatrixXd cost = Eigen::MatrixXd::Zero(k, k);
  for (size_t j = 0; j < truth.size(); ++j) {
    if (truth[j] == kOutlierLabel) continue;
    cost(pred[j] - 1, truth[j] - 1) -= 1.0;
  }
  const std::vector<int> assignment = hungarian(cost);

  long matched = 0;
  for (size_t j = 0; j < truth.size(); ++j) {
    if (truth[j] == kOutlierLabel) continue;
    if (assignment[pred[j] - 1] == truth[j] - 1) ++matched;
  }
  return static_cast<double>(inliers - matched) /
         static_cast<double>(inliers);
}

TrialStats aggregate(const std::vector<double>& error_rates,
                     const std::vector<double>& runtimes) {
  if (error_rates.empty()) throw EmptyTrials();
  const size_t n = error_rates.size();

  TrialStats stats;
  double sum = 0.0;
  for (double e : error_rates) sum += e;
  stats.mean = sum / static_cast<double>(n);

  std::vector<double> sorted = error_rates;
  std::sort(sorted.begin(), sorted.end());
  stats.median = (n % 2 == 1)
                     ? sorted[n / 2]
                     : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);

  if (n > 1) {
    double ss = 0.0;
    for (double e : error_rates) ss += (e - stats.mean) * (e - stats.mean);
    stats.stddev = std::sqrt(ss / static_cast<double>(n - 1));
  }

  if (!runtimes.empty()) {
    double rt = 0.0;
    for (double r : runtimes) rt += r;
    stats.mean_runtime = rt / static_cast<double>(runtimes.size());
  }
  return stats;
}

}  // namespace mkf
