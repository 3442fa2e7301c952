#include "mkf/kflats.hpp"

#include <limits>
#include <string>

#include "mkf/errors.hpp"
#include "mkf/init.hpp"

namespace mkf {

namespace {

// Deterministic basis re-seed for an empty cluster: the worst-fit point's
// direction completed with rows of the old basis (dropping any that become
// dependent, padded from the identity if necessary).
SubspaceBasis reseed_from_point(const Eigen::VectorXd& x,
                                const SubspaceBasis& old) {
  const int d = old.dim();
  const int D = old.ambient();
  Eigen::MatrixXd cand(d + 1 + D, D);
  cand.row(0) = x.transpose();
  cand.middleRows(1, d) = old.rows;
  cand.bottomRows(D).setIdentity();

  Eigen::MatrixXd picked(d, D);
  int have = 0;
  for (int i = 0; i < cand.rows() && have < d; ++i) {
    Eigen::VectorXd v = cand.row(i).transpose();
    for (int j = 0; j < have; ++j) {
      v -= picked.row(j).dot(v) * picked.row(j).transpose();
    }
    const double n = v.norm();
    if (n > 1e-8) {
      picked.row(have++) = v.transpose() / n;
    }
  }
  return SubspaceBasis{picked};
}

}  // namespace

FitReport kflats_fit(const PointCloud& cloud, int K, int d,
                     std::vector<SubspaceBasis> init, int max_rounds,
                     KFlatsTrace* trace) {
  const long n = cloud.size();
  if (n < static_cast<long>(K) * d)
    throw InsufficientData("need at least K*d = " + std::to_string(K * d) +
                           " points, got " + std::to_string(n));
  if (static_cast<int>(init.size()) != K)
    throw InvalidParams("expected K initial bases");

  std::vector<SubspaceBasis> bases = std::move(init);
  std::vector<int> labels = assign_labels(cloud, bases);
  bool stable = false;
  int round = 0;
  for (; round < max_rounds; ++round) {
    // Refit each non-empty cluster by un-centered PCA.
    for (int i = 0; i < K; ++i) {
      long count = 0;
      for (long j = 0; j < n; ++j) {
        if (labels[j] == i + 1) ++count;
      }
      if (count == 0) {
        // Re-seed toward the worst-fit point. Its cluster stays assigned
        // elsewhere this round, so the energy is unaffected.
        long worst = 0;
        double worst_res = -1.0;
        for (long j = 0; j < n; ++j) {
          const double r = residual(cloud.points.row(j), bases[labels[j] - 1]);
          if (r > worst_res) {
            worst_res = r;
            worst = j;
          }
        }
        bases[i] = reseed_from_point(cloud.points.row(worst), bases[i]);
        continue;
      }
      Eigen::MatrixXd subset(count, cloud.ambient());
      long t = 0;
      for (long j = 0; j < n; ++j) {
        if (labels[j] == i + 1) subset.row(t++) = cloud.points.row(j);
      }
      try {
        bases[i] = best_l2_subspace(subset, d);
      } catch (const RankDeficient&) {
        // cluster too thin to span d dimensions; keep the old basis
      }
    }

    std::vector<int> next = assign_labels(cloud, bases);
    if (trace) trace->l2_per_round.push_back(l2_energy(cloud, next, bases));
    if (next == labels) {
      stable = true;
      labels = std::move(next);
      ++round;
      break;
    }
    labels = std::move(next);
  }
  if (trace) trace->rounds = round;

  FitReport report;
  report.labels = std::move(labels);
  report.l1_energy = l1_energy(cloud, report.labels, bases);
  report.l2_energy = l2_energy(cloud, report.labels, bases);
  report.iters = round;
  report.converged = stable;
  return report;
}

FitReport kflats_with_restarts(const PointCloud& cloud, int K, int d,
                               int n_restarts, InitMode init_mode,
                               std::uint64_t seed, int max_rounds,
                               RestartTrace* trace) {
  if (n_restarts < 1) throw InvalidParams("n_restarts must be >= 1");
  FitReport best;
  double best_energy = std::numeric_limits<double>::infinity();
  for (int r = 0; r < n_restarts; ++r) {
    auto init = make_init(cloud, K, d, init_mode, restart_seed(seed, r));
    FitReport report = kflats_fit(cloud, K, d, std::move(init), max_rounds);
    if (trace) {
      trace->iters.push_back(report.iters);
      trace->converged.push_back(report.converged);
      trace->l1.push_back(report.l1_energy);
      trace->l2.push_back(report.l2_energy);
    }
    if (report.l2_energy < best_energy) {
      best_energy = report.l2_energy;
      best = std::move(report);
    }
  }
  return best;
}

}  // namespace mkf
