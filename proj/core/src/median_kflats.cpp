#include "mkf/median_kflats.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "mkf/errors.hpp"
#include "mkf/init.hpp"

namespace mkf {

void FitConfig::validate() const {
  if (dt <= 0) throw InvalidParams("dt must be positive");
  if (check_interval < 1) throw InvalidParams("check_interval must be >= 1");
  if (!(band_lo < 1.0 && 1.0 < band_hi))
    throw InvalidParams("convergence band must contain 1");
  if (max_iters < check_interval)
    throw InvalidParams("max_iters must be >= check_interval");
}

Eigen::MatrixXd residual_gradient(const SubspaceBasis& basis,
                                  const Eigen::VectorXd& x) {
  const Eigen::VectorXd proj = basis.rows * x;          // P x
  const Eigen::VectorXd ortho = x - basis.rows.transpose() * proj;
  const double res = ortho.norm();
  // Rank-1 form: P x x^T - P x x^T P^T P = (P x)(x - P^T P x)^T.
  return -(proj * ortho.transpose()) / res;
}

double l1_energy(const PointCloud& cloud, const std::vector<int>& labels,
                 const std::vector<SubspaceBasis>& bases) {
  double total = 0.0;
  for (long j = 0; j < cloud.size(); ++j) {
    total += residual(cloud.points.row(j), bases[labels[j] - 1]);
  }
  return total;
}

double l2_energy(const PointCloud& cloud, const std::vector<int>& labels,
                 const std::vector<SubspaceBasis>& bases) {
  double total = 0.0;
  for (long j = 0; j < cloud.size(); ++j) {
    const double r = residual(cloud.points.row(j), bases[labels[j] - 1]);
    total += r * r;
  }
  return total;
}

std::vector<int> assign_labels(const PointCloud& cloud,
                               const std::vector<SubspaceBasis>& bases) {
  std::vector<int> labels(cloud.size());
  for (long j = 0; j < cloud.size(); ++j) {
    labels[j] = nearest_subspace(cloud.points.row(j), bases) + 1;
  }
  return labels;
}

int sgd_step(ModelState& state, const Eigen::VectorXd& x) {
  ++state.iters_done;
  const int chosen = nearest_subspace(x, state.bases);
  SubspaceBasis& basis = state.bases[chosen];
  if (residual(x, basis) < state.config.sing_floor) {
    return chosen;  // point already on the flat; 0/0 gradient limit
  }
  const Eigen::MatrixXd step = residual_gradient(basis, x);
  basis = orthonormalize(basis.rows - state.config.dt * step);
  return chosen;
}

namespace {

// Checkpoint ratio falls in the open band; two exactly-zero energies count
// as converged (ratio taken as 1).
bool in_band(double prev, double cur, const FitConfig& cfg) {
  if (prev <= 0.0) return cur <= 0.0;
  const double ratio = cur / prev;
  return ratio > cfg.band_lo && ratio < cfg.band_hi;
}

}  // namespace

std::pair<ModelState, FitReport> mkf_fit(const PointCloud& cloud, int K, int d,
                                         const FitConfig& config,
                                         std::vector<SubspaceBasis> init) {
  config.validate();
  if (!cloud.normalized)
    throw InvalidParams("mkf_fit requires a sphere-normalized cloud");
  if (cloud.size() < static_cast<long>(K) * d)
    throw InsufficientData("need at least K*d = " + std::to_string(K * d) +
                           " points, got " + std::to_string(cloud.size()));
  if (static_cast<int>(init.size()) != K)
    throw InvalidParams("expected K initial bases");

  ModelState state;
  state.bases = std::move(init);
  state.config = config;
  state.rng.seed(config.rng_seed);

  const long n = cloud.size();
  std::uniform_int_distribution<long> pick(0, n - 1);

  double prev_energy =
      l1_energy(cloud, assign_labels(cloud, state.bases), state.bases);
  state.energy_history.emplace_back(0, prev_energy);

  bool converged = false;
  while (state.iters_done < config.max_iters) {
    const Eigen::VectorXd x = cloud.points.row(pick(state.rng));
    try {
      sgd_step(state, x);
    } catch (const RankDeficient&) {
      const int chosen = nearest_subspace(x, state.bases);
      state.bases[chosen] = random_basis(d, cloud.ambient(), state.rng);
    }
    if (state.iters_done % config.check_interval == 0) {
      const double cur =
          l1_energy(cloud, assign_labels(cloud, state.bases), state.bases);
      state.energy_history.emplace_back(state.iters_done, cur);
      if (in_band(prev_energy, cur, config)) {
        converged = true;
        break;
      }
      prev_energy = cur;
    }
  }

  FitReport report;
  report.labels = assign_labels(cloud, state.bases);
  report.l1_energy = l1_energy(cloud, report.labels, state.bases);
  report.l2_energy = l2_energy(cloud, report.labels, state.bases);
  report.iters = state.iters_done;
  report.converged = converged;
  return {std::move(state), std::move(report)};
}

OnlineSession make_online_session(int K, int d, int D,
                                  const FitConfig& config) {
  config.validate();
  OnlineSession session;
  session.state.config = config;
  session.state.rng.seed(config.rng_seed);
  session.state.bases = random_init(K, d, D, session.state.rng);
  session.snapshot = session.state.bases;
  return session;
}

int mkf_feed(OnlineSession& session, const Eigen::VectorXd& raw) {
  const double norm = raw.norm();
  if (norm < 1e-12) throw ZeroVector(session.feeds);
  const Eigen::VectorXd x = raw / norm;

  int chosen;
  try {
    chosen = sgd_step(session.state, x);
  } catch (const RankDeficient&) {
    chosen = nearest_subspace(x, session.state.bases);
    session.state.bases[chosen] = random_basis(
        session.state.bases[chosen].dim(), x.size(), session.state.rng);
  }
  ++session.feeds;

  if (session.feeds % session.state.config.check_interval == 0) {
    double drift = 0.0;
    for (size_t i = 0; i < session.state.bases.size(); ++i) {
      drift += sum_sq_sines(session.snapshot[i], session.state.bases[i]);
    }
    session.last_drift = drift;
    session.stop_suggested = drift < 1e-6;
    session.snapshot = session.state.bases;
  }
  return chosen + 1;
}

std::vector<SubspaceBasis> make_init(const PointCloud& cloud, int K, int d,
                                     InitMode mode, std::uint64_t seed) {
  // Separate stream from the sampling RNG of the fit itself.
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  if (mode == InitMode::Random) {
    return random_init(K, d, cloud.ambient(), rng);
  }
  return farthest_insertion_init(cloud, K, d, rng);
}

std::uint64_t restart_seed(std::uint64_t base, int r) {
  return base + static_cast<std::uint64_t>(r) * 0x9e3779b97f4a7c15ULL;
}

FitReport run_with_restarts(const PointCloud& cloud, int K, int d,
                            const FitConfig& config, int n_restarts,
                            InitMode init_mode, Selection selection,
                            RestartTrace* trace) {
  if (n_restarts < 1) throw InvalidParams("n_restarts must be >= 1");

  FitReport best;
  double best_energy = std::numeric_limits<double>::infinity();
  for (int r = 0; r < n_restarts; ++r) {
    FitConfig cfg = config;
    cfg.rng_seed = restart_seed(config.rng_seed, r);
    auto init = make_init(cloud, K, d, init_mode, cfg.rng_seed);
    auto [state, report] = mkf_fit(cloud, K, d, cfg, std::move(init));
    if (trace) {
      trace->iters.push_back(report.iters);
      trace->converged.push_back(report.converged);
      trace->l1.push_back(report.l1_energy);
      trace->l2.push_back(report.l2_energy);
    }
    const double selected =
        selection == Selection::L1 ? report.l1_energy : report.l2_energy;
    if (selected < best_energy) {
      best_energy = selected;
      best = std::move(report);
    }
  }
  return best;
}

}  // namespace mkf
