#pragma once

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "mkf/geometry.hpp"

namespace mkf {

struct FitConfig {
  double dt = 0.01;
  int check_interval = 1000;
  double band_lo = 0.999;
  double band_hi = 1.001;
  long max_iters = 100000;
  std::uint64_t rng_seed = 0;
  double sing_floor = 1e-8;

  void validate() const;  // throws InvalidParams
};

struct ModelState {
  std::vector<SubspaceBasis> bases;
  long iters_done = 0;
  std::vector<std::pair<long, double>> energy_history;
  FitConfig config;
  std::mt19937_64 rng;
};

struct FitReport {
  std::vector<int> labels;  // 1..K
  double l1_energy = 0.0;
  double l2_energy = 0.0;
  long iters = 0;
  bool converged = false;
};

// Per-restart diagnostics from run_with_restarts.
struct RestartTrace {
  std::vector<long> iters;
  std::vector<bool> converged;
  std::vector<double> l1;
  std::vector<double> l2;
};

enum class InitMode { Random, FarthestInsertion };
enum class Selection { L1, L2 };

// Negative gradient component orthogonal to the row space:
//   d_x P = -(P x x^T - P x x^T P^T P) / sqrt(1 - |Px|^2).
// Precondition: residual(x, basis) > 0.
Eigen::MatrixXd residual_gradient(const SubspaceBasis& basis,
                                  const Eigen::VectorXd& x);

// Sum over points of the (unsquared) distance to the assigned subspace.
double l1_energy(const PointCloud& cloud, const std::vector<int>& labels,
                 const std::vector<SubspaceBasis>& bases);

// Same with squared distances.
double l2_energy(const PointCloud& cloud, const std::vector<int>& labels,
                 const std::vector<SubspaceBasis>& bases);

// Assigns every point to its nearest subspace; labels in 1..K.
std::vector<int> assign_labels(const PointCloud& cloud,
                               const std::vector<SubspaceBasis>& bases);

// One stochastic gradient step at unit vector x. Picks the nearest basis,
// moves it against the gradient and re-orthonormalizes. Points already on
// their flat (residual < sing_floor) are skipped. Returns the chosen basis
// index. Always increments iters_done; propagates RankDeficient.
int sgd_step(ModelState& state, const Eigen::VectorXd& x);

// Algorithm: sample points with replacement, apply sgd_step, check the l1
// energy every check_interval iterations, stop when the ratio of consecutive
// checkpoint energies falls inside the open band or max_iters is reached.
std::pair<ModelState, FitReport> mkf_fit(const PointCloud& cloud, int K, int d,
                                         const FitConfig& config,
                                         std::vector<SubspaceBasis> init);

// Streaming session: points arrive one at a time through feed(). Every
// check_interval feeds the bases are snapshotted and the total sum of
// squared sines of principal angles against the previous snapshot is
// evaluated; drift below 1e-6 raises stop_suggested.
struct OnlineSession {
  ModelState state;
  std::vector<SubspaceBasis> snapshot;
  long feeds = 0;
  double last_drift = -1.0;
  bool stop_suggested = false;
};

OnlineSession make_online_session(int K, int d, int D, const FitConfig& config);

// Normalizes x, applies one sgd_step, returns the assigned flat index (1..K).
int mkf_feed(OnlineSession& session, const Eigen::VectorXd& raw);

// Builds K initial bases from the cloud per the requested mode.
std::vector<SubspaceBasis> make_init(const PointCloud& cloud, int K, int d,
                                     InitMode mode, std::uint64_t seed);

// Runs mkf_fit n_restarts times with derived seeds and fresh initializations;
// returns the report with minimal selected energy. Restart 0 reuses
// config.rng_seed unchanged.
FitReport run_with_restarts(const PointCloud& cloud, int K, int d,
                            const FitConfig& config, int n_restarts,
                            InitMode init_mode, Selection selection,
                            RestartTrace* trace = nullptr);

// Seed for restart r; restart 0 maps to the base seed itself.
std::uint64_t restart_seed(std::uint64_t base, int r);

}  // namespace mkf
