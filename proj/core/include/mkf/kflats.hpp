#pragma once

#include <cstdint>
#include <vector>

#include "mkf/median_kflats.hpp"

namespace mkf {

// Per-round l2 energies, recorded after each refit+assign round.
struct KFlatsTrace {
  std::vector<double> l2_per_round;
  int rounds = 0;
};

// Classical l2 K-flats for linear subspaces: alternate nearest-subspace
// assignment and PCA refit until the labels stop changing or max_rounds.
// Empty clusters get their basis re-seeded from the worst-fit point.
FitReport kflats_fit(const PointCloud& cloud, int K, int d,
                     std::vector<SubspaceBasis> init, int max_rounds = 300,
                     KFlatsTrace* trace = nullptr);

// Restarted K-flats, best run selected by l2 energy.
FitReport kflats_with_restarts(const PointCloud& cloud, int K, int d,
                               int n_restarts, InitMode init_mode,
                               std::uint64_t seed, int max_rounds = 300,
                               RestartTrace* trace = nullptr);

}  // namespace mkf
