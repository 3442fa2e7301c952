#pragma once

#include <random>
#include <vector>

#include "mkf/geometry.hpp"

namespace mkf {

// Haar-distributed random d-subspace of R^D (orthonormalized Gaussian rows).
SubspaceBasis random_basis(int d, int D, std::mt19937_64& rng);

// K independent Haar-random bases.
std::vector<SubspaceBasis> random_init(int K, int d, int D,
                                       std::mt19937_64& rng);

// Farthest insertion: seed each flat at the point worst served by the
// existing flats, grow its neighborhood until the difference set reaches
// numerical rank d, and take the top-d un-centered PCA subspace of the
// neighborhood. rank_tol is relative to the largest singular value.
std::vector<SubspaceBasis> farthest_insertion_init(const PointCloud& cloud,
                                                   int K, int d,
                                                   std::mt19937_64& rng,
                                                   double rank_tol = 1e-6);

}  // namespace mkf
