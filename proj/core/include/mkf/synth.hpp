#pragma once

#include <cstdint>
#include <vector>

#include "mkf/geometry.hpp"

namespace mkf {

// Truth label for outlier points; clusters are 1..K.
constexpr int kOutlierLabel = 0;

struct SynthParams {
  int K = 0;
  std::vector<int> dims;  // d_1..d_K
  int D = 0;
  int n_per = 250;
  double noise_std = 0.05;
  double outlier_frac = 0.05;
  std::uint64_t seed = 0;

  void validate() const;  // throws InvalidParams
};

struct LabeledDataset {
  PointCloud cloud;  // raw, pre-normalization coordinates
  std::vector<int> truth;
  std::vector<SubspaceBasis> generating_bases;
  SynthParams params;
};

// Hybrid linear model sampler: K Haar-random subspaces, per subspace n_per
// points uniform in the in-subspace cube [-1,1]^d plus isotropic Gaussian
// noise (per-coordinate std noise_std) in the orthogonal complement, then
// round(p/(1-p) * K*n_per) outliers uniform in [-R,R]^D with R the maximal
// inlier norm.
LabeledDataset generate_hlm(const SynthParams& params);

}  // namespace mkf
