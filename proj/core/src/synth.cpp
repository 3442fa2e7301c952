#include "mkf/synth.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "mkf/errors.hpp"
#include "mkf/init.hpp"

namespace mkf {

void SynthParams::validate() const {
  if (K < 1) throw InvalidParams("K must be >= 1");
  if (static_cast<int>(dims.size()) != K)
    throw InvalidParams("dims must list K dimensions");
  for (int d : dims) {
    if (d < 1 || d >= D) throw InvalidParams("each dim must satisfy 1 <= d < D");
  }
  if (D < 2) throw InvalidParams("D must be >= 2");
  if (n_per < 1) throw InvalidParams("n_per must be >= 1");
  if (noise_std < 0) throw InvalidParams("noise_std must be >= 0");
  if (outlier_frac < 0 || outlier_frac >= 1)
    throw InvalidParams("outlier_frac must be in [0,1)");
}

LabeledDataset generate_hlm(const SynthParams& params) {
  params.validate();
  std::mt19937_64 rng(params.seed);
  std::uniform_real_distribution<double> cube(-1.0, 1.0);
  std::normal_distribution<double> gauss;

  LabeledDataset data;
  data.params = params;

  const long n_in = static_cast<long>(params.K) * params.n_per;
  const double p = params.outlier_frac;
  const long n_out = std::lround(p / (1.0 - p) * static_cast<double>(n_in));

  data.cloud.points.resize(n_in + n_out, params.D);
  data.truth.resize(n_in + n_out);

  long row = 0;
  for (int i = 0; i < params.K; ++i) {
    const int d = params.dims[i];
    const SubspaceBasis basis = random_basis(d, params.D, rng);
    // Per-coordinate noise std in the orthogonal complement. This is an
    // absolute level, not scaled by the cube size: scaling with the cube
    // diameter would swamp the inter-subspace gaps in high dimension and no
    // assignment rule (not even the generating subspaces) could cluster the
    // result.
    const double sigma = params.noise_std;
    for (int s = 0; s < params.n_per; ++s) {
      Eigen::VectorXd coords(d);
      for (int t = 0; t < d; ++t) coords[t] = cube(rng);
      Eigen::VectorXd point = basis.rows.transpose() * coords;
      if (sigma > 0) {
        Eigen::VectorXd noise(params.D);
        for (int t = 0; t < params.D; ++t) noise[t] = sigma * gauss(rng);
        // Keep only the orthogonal-complement component.
        noise -= basis.rows.transpose() * (basis.rows * noise);
        point += noise;
      }
      data.cloud.points.row(row) = point.transpose();
      data.truth[row] = i + 1;
      ++row;
    }
    data.generating_bases.push_back(basis);
  }

  double radius = 0.0;
  for (long j = 0; j < n_in; ++j) {
    radius = std::max(radius, data.cloud.points.row(j).norm());
  }
  std::uniform_real_distribution<double> out_cube(-radius, radius);
  for (long s = 0; s < n_out; ++s) {
    for (int t = 0; t < params.D; ++t) {
      data.cloud.points(row, t) = out_cube(rng);
    }
    data.truth[row] = kOutlierLabel;
    ++row;
  }
  return data;
}

}  // namespace mkf
