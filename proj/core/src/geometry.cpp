#include "mkf/geometry.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>

#include "mkf/errors.hpp"

namespace mkf {

namespace {
constexpr double kRankTol = 1e-10;
}

double SubspaceBasis::orthonormality_error() const {
  const Eigen::MatrixXd gram = rows * rows.transpose();
  return (gram - Eigen::MatrixXd::Identity(dim(), dim())).norm();
}

PointCloud normalize_to_sphere(const PointCloud& cloud) {
  PointCloud out;
  out.points = cloud.points;
  for (long i = 0; i < out.points.rows(); ++i) {
    const double n = out.points.row(i).norm();
    if (n < 1e-12) throw ZeroVector(i);
    out.points.row(i) /= n;
  }
  out.normalized = true;
  return out;
}

double residual(const Eigen::VectorXd& x, const SubspaceBasis& basis) {
  // |x - P^T P x| equals sqrt(1 - |Px|^2) for unit x but avoids the
  // cancellation that caps the latter's accuracy near the subspace at ~1e-8.
  const Eigen::VectorXd proj = basis.rows * x;
  const double r = (x - basis.rows.transpose() * proj).norm();
  return std::min(r, 1.0);
}

int nearest_subspace(const Eigen::VectorXd& x,
                     const std::vector<SubspaceBasis>& bases) {
  int best = 0;
  double best_proj = -1.0;
  for (int i = 0; i < static_cast<int>(bases.size()); ++i) {
    const double proj = (bases[i].rows * x).norm();
    if (proj > best_proj) {
      best_proj = proj;
      best = i;
    }
  }
  return best;
}

SubspaceBasis orthonormalize(const Eigen::MatrixXd& m) {
  const long d = m.rows();
  Eigen::MatrixXd q = m;
  for (long i = 0; i < d; ++i) {
    for (long j = 0; j < i; ++j) {
      q.row(i) -= q.row(i).dot(q.row(j)) * q.row(j);
    }
    const double n = q.row(i).norm();
    if (n <= kRankTol) {
      throw RankDeficient("row " + std::to_string(i) +
                          " collapsed during orthonormalization");
    }
    q.row(i) /= n;
  }
  return SubspaceBasis{std::move(q)};
}

Eigen::VectorXd principal_angles(const SubspaceBasis& p,
                                 const SubspaceBasis& q) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(p.rows * q.rows.transpose());
  Eigen::VectorXd angles = svd.singularValues();
  for (long i = 0; i < angles.size(); ++i) {
    angles[i] = std::acos(std::clamp(angles[i], 0.0, 1.0));
  }
  // Singular values are non-increasing, so acos is already non-decreasing.
  return angles;
}

double sum_sq_sines(const SubspaceBasis& p, const SubspaceBasis& q) {
  const Eigen::VectorXd angles = principal_angles(p, q);
  double s = 0.0;
  for (long i = 0; i < angles.size(); ++i) {
    const double si = std::sin(angles[i]);
    s += si * si;
  }
  return s;
}

SubspaceBasis best_l2_subspace(const Eigen::MatrixXd& points, int d) {
  if (points.rows() == 0) throw InsufficientData("empty point set");
  Eigen::BDCSVD<Eigen::MatrixXd> svd(points, Eigen::ComputeThinV);
  if (svd.singularValues().size() < d || svd.singularValues()[d - 1] <= kRankTol) {
    throw RankDeficient("data rank below requested dimension " +
                        std::to_string(d));
  }
  return SubspaceBasis{svd.matrixV().leftCols(d).transpose()};
}

PointCloud svd_project(const PointCloud& cloud, int m) {
  const long n = cloud.points.rows();
  const long dim = cloud.points.cols();
  if (m < 1 || m > std::min(n, dim)) {
    throw InvalidDim("target dimension " + std::to_string(m) +
                     " out of range [1, " + std::to_string(std::min(n, dim)) +
                     "]");
  }
  Eigen::BDCSVD<Eigen::MatrixXd> svd(cloud.points, Eigen::ComputeThinV);
  PointCloud out;
  out.points = cloud.points * svd.matrixV().leftCols(m);
  out.normalized = false;
  return out;
}

PointCloud homogenize(const PointCloud& cloud) {
  PointCloud out;
  out.points.resize(cloud.points.rows(), cloud.points.cols() + 1);
  out.points.leftCols(cloud.points.cols()) = cloud.points;
  out.points.rightCols<1>().setOnes();
  return normalize_to_sphere(out);
}

}  // namespace mkf
