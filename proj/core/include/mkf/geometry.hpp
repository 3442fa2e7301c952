#pragma once

#include <Eigen/Dense>
#include <vector>

namespace mkf {

// A linear d-subspace of R^D stored as a d x D matrix with orthonormal rows.
struct SubspaceBasis {
  Eigen::MatrixXd rows;

  int dim() const { return static_cast<int>(rows.rows()); }
  int ambient() const { return static_cast<int>(rows.cols()); }

  // Frobenius norm of rows * rows^T - I. Valid bases keep this under 1e-10.
  double orthonormality_error() const;
};

// N points in R^D, one per row.
struct PointCloud {
  Eigen::MatrixXd points;
  bool normalized = false;

  long size() const { return points.rows(); }
  int ambient() const { return static_cast<int>(points.cols()); }
};

// Divides every row by its Euclidean norm. Throws ZeroVector for rows with
// norm below 1e-12.
PointCloud normalize_to_sphere(const PointCloud& cloud);

// Distance from a unit vector x to the subspace: sqrt(max(0, 1 - |Px|^2)).
double residual(const Eigen::VectorXd& x, const SubspaceBasis& basis);

// Index of the basis maximizing |P_i x|; ties go to the lowest index.
int nearest_subspace(const Eigen::VectorXd& x,
                     const std::vector<SubspaceBasis>& bases);

// Modified Gram-Schmidt on the rows. The first row's direction is preserved.
// Throws RankDeficient when a projected row norm drops to 1e-10 or below.
SubspaceBasis orthonormalize(const Eigen::MatrixXd& m);

// Principal angles between two d-subspaces, non-decreasing, in [0, pi/2].
Eigen::VectorXd principal_angles(const SubspaceBasis& p,
                                 const SubspaceBasis& q);

// Sum over principal angles of sin^2, the drift measure between subspaces.
double sum_sq_sines(const SubspaceBasis& p, const SubspaceBasis& q);

// Best linear (un-centered) least-squares d-subspace: top-d right singular
// vectors of the data matrix. Throws RankDeficient if rank(data) < d.
SubspaceBasis best_l2_subspace(const Eigen::MatrixXd& points, int d);

// Coordinates of each point in the basis of the top-m right singular
// vectors. Output is not re-normalized.
PointCloud svd_project(const PointCloud& cloud, int m);

// Appends a coordinate equal to 1 to each point and normalizes to the sphere.
PointCloud homogenize(const PointCloud& cloud);

}  // namespace mkf
