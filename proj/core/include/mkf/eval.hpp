#pragma once

#include <Eigen/Dense>
#include <vector>

namespace mkf {

// Minimum-cost assignment on a square cost matrix; returns column index per
// row. O(n^3) Hungarian algorithm with potentials.
std::vector<int> hungarian(const Eigen::MatrixXd& cost);

// Fraction of inliers (truth != kOutlierLabel) misassigned under the best
// bijection between predicted and true cluster labels.
double misclassification_rate(const std::vector<int>& pred,
                              const std::vector<int>& truth);

struct TrialStats {
  double mean = 0.0;
  double median = 0.0;
  double stddev = 0.0;  // sample standard deviation, divisor n-1
  double mean_runtime = 0.0;
};

TrialStats aggregate(const std::vector<double>& error_rates,
                     const std::vector<double>& runtimes);

}  // namespace mkf
