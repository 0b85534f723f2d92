#pragma once

#include <Eigen/Dense>

namespace specidx {

struct QuadRule {
  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;
};

/// Gauss-Legendre rule with n points on [a, b] (Golub-Welsch).
QuadRule gauss_legendre(int n, double a, double b);

}  // namespace specidx
