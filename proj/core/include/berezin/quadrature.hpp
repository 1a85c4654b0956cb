#pragma once

#include <Eigen/Dense>

namespace berezin::quadrature {

struct Rule {
  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;

  Eigen::Index size() const { return nodes.size(); }
};

/// n-point Gauss-Legendre rule on [a, b].
Rule gauss_legendre(int n, double a = -1.0, double b = 1.0);

/// Uniform rule a + k (b - a)/n, k = 0..n-1, weights (b - a)/n. Spectrally
/// accurate for smooth (b - a)-periodic integrands.
Rule periodic_trapezoid(int n, double a, double b);

}  // namespace berezin::quadrature
