#include "berezin/quadrature.hpp"

#include "berezin/error.hpp"

#include <gsl/gsl_integration.h>

#include <algorithm>
#include <memory>
#include <numeric>
#include <vector>

namespace berezin::quadrature {

Rule gauss_legendre(int n, double a, double b) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "gauss_legendre: n must be positive");
  std::unique_ptr<gsl_integration_glfixed_table, decltype(&gsl_integration_glfixed_table_free)>
      table(gsl_integration_glfixed_table_alloc(static_cast<size_t>(n)),
            &gsl_integration_glfixed_table_free);
  if (!table) throw Error(ErrorCode::InvalidArgument, "gauss_legendre: table allocation failed");
  Rule r;
  r.nodes.resize(n);
  r.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    double x = 0.0;
    double w = 0.0;
    gsl_integration_glfixed_point(a, b, static_cast<size_t>(i), &x, &w, table.get());
    r.nodes(i) = x;
    r.weights(i) = w;
  }
  // Ascending order, so node i and node n-1-i are mirror images.
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int i, int j) { return r.nodes(i) < r.nodes(j); });
  Rule sorted;
  sorted.nodes.resize(n);
  sorted.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    sorted.nodes(i) = r.nodes(order[i]);
    sorted.weights(i) = r.weights(order[i]);
  }
  return sorted;
}

Rule periodic_trapezoid(int n, double a, double b) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "periodic_trapezoid: n must be positive");
  const double h = (b - a) / n;
  Rule r;
  r.nodes = Eigen::VectorXd::LinSpaced(n, a, a + (n - 1) * h);
  r.weights = Eigen::VectorXd::Constant(n, h);
  return r;
}

}  // namespace berezin::quadrature
