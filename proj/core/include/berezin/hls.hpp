#pragma once

// The Riesz form I_lambda[f, h] = int int f(x) h(y) |x - y|^-lambda dx dy on
// R^n (n = 1, 2) for piecewise-constant grid functions, the sharp HLS
// constant and optimizer, and the reflection inequalities in hyperplanes.

#include <Eigen/Dense>

#include <array>
#include <functional>
#include <string>
#include <vector>

namespace berezin::hls {

/// Piecewise-constant function on a uniform grid of square cells. Cell k has
/// centre origin + k * spacing (componentwise) and value values(index(k)).
class GridFunction {
 public:
  static GridFunction line(double origin, double spacing, int cells);
  static GridFunction plane(std::array<double, 2> origin, double spacing, std::array<int, 2> cells);

  int dimension() const noexcept { return n_; }
  double spacing() const noexcept { return h_; }
  std::array<double, 2> origin() const noexcept { return origin_; }
  std::array<int, 2> cells() const noexcept { return cells_; }
  int size() const noexcept { return cells_[0] * cells_[1]; }
  double cell_volume() const;

  Eigen::VectorXd& values() noexcept { return values_; }
  const Eigen::VectorXd& values() const noexcept { return values_; }
  /// Centre of the cell with flat index i (second coordinate 0 in 1D).
  std::array<double, 2> center(int i) const;
  /// Sets every value to fn(centre).
  GridFunction& sample(const std::function<double(double, double)>& fn);

  bool same_grid(const GridFunction& other) const;
  GridFunction with_values(Eigen::VectorXd v) const;

 private:
  GridFunction() = default;
  int n_ = 1;
  double h_ = 1.0;
  std::array<double, 2> origin_{0.0, 0.0};
  std::array<int, 2> cells_{1, 1};
  Eigen::VectorXd values_;
};

struct HLSParams {
  int n = 1;
  double lambda = 0.5;
  double p = 4.0 / 3.0;

  /// Validates 0 < lambda < n and derives p = 2n / (2n - lambda).
  static HLSParams make(int n, double lambda);
};

/// Exact I_lambda of the piecewise-constant extensions. Throws LambdaOutOfRange
/// unless 0 < lambda < n.
double i_lambda(const GridFunction& f, const GridFunction& h, double lambda);

/// ||f||_p of the piecewise-constant extension.
double lp_norm(const GridFunction& f, double p);

/// pi^(lambda/2) Gamma((n-lambda)/2) / Gamma(n-lambda/2) (Gamma(n)/Gamma(n/2))^(1-lambda/n).
double sharp_constant(int n, double lambda);

/// (1 + |x|^2)^(-(2n - lambda)/2).
double optimizer(int n, double lambda, double x_norm);

/// The hyperplane {x_axis = position}.
struct Hyperplane {
  int axis = 0;
  double position = 0.0;
};

/// The grid function x -> f(reflection of x). Throws InvalidArgument unless
/// the reflection maps every supported cell onto a cell of the grid.
GridFunction reflect(const GridFunction& f, const Hyperplane& H);

/// I_lambda[Theta_H f, f] for f supported on one side of H. Throws
/// SupportViolation when f has mass on both sides more than one cell away.
double reflection_positivity_check(const GridFunction& f, double lambda, const Hyperplane& H);

struct EvenAverageResult {
  double lhs = 0.0;  // (I[f^i] + I[f^o]) / 2
  double rhs = 0.0;  // I[f]
  double odd_form = 0.0;  // 4 I[Theta(f_- 1_+), f_- 1_+] with f_- the odd part
  bool holds = false;     // lhs >= rhs - 1e-10 max(|lhs|, |rhs|)
};

/// f^i and f^o are the even extensions of f restricted to either side.
EvenAverageResult even_average_inequality(const GridFunction& f, double lambda, const Hyperplane& H);

struct OptimizerRayleigh {
  double half_width = 0.0;  // box [-L, L]
  double spacing = 0.0;
  double box_form = 0.0;    // I over box x box
  double cross_form = 0.0;  // 2 I over box x tail
  double tail_form = 0.0;   // I over tail x tail
  double norm_p = 0.0;
  double quotient = 0.0;    // I[h, h] / ||h||_p^2
  double sharp = 0.0;
  double relative_gap = 0.0;  // 1 - quotient / sharp
};

/// Rayleigh quotient of the 1D optimizer: piecewise constant on [-L, L], exact
/// outside, with the box-tail and tail-tail parts done by adaptive quadrature.
OptimizerRayleigh optimizer_rayleigh(double lambda, double half_width, double spacing);

/// CSV with header spacing,half_width,quotient,sharp,relative_gap.
std::string rayleigh_csv(const std::vector<OptimizerRayleigh>& rows);

}  // namespace berezin::hls
