#pragma once

// The cos^lambda and sin^lambda transforms on RP^1 and RP^2, realised on even
// functions on S^1 and S^2, together with their Gamma-ratio spectrum.

#include <Eigen/Dense>

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace berezin::transforms {

inline constexpr double kDefaultSingularMargin = 0.1;

/// Quadrature grid on S^n (n = 1, 2) with total mass 1.
/// S^1: theta_k = 2 pi k / N. S^2: Gauss-Legendre in cos(theta) times a
/// uniform phi grid; node (i, j) is stored at index i * n_phi + j.
class SphereGrid {
 public:
  /// N must be a positive multiple of 4 (antipodes and quarter turns are node shifts).
  static SphereGrid circle(int n_nodes);
  /// n_phi must be even.
  static SphereGrid sphere2(int n_theta, int n_phi);

  int dimension() const noexcept { return dim_; }
  int size() const noexcept { return static_cast<int>(weights_.size()); }
  const Eigen::MatrixXd& nodes() const noexcept { return nodes_; }  // size x (n+1)
  const Eigen::VectorXd& weights() const noexcept { return weights_; }
  int n_theta() const noexcept { return n_theta_; }
  int n_phi() const noexcept { return n_phi_; }
  /// cos(theta) nodes and their Gauss weights (S^2 only; the Gauss weights sum to 2).
  const Eigen::VectorXd& cos_theta() const noexcept { return t_; }
  const Eigen::VectorXd& cos_theta_weights() const noexcept { return tw_; }
  /// Index of -u for node u.
  int antipode(int i) const;

 private:
  SphereGrid() = default;
  int dim_ = 1;
  int n_theta_ = 0;
  int n_phi_ = 0;
  Eigen::MatrixXd nodes_;
  Eigen::VectorXd weights_;
  Eigen::VectorXd t_;
  Eigen::VectorXd tw_;
};

/// Node values of a function on RP^n lifted to an even function on S^n.
class EvenFunction {
 public:
  /// Validates value(u) = value(-u) within 1e-10.
  static EvenFunction from_values(const SphereGrid& grid, Eigen::VectorXd values);
  static EvenFunction sample(const SphereGrid& grid,
                             const std::function<double(const Eigen::VectorXd&)>& f);

  const Eigen::VectorXd& values() const noexcept { return values_; }

 private:
  explicit EvenFunction(Eigen::VectorXd v) : values_(std::move(v)) {}
  Eigen::VectorXd values_;
};

/// eta_{2m}(lambda) on RP^n with rho = (n+1)/2; `pole` is set when lambda
/// hits a pole of the numerator Gamma factor that nothing cancels.
struct EtaValue {
  bool pole = false;
  double value = 0.0;
};
EtaValue eta_spectrum(int n, int m, double lambda);

struct SpectrumEntry {
  int m = 0;
  std::optional<double> analytic;  // empty on a pole
  std::optional<double> measured;
  bool pole() const { return !analytic.has_value(); }
};

/// (C^lambda f)(u) = sum_v w_v |<u, v>|^(lambda - rho) f(v). Throws
/// SingularExponent when lambda - rho <= -1 + margin. For negative exponents
/// node pairs with <u, v> = 0 are dropped from the sum.
EvenFunction coslambda_apply(const EvenFunction& f, double lambda, const SphereGrid& grid,
                             double margin = kDefaultSingularMargin);

/// C^lambda followed by the quarter turn b -> b^perp on the circle. Throws
/// UnsupportedFamily for S^2.
EvenFunction sinlambda_apply(const EvenFunction& f, double lambda, const SphereGrid& grid,
                             double margin = kDefaultSingularMargin);

/// Degree-2m zonal function: cos(2 m theta) on S^1, P_{2m}(cos theta) on S^2.
EvenFunction zonal_harmonic(const SphereGrid& grid, int m);

/// Rayleigh quotients <C f, f> / <f, f> on the degree-2m zonal functions,
/// m = 0..m_max, paired with the analytic eigenvalues. The grid rotation
/// symmetry reduces the double sum to rings (S^2) or a single row (S^1); the
/// value equals the full double sum.
std::vector<SpectrumEntry> measure_spectrum(double lambda, const SphereGrid& grid, int m_max,
                                            double margin = kDefaultSingularMargin);

/// The same quotients through coslambda_apply; O(N^2), for small grids.
std::vector<SpectrumEntry> measure_spectrum_direct(double lambda, const SphereGrid& grid,
                                                   int m_max,
                                                   double margin = kDefaultSingularMargin);

/// <f, h> = sum_i w_i f_i h_i.
double grid_inner(const SphereGrid& grid, const EvenFunction& f, const EvenFunction& h);

/// CSV with header m,lambda,analytic,measured,abs_error,pole_flag.
std::string spectrum_csv(const std::vector<SpectrumEntry>& entries, double lambda);

}  // namespace berezin::transforms
