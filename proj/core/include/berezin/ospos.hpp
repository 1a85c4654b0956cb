#pragma once

// Reflection-positivity quotients of finite kernel-section spans, the rank-one
// highest-weight kernel on the unit ball and the quadrature checks that tie it
// to the Berezin kernel.

#include "berezin/kernel.hpp"

#include <Eigen/Dense>

#include <complex>
#include <functional>
#include <vector>

namespace berezin::ospos {

using matgroup::Matrix;

inline constexpr double kDefaultQuotientTol = 1e-12;

/// E_+ / N for the span of kernel sections at `base_points`.
class HilbertQuotient {
 public:
  const std::vector<Matrix>& base_points() const noexcept { return points_; }
  const Matrix& gram() const noexcept { return gram_; }
  const Eigen::VectorXd& kept_eigenvalues() const noexcept { return kept_eigs_; }
  const Matrix& kept_eigenvectors() const noexcept { return kept_vecs_; }
  int rank() const noexcept { return static_cast<int>(kept_eigs_.size()); }
  double tol() const noexcept { return tol_; }
  const kernel::BerezinKernelSpec& spec() const noexcept { return spec_; }

  /// diag(sqrt(kept)) * kept_vecs^T * v.
  Eigen::VectorXd embed(const Eigen::VectorXd& v) const;
  double quotient_norm2(const Eigen::VectorXd& v) const { return embed(v).squaredNorm(); }

 private:
  friend HilbertQuotient gns_quotient(const std::vector<Matrix>&, const kernel::BerezinKernelSpec&,
                                      double);
  HilbertQuotient() = default;
  std::vector<Matrix> points_;
  Matrix gram_;
  Eigen::VectorXd kept_eigs_;
  Matrix kept_vecs_;
  double tol_ = kDefaultQuotientTol;
  kernel::BerezinKernelSpec spec_;
};

/// Keeps eigenpairs with eigenvalue > tol * max(1, lambda_max). Throws
/// NotPositive when the Gram matrix fails the psd certificate.
HilbertQuotient gns_quotient(const std::vector<Matrix>& points, const kernel::BerezinKernelSpec& spec,
                             double tol = kDefaultQuotientTol);

/// max_ij |kappa(h x_i, h x_j) c(h, x_i) c(h, x_j) - kappa(x_i, x_j)|. With
/// require_h the call checks tau(h) = h to 1e-9 first (InvalidArgument).
/// Throws OutsideOpenCell when a moved point leaves the chart or its orbit.
double invariance_check(const HilbertQuotient& quotient, const matgroup::GroupElement& h,
                        bool require_h = true);

struct HighestWeightKernel {
  int n = 1;
  double nu = 0.0;
};

/// (1 - sum_i z_i conj(w_i))^(-nu), principal branch.
std::complex<double> hw_kernel(const HighestWeightKernel& k, const Eigen::VectorXcd& z,
                               const Eigen::VectorXcd& w);

/// Normalisation of the weighted Bergman measure c_nu (1 - |z|^2)^(nu - 2) dA
/// on the unit disk: c_nu = (nu - 1) / pi. Throws DivergentWeight for nu <= 1.
double bergman_normalization(double nu);

struct DiskGrid {
  int radial_nodes = 128;
  int angular_nodes = 256;
};

/// |lhs / K(w, u) - 1| with lhs = c_nu int_D K(z,u) conj(K(z,w)) (1-|z|^2)^(nu-2) dA.
double bergman_reproduce_check(double nu, std::complex<double> u, std::complex<double> w,
                               const DiskGrid& grid = {});

/// A real function on (-1, 1) supported in [lo, hi].
struct SegmentFunction {
  std::function<double(double)> fn;
  double lo = -1.0;
  double hi = 1.0;
};

/// Smooth bump exp(-1/(1 - ((x - c)/r)^2)) on (c - r, c + r).
SegmentFunction bump(double center, double radius);

struct IsometryResult {
  double lhs = 0.0;  // <T f, T g> in the weighted Bergman space
  double rhs = 0.0;  // double integral with |1 - x y|^(-nu)
  double relative_error = 0.0;
};

/// Both sides of <T f, T g> = <f, g>_lambda for T f(z) = int K(z, x) f(x) dx.
IsometryResult tmu_isometry_check(double nu, const SegmentFunction& f, const SegmentFunction& g,
                                  int segment_nodes = 96, const DiskGrid& grid = {},
                                  double margin = 1e-3);

}  // namespace berezin::ospos
