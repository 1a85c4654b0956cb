#pragma once

// Berezin kernels on the lower unipotent chart, Gram certification, the
// Wallach set, witnesses of non-positivity and positivity-threshold scans.

#include "berezin/matgroup.hpp"
#include "berezin/rspace.hpp"

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <optional>
#include <vector>

namespace berezin::kernel {

using matgroup::Matrix;

inline constexpr double kPsdTolerance = 1e-8;

struct BerezinKernelSpec {
  rspace::FamilySpec family;
  double lambda_minus_rho = 0.0;
};

/// |det(I_p - x^T y)|^e: |1 - <x, y>|^e on the ball, |det(I - x y)|^e on the
/// Siegel family. Throws KernelSingular when the base vanishes and e < 0.
double kappa(const BerezinKernelSpec& spec, const Matrix& x, const Matrix& y);

/// The same kernel as the alpha-power of tau(nbar_{-x}) nbar_y.
double kappa_via_group(const BerezinKernelSpec& spec, const Matrix& x, const Matrix& y);

struct GramReport {
  int size = 0;
  Eigen::VectorXd eigenvalues;  // ascending
  double min_eig = 0.0;
  double max_eig = 0.0;
  bool psd = true;
  double tol_used = kPsdTolerance;
  std::optional<Eigen::VectorXd> witness;  // unit vector with witness^T G witness < 0
  std::optional<double> witness_value;
};

Matrix gram_matrix(const BerezinKernelSpec& spec, const std::vector<Matrix>& points);
/// psd iff min_eig >= -tol * max(1, |max_eig|).
GramReport certify(const Matrix& G, double tol = kPsdTolerance);
GramReport gram(const BerezinKernelSpec& spec, const std::vector<Matrix>& points,
                double tol = kPsdTolerance);

/// lambda - rho in (-inf, -(r-1)c) or in {-jc : 0 <= j <= r-1}.
/// Throws MissingConfig when the family has no Wallach constant.
bool wallach_membership(const rspace::FamilySpec& family, double lambda_minus_rho);

struct Witness {
  Matrix x;
  Matrix y;
  double radius = 0.0;  // |x| = |y| on the ball, s = t on the Siegel family
  double form_value = 0.0;
  rspace::OrbitLabel orbit;
};

/// kappa(x,x) + kappa(y,y) - 2 kappa(x,y), the form at delta_x - delta_y.
double two_point_form(const BerezinKernelSpec& spec, const Matrix& x, const Matrix& y);

/// Searches orthogonal pairs of equal size in the non-Riemannian orbit for a
/// negative two-point form: radius 2, then 1 + 1e-3, then a scan of (1, 10].
Witness nonriemannian_witness(const rspace::FamilySpec& family, double lambda_minus_rho);

struct ScanPoint {
  double lambda_minus_rho = 0.0;
  double min_eig = 0.0;  // relative: min_eig / max(1, |max_eig|)
  bool psd = false;
};

struct ThresholdResult {
  double lower = 0.0;  // last psd value seen
  double upper = 0.0;  // first non-psd value seen
  bool endpoint_in_range = false;
  std::vector<ScanPoint> scan;      // coarse scan and bisection steps, in evaluation order
  std::vector<ScanPoint> discrete;  // verdicts at the points -j c, j = 0..r-1
};

struct ThresholdOptions {
  double scan_lo = -3.0;
  double scan_hi = 1.0;
  int coarse_steps = 41;
  double width = 1e-3;
  int samples = 128;
  std::uint64_t seed = 1;
  double tol = kPsdTolerance;
  double margin = rspace::kDefaultMargin;
};

/// Coarse scan of the psd verdict of the Gram matrix on fixed orbit samples,
/// then bisection of the first psd to non-psd transition. Scan points that hit
/// a discrete Wallach point are nudged off it. Throws InconclusiveScan when a
/// psd verdict reappears after a non-psd one.
ThresholdResult estimate_positivity_threshold(const rspace::FamilySpec& family,
                                              const rspace::OrbitLabel& label,
                                              const ThresholdOptions& options);

/// sum_ij w_i w_j kappa(x_i, x_j) f_i conj(g_j).
std::complex<double> berezin_form(const BerezinKernelSpec& spec, const Eigen::VectorXcd& f,
                                  const Eigen::VectorXcd& g, const std::vector<Matrix>& points,
                                  const Eigen::VectorXd& weights);

/// a(nbar_x)^(-lambda - rho), the factor with f_lambda(nbar_x) = weight * f(b_x).
double f_lambda_weight(const rspace::FamilySpec& family, const Matrix& x, double lambda);

/// |det(a + b x)|^e for h = [[a, b], [c, d]]; for h in H
/// kappa(h.x, h.y) c(h, x) c(h, y) = kappa(x, y).
double invariance_cocycle(const BerezinKernelSpec& spec, const matgroup::GroupElement& h,
                          const Matrix& x);

}  // namespace berezin::kernel
