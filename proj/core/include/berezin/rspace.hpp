#pragma once

// Compact picture B = G/P_max for the implemented families: p-planes stored
// as orthonormal frames, the |Cos| kernel, and the open H-orbits labelled by
// the signature of the restricted form I_{p,q}.

#include "berezin/matgroup.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace berezin::rspace {

using matgroup::GroupElement;
using matgroup::Matrix;

inline constexpr double kFrameTolerance = 1e-10;
inline constexpr double kDegenerateTolerance = 1e-10;
inline constexpr double kDefaultMargin = 1e-3;

class FlagPoint {
 public:
  /// Requires frame^T frame = I within kFrameTolerance.
  static FlagPoint from_frame(Matrix frame);
  /// Orthonormalises the columns of any full-rank (p+q) x p matrix.
  static FlagPoint from_spanning(const Matrix& vectors);

  const Matrix& frame() const noexcept { return frame_; }
  int p() const noexcept { return static_cast<int>(frame_.cols()); }
  int dim() const noexcept { return static_cast<int>(frame_.rows()); }

  /// g . b as a new orthonormal frame.
  FlagPoint moved(const GroupElement& g) const;
  /// Orthogonal projector onto the plane; equal planes give equal projectors.
  Matrix projector() const { return frame_ * frame_.transpose(); }

 private:
  explicit FlagPoint(Matrix frame) : frame_(std::move(frame)) {}
  Matrix frame_;
};

enum class FamilyKind { Sphere, Grassmann, Ball, Siegel };

struct FamilySpec {
  FamilyKind kind = FamilyKind::Ball;
  int n = 0;  // sphere/ball/siegel parameter; 0 for grassmann
  int p = 1;
  int q = 1;
  matgroup::NormalizationRecord normalization;
  int rank_r = 1;
  std::optional<double> wallach_c;
  std::optional<double> comp_series_R;
  std::string table_row;  // key into the classification tables

  static FamilySpec sphere(int n);
  static FamilySpec grassmann(int p, int q);
  static FamilySpec ball(int n);
  static FamilySpec siegel(int n);
  /// Parses "ball", "siegel", "sphere" (with n) or "grassmann" (with p, q).
  static FamilySpec from_name(const std::string& name, int n, int p = 0, int q = 0);

  std::string name() const;
  matgroup::GroupFamily group() const;
  double rho() const { return normalization.rho; }
  /// Shape of a chart coordinate: q x p (ball: n x 1, siegel: n x n symmetric).
  int chart_rows() const { return q; }
  int chart_cols() const { return p; }
};

struct OrbitLabel {
  int j = 0;
  int plus = 0;
  int minus = 0;

  friend bool operator==(const OrbitLabel&, const OrbitLabel&) = default;
};

/// |det(U^T V)| for orthonormal frames U, V of the same shape.
double cos_kernel(const FlagPoint& b, const FlagPoint& c);

/// Orthonormal frame of the column span of [[I_p],[X]].
FlagPoint graph_point(const Matrix& X);
/// X = pr_q o (pr_p restricted to b)^-1. Throws OutsideOpenCell when the
/// plane does not project onto the first p coordinates.
Matrix recover_X(const FlagPoint& b);

/// j = number of negative eigenvalues of F^T I_{p,q} F. Throws
/// DegeneratePlane when an eigenvalue has modulus below kDegenerateTolerance.
OrbitLabel classify_orbit(const FlagPoint& b, int p, int q);
/// Smallest |eigenvalue| of F^T I_{p,q} F, the distance-like boundary gap.
double orbit_gap(const FlagPoint& b, int p, int q);

/// Orbit of a chart coordinate: for the ball |x| < 1 gives 0, |x| > 1 gives 1;
/// for the Siegel family j counts eigenvalues of y outside [-1, 1].
OrbitLabel classify_chart(const FamilySpec& family, const Matrix& X);

/// (I - y)(I + y)^-1; throws OutsideOpenCell when I + y is singular.
Matrix cayley(const Matrix& y);
/// Label from the Cayley criterion: the number of negative eigenvalues of
/// cayley(y). Agrees with classify_chart on the Siegel family.
OrbitLabel siegel_cayley_label(const Matrix& y);

/// Throws InvalidLabel unless 0 <= j <= rank_r.
OrbitLabel make_label(const FamilySpec& family, int j);

/// Chart coordinates of `count` points of orbit `label`, each at least
/// `margin` away from the orbit boundary (|x| for the ball, eigenvalues of y
/// for the Siegel family, the restricted form spectrum for Grassmannians).
std::vector<Matrix> sample_orbit_coords(const FamilySpec& family, const OrbitLabel& label,
                                        int count, std::uint64_t seed,
                                        double margin = kDefaultMargin);
/// The same points as planes.
std::vector<FlagPoint> sample_orbit_flags(const FamilySpec& family, const OrbitLabel& label,
                                          int count, std::uint64_t seed,
                                          double margin = kDefaultMargin);

/// b_j = span(e_1..e_{p-j}, e_{p+1}..e_{p+j}) in R^{p+q}; requires j <= min(p, q).
FlagPoint base_point(int p, int q, int j);
/// Random element of S(O(p-j,j) x O(j,q-j)) embedded in SO(p,q) so that it
/// preserves b_j and its I_{p,q}-orthogonal complement.
GroupElement random_stabilizer(int p, int q, int j, matgroup::Rng& rng, double scale = 0.5);

}  // namespace berezin::rspace
