#pragma once

// Dense matrix models of SL(p+q,R) and Sp(n,R) acting on the flag space
// G/P_max: block triangular decompositions, the scalar A-components a(g)
// and alpha(g), the three commuting involutions, and the fractional-linear
// action on the lower unipotent chart.

#include <Eigen/Dense>

#include <random>
#include <string>

namespace berezin::matgroup {

using Matrix = Eigen::MatrixXd;
using Rng = std::mt19937_64;

enum class GroupFamily { SL, Sp };

std::string to_string(GroupFamily family);

/// Scalar identification of the A-dual for one family. The alpha- and
/// a-components only ever enter as powers, and the power of a component is
/// |det of its leading block|^(alpha_exponent * exponent).
struct NormalizationRecord {
  double rho = 1.0;
  std::string lambda_scale;
  double alpha_exponent = 1.0;
};

/// |det(mat) - 1| for SL and max|mat^T J mat - J| relative to the entry
/// scale for Sp must stay below this after construction.
inline constexpr double kGroupTolerance = 1e-9;

/// A point g is taken to lie outside the open cell NbarMAN when the leading
/// block a satisfies |det a| < kCellTolerance * max|g|^p.
inline constexpr double kCellTolerance = 1e-12;

class GroupElement {
 public:
  /// Validates det = 1 within kGroupTolerance.
  static GroupElement sl(Matrix mat, int p, int q);
  /// Rescales by |det|^(-1/dim); a negative determinant is fixed by negating
  /// the first row. Throws on a singular matrix.
  static GroupElement sl_normalized(Matrix mat, int p, int q);
  /// Validates mat^T J mat = J within kGroupTolerance.
  static GroupElement sp(Matrix mat, int n);
  static GroupElement identity(GroupFamily family, int p, int q);

  const Matrix& matrix() const noexcept { return mat_; }
  GroupFamily family() const noexcept { return family_; }
  int p() const noexcept { return p_; }
  int q() const noexcept { return q_; }
  int dim() const noexcept { return p_ + q_; }

  /// Group law; the product is not revalidated.
  GroupElement operator*(const GroupElement& other) const;
  GroupElement inverse() const;

 private:
  GroupElement(Matrix mat, GroupFamily family, int p, int q)
      : mat_(std::move(mat)), family_(family), p_(p), q_(q) {}

  Matrix mat_;
  GroupFamily family_;
  int p_;
  int q_;
};

/// g = [[I,0],[Y,I]] * [[A,0],[0,D]] * [[I,Z],[0,I]].
struct BlockTriangularParts {
  Matrix Y;  // q x p, the Nbar coordinate
  Matrix A;  // p x p
  Matrix D;  // q x q
  Matrix Z;  // p x q, the N coordinate

  Matrix reassemble() const;
};

BlockTriangularParts nbar_man_decompose(const GroupElement& g);
BlockTriangularParts nbar_man_decompose(const Matrix& g, int p);

/// |det A(g)|^(alpha_exponent * exponent) with A(g) from nbar_man_decompose.
double alpha_power(const GroupElement& g, double exponent, double alpha_exponent = 1.0);
double alpha_power(const GroupElement& g, double exponent, const NormalizationRecord& norm);

/// The positive scalar t with a(g)^x = t^x in g = k m a n. Computed from a
/// thin QR of the first p columns: t = |det R_11|^alpha_exponent.
double kman_a_scalar(const GroupElement& g, double alpha_exponent = 1.0);
double kman_a_scalar(const Matrix& g, int p, double alpha_exponent = 1.0);

enum class Involution { Theta, Tau, TauTilde };

/// theta(g) = (g^-1)^T, tau(g) = I_{p,q} (g^-1)^T I_{p,q}, tau~(g) = I_{p,q} g I_{p,q}.
GroupElement apply_involution(const GroupElement& g, Involution which);

/// g.X = (c + dX)(a + bX)^-1 for X a q x p matrix.
Matrix nbar_action(const GroupElement& g, const Matrix& X);

Matrix signature_matrix(int p, int q);
Matrix symplectic_form(int n);

/// Lower unipotent [[I,0],[X,I]]. For Sp the q x p block must be symmetric.
GroupElement nbar(GroupFamily family, const Matrix& X);
/// Upper unipotent [[I,Z],[0,I]].
GroupElement nplus(GroupFamily family, const Matrix& Z);

/// X_0 = diag(q/(p+q) I_p, -p/(p+q) I_q) for SL, diag(I_n,-I_n)/2 for Sp.
Matrix grading_element(GroupFamily family, int p, int q);
GroupElement exp_grading(GroupFamily family, int p, int q, double t);

/// exp of a Lie algebra element of the family (sl or sp); validated.
GroupElement exp_algebra(GroupFamily family, int p, int q, const Matrix& X);

// Random generators used by samplers and property tests. All consume only
// the passed engine, so a fixed seed reproduces the sequence.

/// Gaussian matrix normalised into SL(p+q,R).
GroupElement random_sl(int p, int q, Rng& rng);
/// exp of a Gaussian element of sp(n,R) with entry scale `scale`.
GroupElement random_sp(int n, Rng& rng, double scale = 0.5);
/// exp of a Gaussian element of the tau-fixed subalgebra: so(p,q) for SL,
/// sp(n) intersected with so(n,n) (a copy of gl(n)) for Sp.
GroupElement random_h(GroupFamily family, int p, int q, Rng& rng, double scale = 0.5);
/// Random element of SO(p+q) (exp of an antisymmetric Gaussian matrix).
GroupElement random_k(int p, int q, Rng& rng, double scale = 1.0);

/// Orthonormal frame of span(g * frame), same shape as frame.
Matrix act_on_frame(const GroupElement& g, const Matrix& frame);
/// A special orthogonal matrix whose leading columns span the same plane as
/// the orthonormal `frame` (the column span, not the columns, is preserved).
Matrix orthogonal_completion(const Matrix& frame);

}  // namespace berezin::matgroup
