#include "berezin/matgroup.hpp"

#include "berezin/error.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <sstream>

namespace berezin::matgroup {

namespace {

double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

void require_square(const Matrix& m, int dim, const char* where) {
  if (m.rows() != dim || m.cols() != dim) {
    std::ostringstream os;
    os << where << ": expected a " << dim << "x" << dim << " matrix, got " << m.rows() << "x"
       << m.cols();
    throw Error(ErrorCode::ShapeMismatch, os.str());
  }
}

void require_blocks(int p, int q) {
  if (p < 1 || q < 1) throw Error(ErrorCode::InvalidArgument, "block sizes must be positive");
}

bool is_symmetric(const Matrix& m) {
  return m.rows() == m.cols() && max_abs(m - m.transpose()) <= 1e-12 * std::max(1.0, max_abs(m));
}

}  // namespace

std::string to_string(GroupFamily family) { return family == GroupFamily::SL ? "SL" : "Sp"; }

GroupElement GroupElement::sl(Matrix mat, int p, int q) {
  require_blocks(p, q);
  require_square(mat, p + q, "GroupElement::sl");
  const double det = mat.determinant();
  if (std::abs(det - 1.0) > kGroupTolerance) {
    std::ostringstream os;
    os << "det = " << det << " is not 1";
    throw Error(ErrorCode::InvalidArgument, os.str());
  }
  return GroupElement(std::move(mat), GroupFamily::SL, p, q);
}

GroupElement GroupElement::sl_normalized(Matrix mat, int p, int q) {
  require_blocks(p, q);
  require_square(mat, p + q, "GroupElement::sl_normalized");
  double det = mat.determinant();
  if (det == 0.0 || !std::isfinite(det)) {
    throw Error(ErrorCode::InvalidArgument, "cannot normalise a singular matrix");
  }
  if (det < 0.0) {
    mat.row(0) *= -1.0;
    det = -det;
  }
  mat *= std::pow(det, -1.0 / static_cast<double>(p + q));
  return GroupElement::sl(std::move(mat), p, q);
}

GroupElement GroupElement::sp(Matrix mat, int n) {
  require_blocks(n, n);
  require_square(mat, 2 * n, "GroupElement::sp");
  const Matrix J = symplectic_form(n);
  const double defect = max_abs(mat.transpose() * J * mat - J);
  if (defect > kGroupTolerance * std::max(1.0, max_abs(mat) * max_abs(mat))) {
    std::ostringstream os;
    os << "matrix is not symplectic (defect " << defect << ")";
    throw Error(ErrorCode::InvalidArgument, os.str());
  }
  return GroupElement(std::move(mat), GroupFamily::Sp, n, n);
}

GroupElement GroupElement::identity(GroupFamily family, int p, int q) {
  require_blocks(p, q);
  if (family == GroupFamily::Sp && p != q) {
    throw Error(ErrorCode::InvalidArgument, "Sp(n) needs equal blocks");
  }
  return GroupElement(Matrix::Identity(p + q, p + q), family, p, q);
}

GroupElement GroupElement::operator*(const GroupElement& other) const {
  if (family_ != other.family_ || p_ != other.p_ || q_ != other.q_) {
    throw Error(ErrorCode::ShapeMismatch, "product of elements from different groups");
  }
  return GroupElement(mat_ * other.mat_, family_, p_, q_);
}

GroupElement GroupElement::inverse() const {
  if (family_ == GroupFamily::Sp) {
    const Matrix J = symplectic_form(p_);
    return GroupElement(-J * mat_.transpose() * J, family_, p_, q_);
  }
  return GroupElement(mat_.partialPivLu().inverse(), family_, p_, q_);
}

Matrix BlockTriangularParts::reassemble() const {
  const Eigen::Index p = A.rows();
  const Eigen::Index q = D.rows();
  Matrix lower = Matrix::Identity(p + q, p + q);
  lower.bottomLeftCorner(q, p) = Y;
  Matrix levi = Matrix::Zero(p + q, p + q);
  levi.topLeftCorner(p, p) = A;
  levi.bottomRightCorner(q, q) = D;
  Matrix upper = Matrix::Identity(p + q, p + q);
  upper.topRightCorner(p, q) = Z;
  return lower * levi * upper;
}

BlockTriangularParts nbar_man_decompose(const Matrix& g, int p) {
  const Eigen::Index n = g.rows();
  if (g.cols() != n || p < 1 || p >= n) {
    throw Error(ErrorCode::ShapeMismatch, "nbar_man_decompose: bad block size");
  }
  const Eigen::Index q = n - p;
  const Matrix a = g.topLeftCorner(p, p);
  const Matrix b = g.topRightCorner(p, q);
  const Matrix c = g.bottomLeftCorner(q, p);
  const Matrix d = g.bottomRightCorner(q, q);

  const auto lu = a.partialPivLu();
  const double det_a = lu.determinant();
  if (!(std::abs(det_a) >= kCellTolerance * std::pow(max_abs(g), p))) {
    std::ostringstream os;
    os << "leading block is singular (|det a| = " << std::abs(det_a) << ")";
    throw Error(ErrorCode::OutsideOpenCell, os.str());
  }
  BlockTriangularParts parts;
  parts.A = a;
  parts.Z = lu.solve(b);
  // Y = c a^-1, solved as a^T Y^T = c^T.
  parts.Y = a.transpose().partialPivLu().solve(c.transpose()).transpose();
  parts.D = d - c * parts.Z;
  return parts;
}

BlockTriangularParts nbar_man_decompose(const GroupElement& g) {
  return nbar_man_decompose(g.matrix(), g.p());
}

double alpha_power(const GroupElement& g, double exponent, double alpha_exponent) {
  if (exponent == 0.0) {
    // Still enforce the open-cell precondition.
    nbar_man_decompose(g);
    return 1.0;
  }
  const auto parts = nbar_man_decompose(g);
  return std::pow(std::abs(parts.A.determinant()), alpha_exponent * exponent);
}

double alpha_power(const GroupElement& g, double exponent, const NormalizationRecord& norm) {
  return alpha_power(g, exponent, norm.alpha_exponent);
}

double kman_a_scalar(const Matrix& g, int p, double alpha_exponent) {
  if (p < 1 || p > g.cols()) throw Error(ErrorCode::ShapeMismatch, "kman_a_scalar: bad block");
  const Eigen::HouseholderQR<Matrix> qr(g.leftCols(p));
  const Matrix r = qr.matrixQR().topLeftCorner(p, p).triangularView<Eigen::Upper>();
  double log_det = 0.0;
  for (int i = 0; i < p; ++i) log_det += std::log(std::abs(r(i, i)));
  return std::exp(alpha_exponent * log_det);
}

double kman_a_scalar(const GroupElement& g, double alpha_exponent) {
  return kman_a_scalar(g.matrix(), g.p(), alpha_exponent);
}

Matrix signature_matrix(int p, int q) {
  Matrix m = Matrix::Identity(p + q, p + q);
  m.bottomRightCorner(q, q) *= -1.0;
  return m;
}

Matrix symplectic_form(int n) {
  Matrix J = Matrix::Zero(2 * n, 2 * n);
  J.topRightCorner(n, n) = Matrix::Identity(n, n);
  J.bottomLeftCorner(n, n) = -Matrix::Identity(n, n);
  return J;
}

namespace {

GroupElement rewrap(const GroupElement& g, Matrix m) {
  return g.family() == GroupFamily::SL ? GroupElement::sl(std::move(m), g.p(), g.q())
                                       : GroupElement::sp(std::move(m), g.p());
}

}  // namespace

GroupElement apply_involution(const GroupElement& g, Involution which) {
  const Matrix I = signature_matrix(g.p(), g.q());
  switch (which) {
    case Involution::Theta:
      return rewrap(g, g.inverse().matrix().transpose());
    case Involution::Tau:
      return rewrap(g, I * g.inverse().matrix().transpose() * I);
    case Involution::TauTilde:
      return rewrap(g, I * g.matrix() * I);
  }
  throw Error(ErrorCode::InvalidArgument, "unknown involution");
}

Matrix nbar_action(const GroupElement& g, const Matrix& X) {
  const int p = g.p();
  const int q = g.q();
  if (X.rows() != q || X.cols() != p) {
    throw Error(ErrorCode::ShapeMismatch, "nbar_action: X must be q x p");
  }
  const Matrix& m = g.matrix();
  const Matrix denom = m.topLeftCorner(p, p) + m.topRightCorner(p, q) * X;
  const Matrix numer = m.bottomLeftCorner(q, p) + m.bottomRightCorner(q, q) * X;
  const auto lu = denom.partialPivLu();
  const double scale = max_abs(m) * (1.0 + max_abs(X));
  if (!(std::abs(lu.determinant()) >= kCellTolerance * std::pow(scale, p))) {
    throw Error(ErrorCode::OutsideOpenCell, "nbar_action: a + bX is singular");
  }
  // numer * denom^-1 via denom^T Z^T = numer^T.
  return denom.transpose().partialPivLu().solve(numer.transpose()).transpose();
}

GroupElement nbar(GroupFamily family, const Matrix& X) {
  const int q = static_cast<int>(X.rows());
  const int p = static_cast<int>(X.cols());
  require_blocks(p, q);
  if (family == GroupFamily::Sp && !is_symmetric(X)) {
    throw Error(ErrorCode::ShapeMismatch, "Sp chart coordinates must be symmetric");
  }
  Matrix m = Matrix::Identity(p + q, p + q);
  m.bottomLeftCorner(q, p) = X;
  return family == GroupFamily::SL ? GroupElement::sl(std::move(m), p, q)
                                   : GroupElement::sp(std::move(m), p);
}

GroupElement nplus(GroupFamily family, const Matrix& Z) {
  const int p = static_cast<int>(Z.rows());
  const int q = static_cast<int>(Z.cols());
  require_blocks(p, q);
  if (family == GroupFamily::Sp && !is_symmetric(Z)) {
    throw Error(ErrorCode::ShapeMismatch, "Sp chart coordinates must be symmetric");
  }
  Matrix m = Matrix::Identity(p + q, p + q);
  m.topRightCorner(p, q) = Z;
  return family == GroupFamily::SL ? GroupElement::sl(std::move(m), p, q)
                                   : GroupElement::sp(std::move(m), p);
}

Matrix grading_element(GroupFamily family, int p, int q) {
  require_blocks(p, q);
  Matrix x = Matrix::Zero(p + q, p + q);
  if (family == GroupFamily::Sp) {
    x.topLeftCorner(p, p) = 0.5 * Matrix::Identity(p, p);
    x.bottomRightCorner(q, q) = -0.5 * Matrix::Identity(q, q);
  } else {
    const double n = p + q;
    x.topLeftCorner(p, p) = (q / n) * Matrix::Identity(p, p);
    x.bottomRightCorner(q, q) = -(p / n) * Matrix::Identity(q, q);
  }
  return x;
}

GroupElement exp_grading(GroupFamily family, int p, int q, double t) {
  const Matrix x = grading_element(family, p, q);
  Matrix m = Matrix::Zero(p + q, p + q);
  for (int i = 0; i < p + q; ++i) m(i, i) = std::exp(t * x(i, i));
  return family == GroupFamily::SL ? GroupElement::sl(std::move(m), p, q)
                                   : GroupElement::sp(std::move(m), p);
}

GroupElement exp_algebra(GroupFamily family, int p, int q, const Matrix& X) {
  Matrix m = X.exp();
  if (family == GroupFamily::SL) return GroupElement::sl_normalized(std::move(m), p, q);
  return GroupElement::sp(std::move(m), p);
}

namespace {

Matrix gaussian(Eigen::Index rows, Eigen::Index cols, Rng& rng, double scale) {
  std::normal_distribution<double> normal(0.0, scale);
  Matrix m(rows, cols);
  // Column-major fill order is part of the determinism contract.
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = normal(rng);
  return m;
}

Matrix antisymmetric(Eigen::Index n, Rng& rng, double scale) {
  const Matrix g = gaussian(n, n, rng, scale);
  return (g - g.transpose()) / std::sqrt(2.0);
}

Matrix symmetric(Eigen::Index n, Rng& rng, double scale) {
  const Matrix g = gaussian(n, n, rng, scale);
  return (g + g.transpose()) / 2.0;
}

}  // namespace

GroupElement random_sl(int p, int q, Rng& rng) {
  return GroupElement::sl_normalized(gaussian(p + q, p + q, rng, 1.0), p, q);
}

GroupElement random_sp(int n, Rng& rng, double scale) {
  const Matrix a = gaussian(n, n, rng, scale);
  Matrix x(2 * n, 2 * n);
  x.topLeftCorner(n, n) = a;
  x.topRightCorner(n, n) = symmetric(n, rng, scale);
  x.bottomLeftCorner(n, n) = symmetric(n, rng, scale);
  x.bottomRightCorner(n, n) = -a.transpose();
  return exp_algebra(GroupFamily::Sp, n, n, x);
}

GroupElement random_h(GroupFamily family, int p, int q, Rng& rng, double scale) {
  Matrix x(p + q, p + q);
  if (family == GroupFamily::SL) {
    const Matrix b = gaussian(p, q, rng, scale);
    x.topLeftCorner(p, p) = antisymmetric(p, rng, scale);
    x.bottomRightCorner(q, q) = antisymmetric(q, rng, scale);
    x.topRightCorner(p, q) = b;
    x.bottomLeftCorner(q, p) = b.transpose();
  } else {
    if (p != q) throw Error(ErrorCode::InvalidArgument, "Sp(n) needs equal blocks");
    const Matrix a = antisymmetric(p, rng, scale);
    const Matrix b = symmetric(p, rng, scale);
    x.topLeftCorner(p, p) = a;
    x.bottomRightCorner(p, p) = a;
    x.topRightCorner(p, p) = b;
    x.bottomLeftCorner(p, p) = b;
  }
  return exp_algebra(family, p, q, x);
}

GroupElement random_k(int p, int q, Rng& rng, double scale) {
  return GroupElement::sl_normalized(antisymmetric(p + q, rng, scale).exp(), p, q);
}

Matrix act_on_frame(const GroupElement& g, const Matrix& frame) {
  if (frame.rows() != g.dim()) throw Error(ErrorCode::ShapeMismatch, "act_on_frame: bad frame");
  const Matrix moved = g.matrix() * frame;
  const Eigen::HouseholderQR<Matrix> qr(moved);
  return qr.householderQ() * Matrix::Identity(frame.rows(), frame.cols());
}

Matrix orthogonal_completion(const Matrix& frame) {
  const Eigen::HouseholderQR<Matrix> qr(frame);
  Matrix k = qr.householderQ();
  if (k.determinant() < 0.0) {
    if (frame.cols() == frame.rows()) {
      k.col(0) *= -1.0;
    } else {
      k.col(k.cols() - 1) *= -1.0;
    }
  }
  return k;
}

}  // namespace berezin::matgroup
