#include "berezin/rspace.hpp"

#include "berezin/error.hpp"
#include "berezin/tables.hpp"

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <sstream>

namespace berezin::rspace {

namespace {

Eigen::VectorXd restricted_form_eigs(const FlagPoint& b, int p, int q) {
  if (b.dim() != p + q || b.p() != p) {
    throw Error(ErrorCode::ShapeMismatch, "frame shape does not match (p, q)");
  }
  const Matrix form = b.frame().transpose() * matgroup::signature_matrix(p, q) * b.frame();
  return Eigen::SelfAdjointEigenSolver<Matrix>(form, Eigen::EigenvaluesOnly).eigenvalues();
}

OrbitLabel label_from_minus(int p, int minus) { return OrbitLabel{minus, p - minus, minus}; }

Matrix ball_vector(int n, std::normal_distribution<double>& normal, matgroup::Rng& rng) {
  Eigen::VectorXd g(n + 1);
  for (int i = 0; i <= n; ++i) g(i) = normal(rng);
  return g.tail(n) / g(0);
}

Matrix goe(int n, std::normal_distribution<double>& normal, matgroup::Rng& rng) {
  Matrix a(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) a(i, j) = normal(rng);
  return (a + a.transpose()) / 2.0;
}

constexpr long kMaxAttemptsPerPoint = 100000;

}  // namespace

FlagPoint FlagPoint::from_frame(Matrix frame) {
  if (frame.cols() < 1 || frame.rows() <= frame.cols()) {
    throw Error(ErrorCode::ShapeMismatch, "frame must be (p+q) x p with q >= 1");
  }
  const Matrix gram = frame.transpose() * frame;
  const double defect = (gram - Matrix::Identity(frame.cols(), frame.cols())).cwiseAbs().maxCoeff();
  if (defect > kFrameTolerance) {
    std::ostringstream os;
    os << "frame columns are not orthonormal (defect " << defect << ")";
    throw Error(ErrorCode::InvalidArgument, os.str());
  }
  return FlagPoint(std::move(frame));
}

FlagPoint FlagPoint::from_spanning(const Matrix& vectors) {
  if (vectors.cols() < 1 || vectors.rows() <= vectors.cols()) {
    throw Error(ErrorCode::ShapeMismatch, "spanning set must be (p+q) x p with q >= 1");
  }
  const Eigen::ColPivHouseholderQR<Matrix> qr(vectors);
  if (qr.rank() < vectors.cols()) throw Error(ErrorCode::InvalidArgument, "vectors are dependent");
  const Eigen::HouseholderQR<Matrix> thin(vectors);
  Matrix frame = thin.householderQ() * Matrix::Identity(vectors.rows(), vectors.cols());
  return FlagPoint(std::move(frame));
}

FlagPoint FlagPoint::moved(const GroupElement& g) const {
  return FlagPoint(matgroup::act_on_frame(g, frame_));
}

std::string FamilySpec::name() const {
  std::ostringstream os;
  switch (kind) {
    case FamilyKind::Sphere: os << "sphere(" << n << ")"; break;
    case FamilyKind::Grassmann: os << "grassmann(" << p << "," << q << ")"; break;
    case FamilyKind::Ball: os << "ball(" << n << ")"; break;
    case FamilyKind::Siegel: os << "siegel(" << n << ")"; break;
  }
  return os.str();
}

matgroup::GroupFamily FamilySpec::group() const {
  return kind == FamilyKind::Siegel ? matgroup::GroupFamily::Sp : matgroup::GroupFamily::SL;
}

FamilySpec FamilySpec::sphere(int n) {
  FamilySpec f = FamilySpec::ball(n);
  f.kind = FamilyKind::Sphere;
  f.normalization.lambda_scale = "real projective space RP^n = Gr_1(R^{n+1}), rho = (n+1)/2";
  return f;
}

FamilySpec FamilySpec::grassmann(int p, int q) {
  if (p < 1 || q < 1) throw Error(ErrorCode::InvalidArgument, "grassmann needs p, q >= 1");
  FamilySpec f;
  f.kind = FamilyKind::Grassmann;
  f.p = p;
  f.q = q;
  f.normalization = {0.5 * (p + q), "Gr_p(R^{p+q}) with rho = (p+q)/2", 1.0};
  f.rank_r = std::min(p, q);
  f.table_row = "A I";
  f.comp_series_R = tables::complementary_series_R(f.table_row, {0, p, q});
  return f;
}

FamilySpec FamilySpec::ball(int n) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "ball needs n >= 1");
  FamilySpec f;
  f.kind = FamilyKind::Ball;
  f.n = n;
  f.p = 1;
  f.q = n;
  f.normalization = {0.5 * (n + 1), "lambda -> (n+1)/n lambda(X_0), rho = (n+1)/2", 1.0};
  f.rank_r = 1;
  // At rank one the Wallach set is (-inf, 0] whatever c is.
  f.wallach_c = 0.0;
  f.table_row = "A I";
  f.comp_series_R = tables::complementary_series_R(f.table_row, {0, 1, n});
  return f;
}

FamilySpec FamilySpec::siegel(int n) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "siegel needs n >= 1");
  FamilySpec f;
  f.kind = FamilyKind::Siegel;
  f.n = n;
  f.p = n;
  f.q = n;
  f.normalization = {0.5 * (n + 1), "lambda -> (2/n) lambda(X_0), rho = (n+1)/2", 1.0};
  f.rank_r = n;
  f.wallach_c = 0.5;
  f.table_row = "C I";
  f.comp_series_R = tables::complementary_series_R(f.table_row, {n, n, n});
  return f;
}

FamilySpec FamilySpec::from_name(const std::string& name, int n, int p, int q) {
  if (name == "ball") return ball(n);
  if (name == "siegel") return siegel(n);
  if (name == "sphere") return sphere(n);
  if (name == "grassmann") return grassmann(p, q);
  throw Error(ErrorCode::UnsupportedFamily, "unknown family '" + name + "'");
}

double cos_kernel(const FlagPoint& b, const FlagPoint& c) {
  if (b.dim() != c.dim() || b.p() != c.p()) {
    throw Error(ErrorCode::ShapeMismatch, "cos_kernel: planes of different shape");
  }
  const double v = std::abs((b.frame().transpose() * c.frame()).determinant());
  return std::min(v, 1.0);
}

FlagPoint graph_point(const Matrix& X) {
  Matrix m(X.rows() + X.cols(), X.cols());
  m.topRows(X.cols()) = Matrix::Identity(X.cols(), X.cols());
  m.bottomRows(X.rows()) = X;
  return FlagPoint::from_spanning(m);
}

Matrix recover_X(const FlagPoint& b) {
  const int p = b.p();
  const int q = b.dim() - p;
  const Matrix top = b.frame().topRows(p);
  const auto lu = top.partialPivLu();
  if (std::abs(lu.determinant()) < matgroup::kCellTolerance) {
    throw Error(ErrorCode::OutsideOpenCell, "plane does not project onto the first p coordinates");
  }
  // bottom * top^-1 via top^T Z^T = bottom^T.
  return top.transpose().partialPivLu().solve(b.frame().bottomRows(q).transpose()).transpose();
}

OrbitLabel classify_orbit(const FlagPoint& b, int p, int q) {
  const Eigen::VectorXd ev = restricted_form_eigs(b, p, q);
  int minus = 0;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (std::abs(ev(i)) < kDegenerateTolerance) {
      std::ostringstream os;
      os << "restricted form is degenerate (eigenvalue " << ev(i) << ")";
      throw Error(ErrorCode::DegeneratePlane, os.str());
    }
    if (ev(i) < 0.0) ++minus;
  }
  return label_from_minus(p, minus);
}

double orbit_gap(const FlagPoint& b, int p, int q) {
  return restricted_form_eigs(b, p, q).cwiseAbs().minCoeff();
}

OrbitLabel classify_chart(const FamilySpec& family, const Matrix& X) {
  if (X.rows() != family.chart_rows() || X.cols() != family.chart_cols()) {
    throw Error(ErrorCode::ShapeMismatch, "chart coordinate has the wrong shape");
  }
  switch (family.kind) {
    case FamilyKind::Ball:
    case FamilyKind::Sphere: {
      const double r = X.norm();
      if (std::abs(r - 1.0) < kDegenerateTolerance) {
        throw Error(ErrorCode::DegeneratePlane, "point on the sphere |x| = 1");
      }
      return label_from_minus(1, r > 1.0 ? 1 : 0);
    }
    case FamilyKind::Siegel: {
      const Eigen::VectorXd mu =
          Eigen::SelfAdjointEigenSolver<Matrix>(X, Eigen::EigenvaluesOnly).eigenvalues();
      int outside = 0;
      for (Eigen::Index i = 0; i < mu.size(); ++i) {
        if (std::abs(std::abs(mu(i)) - 1.0) < kDegenerateTolerance) {
          throw Error(ErrorCode::DegeneratePlane, "eigenvalue of y on the unit circle");
        }
        if (std::abs(mu(i)) > 1.0) ++outside;
      }
      return label_from_minus(family.n, outside);
    }
    case FamilyKind::Grassmann:
      return classify_orbit(graph_point(X), family.p, family.q);
  }
  throw Error(ErrorCode::UnsupportedFamily, "unknown family");
}

Matrix cayley(const Matrix& y) {
  const Matrix I = Matrix::Identity(y.rows(), y.cols());
  const auto lu = (I + y).partialPivLu();
  if (std::abs(lu.determinant()) < matgroup::kCellTolerance) {
    throw Error(ErrorCode::OutsideOpenCell, "I + y is singular");
  }
  // (I - y) and (I + y)^-1 commute.
  return lu.solve(I - y);
}

OrbitLabel siegel_cayley_label(const Matrix& y) {
  const Matrix x = cayley(y);
  const Matrix xs = 0.5 * (x + x.transpose());
  const Eigen::VectorXd ev =
      Eigen::SelfAdjointEigenSolver<Matrix>(xs, Eigen::EigenvaluesOnly).eigenvalues();
  int negative = 0;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (std::abs(ev(i)) < kDegenerateTolerance) {
      throw Error(ErrorCode::DegeneratePlane, "Cayley transform is singular");
    }
    if (ev(i) < 0.0) ++negative;
  }
  return label_from_minus(static_cast<int>(y.rows()), negative);
}

OrbitLabel make_label(const FamilySpec& family, int j) {
  if (j < 0 || j > family.rank_r) {
    std::ostringstream os;
    os << "orbit label " << j << " is outside [0, " << family.rank_r << "] for " << family.name();
    throw Error(ErrorCode::InvalidLabel, os.str());
  }
  return label_from_minus(family.p, j);
}

std::vector<Matrix> sample_orbit_coords(const FamilySpec& family, const OrbitLabel& label,
                                        int count, std::uint64_t seed, double margin) {
  const OrbitLabel want = make_label(family, label.j);
  if (want.plus != label.plus || want.minus != label.minus) {
    throw Error(ErrorCode::InvalidLabel, "inconsistent orbit signature");
  }
  if (count < 0) throw Error(ErrorCode::InvalidArgument, "negative sample count");
  matgroup::Rng rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<Matrix> out;
  out.reserve(static_cast<std::size_t>(count));
  long attempts = 0;
  const long budget = kMaxAttemptsPerPoint * std::max(count, 1);
  while (static_cast<int>(out.size()) < count) {
    if (++attempts > budget) {
      throw Error(ErrorCode::InvalidLabel, "rejection sampler could not reach orbit " +
                                               std::to_string(label.j) + " of " + family.name());
    }
    switch (family.kind) {
      case FamilyKind::Ball:
      case FamilyKind::Sphere: {
        Matrix x = ball_vector(family.n, normal, rng);
        const double r = x.norm();
        const bool ok = label.j == 0 ? r < 1.0 - margin : r > 1.0 + margin;
        if (ok) out.push_back(std::move(x));
        break;
      }
      case FamilyKind::Siegel: {
        Matrix y = goe(family.n, normal, rng);
        const Eigen::VectorXd mu =
            Eigen::SelfAdjointEigenSolver<Matrix>(y, Eigen::EigenvaluesOnly).eigenvalues();
        int outside = 0;
        bool clear = true;
        for (Eigen::Index i = 0; i < mu.size(); ++i) {
          const double a = std::abs(mu(i));
          if (std::abs(a - 1.0) <= margin) clear = false;
          if (a > 1.0) ++outside;
        }
        if (clear && outside == label.j) out.push_back(std::move(y));
        break;
      }
      case FamilyKind::Grassmann: {
        Matrix v(family.p + family.q, family.p);
        for (Eigen::Index j = 0; j < v.cols(); ++j)
          for (Eigen::Index i = 0; i < v.rows(); ++i) v(i, j) = normal(rng);
        const Matrix top = v.topRows(family.p);
        if (std::abs(top.determinant()) < 1e-8) break;
        Matrix X = v.bottomRows(family.q) * top.inverse();
        const FlagPoint b = graph_point(X);
        const Eigen::VectorXd ev = restricted_form_eigs(b, family.p, family.q);
        if (ev.cwiseAbs().minCoeff() <= margin) break;
        if ((ev.array() < 0.0).count() == label.j) out.push_back(std::move(X));
        break;
      }
    }
  }
  return out;
}

std::vector<FlagPoint> sample_orbit_flags(const FamilySpec& family, const OrbitLabel& label,
                                          int count, std::uint64_t seed, double margin) {
  std::vector<FlagPoint> out;
  for (const Matrix& X : sample_orbit_coords(family, label, count, seed, margin)) {
    out.push_back(graph_point(X));
  }
  return out;
}

FlagPoint base_point(int p, int q, int j) {
  if (j < 0 || j > std::min(p, q)) throw Error(ErrorCode::InvalidLabel, "base_point: bad j");
  Matrix f = Matrix::Zero(p + q, p);
  for (int i = 0; i < p - j; ++i) f(i, i) = 1.0;
  for (int i = 0; i < j; ++i) f(p + i, p - j + i) = 1.0;
  return FlagPoint::from_frame(std::move(f));
}

GroupElement random_stabilizer(int p, int q, int j, matgroup::Rng& rng, double scale) {
  if (j < 0 || j > std::min(p, q)) throw Error(ErrorCode::InvalidLabel, "random_stabilizer: bad j");
  // Positive and negative coordinates of b_j and of its complement.
  std::vector<int> pos1, neg1, pos2, neg2;
  for (int i = 0; i < p - j; ++i) pos1.push_back(i);
  for (int i = 0; i < j; ++i) neg1.push_back(p + i);
  for (int i = p - j; i < p; ++i) pos2.push_back(i);
  for (int i = p + j; i < p + q; ++i) neg2.push_back(i);

  std::normal_distribution<double> normal(0.0, scale);
  Matrix X = Matrix::Zero(p + q, p + q);
  auto antisym = [&](const std::vector<int>& idx) {
    for (std::size_t a = 0; a < idx.size(); ++a)
      for (std::size_t b = a + 1; b < idx.size(); ++b) {
        const double v = normal(rng);
        X(idx[a], idx[b]) = v;
        X(idx[b], idx[a]) = -v;
      }
  };
  auto boost = [&](const std::vector<int>& pos, const std::vector<int>& neg) {
    for (int a : pos)
      for (int b : neg) {
        const double v = normal(rng);
        X(a, b) = v;
        X(b, a) = v;
      }
  };
  antisym(pos1);
  antisym(neg1);
  antisym(pos2);
  antisym(neg2);
  boost(pos1, neg1);
  boost(pos2, neg2);
  Matrix h = X.exp();

  // Reach the other components: a reflection in each block keeps det = 1.
  std::bernoulli_distribution flip(0.5);
  std::vector<int> block1 = pos1, block2 = pos2;
  block1.insert(block1.end(), neg1.begin(), neg1.end());
  block2.insert(block2.end(), neg2.begin(), neg2.end());
  if (!block1.empty() && !block2.empty() && flip(rng)) {
    std::uniform_int_distribution<std::size_t> pick1(0, block1.size() - 1);
    std::uniform_int_distribution<std::size_t> pick2(0, block2.size() - 1);
    h.row(block1[pick1(rng)]) *= -1.0;
    h.row(block2[pick2(rng)]) *= -1.0;
  }
  return GroupElement::sl(std::move(h), p, q);
}

}  // namespace berezin::rspace
