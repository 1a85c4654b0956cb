#include "berezin/ospos.hpp"

#include "berezin/error.hpp"
#include "berezin/quadrature.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <numbers>
#include <sstream>

namespace berezin::ospos {

namespace {

using cd = std::complex<double>;
constexpr double kPi = std::numbers::pi;

cd disk_kernel(double nu, cd z, cd w) { return std::pow(1.0 - z * std::conj(w), -nu); }

struct DiskRule {
  std::vector<cd> z;
  std::vector<double> weight;  // includes r dr dtheta and the Bergman weight
};

DiskRule disk_rule(double nu, const DiskGrid& g) {
  const quadrature::Rule radial = quadrature::gauss_legendre(g.radial_nodes, 0.0, 1.0);
  const quadrature::Rule angular = quadrature::periodic_trapezoid(g.angular_nodes, 0.0, 2.0 * kPi);
  const double c = bergman_normalization(nu);
  DiskRule out;
  for (int i = 0; i < radial.size(); ++i) {
    const double r = radial.nodes(i);
    const double wr = radial.weights(i) * r * c * std::pow(1.0 - r * r, nu - 2.0);
    for (int j = 0; j < angular.size(); ++j) {
      out.z.push_back(std::polar(r, angular.nodes(j)));
      out.weight.push_back(wr * angular.weights(j));
    }
  }
  return out;
}

struct SegmentRule {
  std::vector<double> x;
  std::vector<double> wf;  // weight times function value
};

SegmentRule segment_rule(const SegmentFunction& f, int nodes, double margin) {
  if (!(f.lo < f.hi) || f.lo < -1.0 + margin || f.hi > 1.0 - margin) {
    throw Error(ErrorCode::InvalidArgument, "segment function support must lie in [-1+margin, 1-margin]");
  }
  const quadrature::Rule q = quadrature::gauss_legendre(nodes, f.lo, f.hi);
  SegmentRule out;
  for (int i = 0; i < q.size(); ++i) {
    out.x.push_back(q.nodes(i));
    out.wf.push_back(q.weights(i) * f.fn(q.nodes(i)));
  }
  return out;
}

}  // namespace

Eigen::VectorXd HilbertQuotient::embed(const Eigen::VectorXd& v) const {
  if (v.size() != gram_.rows()) throw Error(ErrorCode::ShapeMismatch, "coefficient vector size");
  return kept_eigs_.cwiseSqrt().cwiseProduct(kept_vecs_.transpose() * v);
}

HilbertQuotient gns_quotient(const std::vector<Matrix>& points, const kernel::BerezinKernelSpec& spec,
                             double tol) {
  HilbertQuotient q;
  q.points_ = points;
  q.spec_ = spec;
  q.tol_ = tol;
  q.gram_ = kernel::gram_matrix(spec, points);
  const kernel::GramReport rep = kernel::certify(q.gram_);
  if (!rep.psd) {
    std::ostringstream os;
    os << "Gram matrix is not positive semidefinite (min eigenvalue " << rep.min_eig << ")";
    throw Error(ErrorCode::NotPositive, os.str());
  }
  const Eigen::SelfAdjointEigenSolver<Matrix> es(q.gram_);
  const Eigen::VectorXd& ev = es.eigenvalues();
  const double cut = tol * std::max(1.0, ev.size() ? ev(ev.size() - 1) : 0.0);
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = ev.size() - 1; i >= 0; --i) {
    if (ev(i) > cut) keep.push_back(i);
  }
  q.kept_eigs_.resize(static_cast<Eigen::Index>(keep.size()));
  q.kept_vecs_.resize(q.gram_.rows(), static_cast<Eigen::Index>(keep.size()));
  for (std::size_t k = 0; k < keep.size(); ++k) {
    q.kept_eigs_(k) = ev(keep[k]);
    q.kept_vecs_.col(k) = es.eigenvectors().col(keep[k]);
  }
  return q;
}

double invariance_check(const HilbertQuotient& quotient, const matgroup::GroupElement& h,
                        bool require_h) {
  const kernel::BerezinKernelSpec& spec = quotient.spec();
  if (require_h) {
    const matgroup::GroupElement t = matgroup::apply_involution(h, matgroup::Involution::Tau);
    const double d = (t.matrix() - h.matrix()).cwiseAbs().maxCoeff();
    if (d > 1e-9 * std::max(1.0, h.matrix().cwiseAbs().maxCoeff())) {
      throw Error(ErrorCode::InvalidArgument, "h is not fixed by tau");
    }
  }
  const auto& pts = quotient.base_points();
  const std::size_t N = pts.size();
  std::vector<Matrix> moved(N);
  std::vector<double> c(N);
  for (std::size_t i = 0; i < N; ++i) {
    moved[i] = matgroup::nbar_action(h, pts[i]);
    c[i] = kernel::invariance_cocycle(spec, h, pts[i]);
    if (require_h &&
        rspace::classify_chart(spec.family, moved[i]) != rspace::classify_chart(spec.family, pts[i])) {
      throw Error(ErrorCode::OutsideOpenCell, "moved point left its orbit");
    }
  }
  double defect = 0.0;
  for (std::size_t i = 0; i < N; ++i) {
    for (std::size_t j = i; j < N; ++j) {
      const double lhs = kernel::kappa(spec, moved[i], moved[j]) * c[i] * c[j];
      defect = std::max(defect, std::abs(lhs - quotient.gram()(i, j)));
    }
  }
  return defect;
}

std::complex<double> hw_kernel(const HighestWeightKernel& k, const Eigen::VectorXcd& z,
                               const Eigen::VectorXcd& w) {
  if (z.size() != k.n || w.size() != k.n) throw Error(ErrorCode::ShapeMismatch, "hw_kernel: dimension");
  if (k.nu == 0.0) return 1.0;
  const cd ip = (z.array() * w.array().conjugate()).sum();
  return std::pow(1.0 - ip, -k.nu);
}

double bergman_normalization(double nu) {
  if (!(nu > 1.0)) {
    std::ostringstream os;
    os << "weighted Bergman integral diverges for nu = " << nu << " <= 1";
    throw Error(ErrorCode::DivergentWeight, os.str());
  }
  return (nu - 1.0) / kPi;
}

double bergman_reproduce_check(double nu, cd u, cd w, const DiskGrid& grid) {
  const DiskRule rule = disk_rule(nu, grid);
  cd lhs = 0.0;
  for (std::size_t k = 0; k < rule.z.size(); ++k) {
    lhs += rule.weight[k] * disk_kernel(nu, rule.z[k], u) * std::conj(disk_kernel(nu, rule.z[k], w));
  }
  return std::abs(lhs / disk_kernel(nu, w, u) - 1.0);
}

SegmentFunction bump(double center, double radius) {
  SegmentFunction f;
  f.lo = center - radius;
  f.hi = center + radius;
  f.fn = [center, radius](double x) {
    const double t = (x - center) / radius;
    return std::abs(t) < 1.0 ? std::exp(-1.0 / (1.0 - t * t)) : 0.0;
  };
  return f;
}

IsometryResult tmu_isometry_check(double nu, const SegmentFunction& f, const SegmentFunction& g,
                                  int segment_nodes, const DiskGrid& grid, double margin) {
  const DiskRule disk = disk_rule(nu, grid);
  const SegmentRule sf = segment_rule(f, segment_nodes, margin);
  const SegmentRule sg = segment_rule(g, segment_nodes, margin);

  IsometryResult res;
  cd lhs = 0.0;
  for (std::size_t k = 0; k < disk.z.size(); ++k) {
    cd tf = 0.0;
    cd tg = 0.0;
    for (std::size_t i = 0; i < sf.x.size(); ++i) tf += disk_kernel(nu, disk.z[k], sf.x[i]) * sf.wf[i];
    for (std::size_t i = 0; i < sg.x.size(); ++i) tg += disk_kernel(nu, disk.z[k], sg.x[i]) * sg.wf[i];
    lhs += disk.weight[k] * tf * std::conj(tg);
  }
  double rhs = 0.0;
  for (std::size_t i = 0; i < sf.x.size(); ++i)
    for (std::size_t j = 0; j < sg.x.size(); ++j)
      rhs += sf.wf[i] * sg.wf[j] * std::pow(std::abs(1.0 - sf.x[i] * sg.x[j]), -nu);
  res.lhs = lhs.real();
  res.rhs = rhs;
  res.relative_error = std::abs(lhs - rhs) / std::abs(rhs);
  return res;
}

}  // namespace berezin::ospos
