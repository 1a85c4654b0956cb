#include "berezin/kernel.hpp"

#include "berezin/error.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace berezin::kernel {

namespace {

using rspace::FamilyKind;

double det_base(const Matrix& x, const Matrix& y) {
  const Eigen::Index p = x.cols();
  return (Matrix::Identity(p, p) - x.transpose() * y).determinant();
}

double base_power(double base, double e, double scale) {
  if (e == 0.0) return 1.0;
  const double a = std::abs(base);
  if (a <= 1e-14 * scale) {
    if (e > 0.0) return 0.0;
    throw Error(ErrorCode::KernelSingular, "kernel base vanishes with a negative exponent");
  }
  return std::pow(a, e);
}

void check_shape(const rspace::FamilySpec& f, const Matrix& x) {
  if (x.rows() != f.chart_rows() || x.cols() != f.chart_cols()) {
    std::ostringstream os;
    os << "chart coordinate must be " << f.chart_rows() << "x" << f.chart_cols() << ", got "
       << x.rows() << "x" << x.cols();
    throw Error(ErrorCode::ShapeMismatch, os.str());
  }
}

ScanPoint scan_point(const BerezinKernelSpec& spec, const std::vector<Matrix>& pts, double tol) {
  const GramReport r = gram(spec, pts, tol);
  return {spec.lambda_minus_rho, r.min_eig / std::max(1.0, std::abs(r.max_eig)), r.psd};
}

}  // namespace

double kappa(const BerezinKernelSpec& spec, const Matrix& x, const Matrix& y) {
  check_shape(spec.family, x);
  check_shape(spec.family, y);
  const double scale = 1.0 + x.norm() * y.norm();
  return base_power(det_base(x, y), spec.lambda_minus_rho, std::pow(scale, x.cols()));
}

double kappa_via_group(const BerezinKernelSpec& spec, const Matrix& x, const Matrix& y) {
  check_shape(spec.family, x);
  check_shape(spec.family, y);
  const auto fam = spec.family.group();
  const matgroup::GroupElement t =
      matgroup::apply_involution(matgroup::nbar(fam, -x), matgroup::Involution::Tau);
  return matgroup::alpha_power(t * matgroup::nbar(fam, y), spec.lambda_minus_rho,
                               spec.family.normalization);
}

Matrix gram_matrix(const BerezinKernelSpec& spec, const std::vector<Matrix>& points) {
  const int N = static_cast<int>(points.size());
  Matrix G(N, N);
  bool failed = false;
  int bad_i = -1;
  int bad_j = -1;
#if defined(BEREZIN_HAVE_OPENMP)
#pragma omp parallel for schedule(dynamic)
#endif
  for (int i = 0; i < N; ++i) {
    for (int j = i; j < N; ++j) {
      try {
        G(i, j) = G(j, i) = kappa(spec, points[i], points[j]);
      } catch (const Error&) {
#if defined(BEREZIN_HAVE_OPENMP)
#pragma omp critical
#endif
        {
          if (!failed || i < bad_i) {
            failed = true;
            bad_i = i;
            bad_j = j;
          }
        }
      }
    }
  }
  if (failed) {
    std::ostringstream os;
    os << "kernel singular at pair (" << bad_i << ", " << bad_j << ")";
    throw Error(ErrorCode::KernelSingular, os.str());
  }
  return G;
}

GramReport certify(const Matrix& G, double tol) {
  GramReport r;
  r.size = static_cast<int>(G.rows());
  r.tol_used = tol;
  if (r.size == 0) return r;
  const Eigen::SelfAdjointEigenSolver<Matrix> es(G);
  r.eigenvalues = es.eigenvalues();
  r.min_eig = r.eigenvalues(0);
  r.max_eig = r.eigenvalues(r.size - 1);
  r.psd = r.min_eig >= -tol * std::max(1.0, std::abs(r.max_eig));
  if (!r.psd) {
    Eigen::VectorXd v = es.eigenvectors().col(0);
    // Fix the sign so the output is reproducible: largest entry positive.
    Eigen::Index k = 0;
    v.cwiseAbs().maxCoeff(&k);
    if (v(k) < 0.0) v = -v;
    r.witness_value = v.dot(G * v);
    r.witness = std::move(v);
  }
  return r;
}

GramReport gram(const BerezinKernelSpec& spec, const std::vector<Matrix>& points, double tol) {
  return certify(gram_matrix(spec, points), tol);
}

bool wallach_membership(const rspace::FamilySpec& family, double e) {
  const int r = family.rank_r;
  if (!family.wallach_c) {
    throw Error(ErrorCode::MissingConfig, "no Wallach constant configured for " + family.name());
  }
  const double c = *family.wallach_c;
  constexpr double eps = 1e-12;
  if (r == 1) return e <= eps;
  if (e < -(r - 1) * c) return true;
  for (int j = 0; j <= r - 1; ++j) {
    if (std::abs(e + j * c) <= eps) return true;
  }
  return false;
}

double two_point_form(const BerezinKernelSpec& spec, const Matrix& x, const Matrix& y) {
  const double kxy = kappa(spec, x, y);
  return (kappa(spec, x, x) - kxy) + (kappa(spec, y, y) - kxy);
}

Witness nonriemannian_witness(const rspace::FamilySpec& family, double e) {
  if (e == 0.0) {
    throw Error(ErrorCode::NoWitnessFound, "at lambda - rho = 0 the kernel is constant and psd");
  }
  const bool ball = family.kind == FamilyKind::Ball || family.kind == FamilyKind::Sphere;
  if (!ball && family.kind != FamilyKind::Siegel) {
    throw Error(ErrorCode::UnsupportedFamily, "witness search covers ball and siegel only");
  }
  const int n = family.n;
  if (n < 2) throw Error(ErrorCode::UnsupportedFamily, "witness search needs n >= 2");

  const BerezinKernelSpec spec{family, e};
  auto make = [&](double r) {
    Witness w;
    w.radius = r;
    if (ball) {
      w.x = Matrix::Zero(n, 1);
      w.y = Matrix::Zero(n, 1);
      w.x(0, 0) = r;
      w.y(1, 0) = r;
    } else {
      w.x = Matrix::Zero(n, n);
      w.y = Matrix::Zero(n, n);
      w.x(0, 0) = r;
      w.y(1, 1) = r;
    }
    w.form_value = two_point_form(spec, w.x, w.y);
    return w;
  };

  std::vector<double> radii = {2.0, 1.0 + 1e-3};
  constexpr int kScan = 2000;
  for (int k = 1; k <= kScan; ++k) radii.push_back(1.0 + 9.0 * k / kScan);
  for (double r : radii) {
    Witness w = make(r);
    if (w.form_value < 0.0) {
      const rspace::OrbitLabel lx = rspace::classify_chart(family, w.x);
      const rspace::OrbitLabel ly = rspace::classify_chart(family, w.y);
      if (lx != ly || lx.j == 0 || (!ball && lx.j == family.rank_r)) {
        throw Error(ErrorCode::NoWitnessFound, "witness pair left the non-Riemannian orbit");
      }
      w.orbit = lx;
      return w;
    }
  }
  std::ostringstream os;
  os << "no negative two-point form found at lambda - rho = " << e;
  throw Error(ErrorCode::NoWitnessFound, os.str());
}

ThresholdResult estimate_positivity_threshold(const rspace::FamilySpec& family,
                                              const rspace::OrbitLabel& label,
                                              const ThresholdOptions& opt) {
  if (!(opt.scan_lo < opt.scan_hi) || opt.coarse_steps < 2 || !(opt.width > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "bad threshold scan options");
  }
  const std::vector<Matrix> pts =
      rspace::sample_orbit_coords(family, label, opt.samples, opt.seed, opt.margin);
  const double c = family.wallach_c.value_or(0.0);
  const int r = family.rank_r;
  const double step = (opt.scan_hi - opt.scan_lo) / (opt.coarse_steps - 1);

  auto nudged = [&](double e) {
    for (int j = 0; j < r; ++j) {
      if (std::abs(e + j * c) < 1e-9) return e + 0.25 * step;
    }
    return e;
  };
  auto eval = [&](double e) { return scan_point({family, e}, pts, opt.tol); };

  ThresholdResult res;
  int first_bad = -1;
  for (int k = 0; k < opt.coarse_steps; ++k) {
    const ScanPoint sp = eval(nudged(opt.scan_lo + k * step));
    res.scan.push_back(sp);
    if (!sp.psd && first_bad < 0) first_bad = k;
    if (sp.psd && first_bad >= 0) {
      std::ostringstream os;
      os << "psd verdict returns at lambda - rho = " << sp.lambda_minus_rho
         << " after failing at " << res.scan[first_bad].lambda_minus_rho;
      throw Error(ErrorCode::InconclusiveScan, os.str());
    }
  }
  for (int j = 0; j < r; ++j) res.discrete.push_back(eval(-j * c));

  if (first_bad < 0) {
    res.lower = res.scan.back().lambda_minus_rho;
    res.upper = res.lower;
    res.endpoint_in_range = false;
    return res;
  }
  if (first_bad == 0) {
    res.lower = res.upper = res.scan.front().lambda_minus_rho;
    res.endpoint_in_range = false;
    return res;
  }
  double lo = res.scan[first_bad - 1].lambda_minus_rho;
  double hi = res.scan[first_bad].lambda_minus_rho;
  while (hi - lo > opt.width) {
    const double mid = 0.5 * (lo + hi);
    const ScanPoint sp = eval(mid);
    res.scan.push_back(sp);
    (sp.psd ? lo : hi) = mid;
  }
  res.lower = lo;
  res.upper = hi;
  res.endpoint_in_range = true;
  return res;
}

std::complex<double> berezin_form(const BerezinKernelSpec& spec, const Eigen::VectorXcd& f,
                                  const Eigen::VectorXcd& g, const std::vector<Matrix>& points,
                                  const Eigen::VectorXd& weights) {
  const Eigen::Index N = static_cast<Eigen::Index>(points.size());
  if (f.size() != N || g.size() != N || weights.size() != N) {
    throw Error(ErrorCode::ShapeMismatch, "berezin_form: sizes differ");
  }
  if ((weights.array() <= 0.0).any()) {
    throw Error(ErrorCode::InvalidArgument, "berezin_form: weights must be positive");
  }
  const Matrix G = gram_matrix(spec, points);
  const Eigen::VectorXcd wf = weights.cast<std::complex<double>>().cwiseProduct(f);
  const Eigen::VectorXcd wg = weights.cast<std::complex<double>>().cwiseProduct(g.conjugate());
  return wf.transpose() * G.cast<std::complex<double>>() * wg;
}

double f_lambda_weight(const rspace::FamilySpec& family, const Matrix& x, double lambda) {
  check_shape(family, x);
  const matgroup::GroupElement nb = matgroup::nbar(family.group(), x);
  return std::pow(matgroup::kman_a_scalar(nb, family.normalization.alpha_exponent),
                  -(lambda + family.rho()));
}

double invariance_cocycle(const BerezinKernelSpec& spec, const matgroup::GroupElement& h,
                          const Matrix& x) {
  check_shape(spec.family, x);
  const int p = h.p();
  const int q = h.q();
  const Matrix& m = h.matrix();
  const Matrix ab = m.topLeftCorner(p, p) + m.topRightCorner(p, q) * x;
  const double scale = std::pow(m.cwiseAbs().maxCoeff() * (1.0 + x.norm()), p);
  const double det = ab.determinant();
  if (std::abs(det) < matgroup::kCellTolerance * scale) {
    throw Error(ErrorCode::OutsideOpenCell, "h moves x out of the chart");
  }
  return std::pow(std::abs(det), spec.lambda_minus_rho);
}

}  // namespace berezin::kernel
