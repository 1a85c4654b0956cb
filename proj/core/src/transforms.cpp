#include "berezin/transforms.hpp"

#include "berezin/error.hpp"
#include "berezin/quadrature.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_sf_gamma.h>
#include <gsl/gsl_sf_legendre.h>

#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

namespace berezin::transforms {

namespace {

constexpr double kPi = std::numbers::pi;

double rho_of(int n) { return 0.5 * (n + 1); }

bool is_nonpositive_integer(double x) {
  const double r = std::round(x);
  return r <= 0.0 && std::abs(x - r) <= 1e-12 * std::max(1.0, std::abs(x));
}

double log_abs_gamma(double x, double& sign) {
  gsl_sf_result r;
  gsl_set_error_handler_off();
  if (gsl_sf_lngamma_sgn_e(x, &r, &sign) != GSL_SUCCESS) {
    throw Error(ErrorCode::InvalidArgument, "log-gamma failed");
  }
  return r.val;
}

void check_exponent(double s, double margin) {
  if (!(s > -1.0 + margin)) {
    std::ostringstream os;
    os << "exponent lambda - rho = " << s << " is not above -1 + " << margin
       << "; use eta_spectrum instead";
    throw Error(ErrorCode::SingularExponent, os.str());
  }
}

double kernel_power(double c, double s) {
  const double a = std::abs(c);
  if (s == 0.0) return 1.0;
  if (a < 1e-14) return 0.0;  // the limit for s > 0; a dropped pair for s < 0
  return std::pow(a, s);
}

double zonal_value(const SphereGrid& grid, int m, int i) {
  if (grid.dimension() == 1) {
    const double theta = 2.0 * kPi * i / grid.size();
    return std::cos(2.0 * m * theta);
  }
  return gsl_sf_legendre_Pl(2 * m, grid.cos_theta()(i / grid.n_phi()));
}

}  // namespace

SphereGrid SphereGrid::circle(int n_nodes) {
  if (n_nodes < 4 || n_nodes % 4 != 0) {
    throw Error(ErrorCode::InvalidArgument, "circle grid size must be a positive multiple of 4");
  }
  SphereGrid g;
  g.dim_ = 1;
  g.n_phi_ = n_nodes;
  g.nodes_.resize(n_nodes, 2);
  for (int k = 0; k < n_nodes; ++k) {
    const double theta = 2.0 * kPi * k / n_nodes;
    g.nodes_(k, 0) = std::cos(theta);
    g.nodes_(k, 1) = std::sin(theta);
  }
  g.weights_ = Eigen::VectorXd::Constant(n_nodes, 1.0 / n_nodes);
  return g;
}

SphereGrid SphereGrid::sphere2(int n_theta, int n_phi) {
  if (n_theta < 1 || n_phi < 2 || n_phi % 2 != 0) {
    throw Error(ErrorCode::InvalidArgument, "sphere grid needs n_theta >= 1 and even n_phi");
  }
  const quadrature::Rule gl = quadrature::gauss_legendre(n_theta);
  SphereGrid g;
  g.dim_ = 2;
  g.n_theta_ = n_theta;
  g.n_phi_ = n_phi;
  g.t_ = gl.nodes;
  g.tw_ = gl.weights;
  g.nodes_.resize(n_theta * n_phi, 3);
  g.weights_.resize(n_theta * n_phi);
  for (int i = 0; i < n_theta; ++i) {
    const double t = gl.nodes(i);
    const double st = std::sqrt(std::max(0.0, 1.0 - t * t));
    for (int j = 0; j < n_phi; ++j) {
      const double phi = 2.0 * kPi * j / n_phi;
      const int k = i * n_phi + j;
      g.nodes_(k, 0) = st * std::cos(phi);
      g.nodes_(k, 1) = st * std::sin(phi);
      g.nodes_(k, 2) = t;
      g.weights_(k) = gl.weights(i) / (2.0 * n_phi);
    }
  }
  return g;
}

int SphereGrid::antipode(int i) const {
  if (dim_ == 1) return (i + size() / 2) % size();
  const int it = i / n_phi_;
  const int jp = i % n_phi_;
  return (n_theta_ - 1 - it) * n_phi_ + (jp + n_phi_ / 2) % n_phi_;
}

EvenFunction EvenFunction::from_values(const SphereGrid& grid, Eigen::VectorXd values) {
  if (values.size() != grid.size()) throw Error(ErrorCode::ShapeMismatch, "value count != grid size");
  for (int i = 0; i < grid.size(); ++i) {
    if (std::abs(values(i) - values(grid.antipode(i))) > 1e-10) {
      throw Error(ErrorCode::InvalidArgument, "function is not even under u -> -u");
    }
  }
  return EvenFunction(std::move(values));
}

EvenFunction EvenFunction::sample(const SphereGrid& grid,
                                  const std::function<double(const Eigen::VectorXd&)>& f) {
  Eigen::VectorXd v(grid.size());
  for (int i = 0; i < grid.size(); ++i) v(i) = f(grid.nodes().row(i).transpose());
  return from_values(grid, std::move(v));
}

EtaValue eta_spectrum(int n, int m, double lambda) {
  if (n < 1 || m < 0) throw Error(ErrorCode::InvalidArgument, "eta_spectrum needs n >= 1, m >= 0");
  const double s = lambda - rho_of(n);
  const double a = 0.5 * (s + 1.0);
  const double b = 0.5 * (s + n + 1.0) + m;

  // Gamma(-s/2 + m) / Gamma(-s/2) as a finite product.
  double poch = 1.0;
  for (int k = 0; k < m; ++k) poch *= -0.5 * s + k;
  const double sign_m = (m % 2 == 0) ? 1.0 : -1.0;
  const double prefactor = std::exp(std::lgamma(0.5 * (n + 1)) - 0.5 * std::log(kPi));

  const bool a_pole = is_nonpositive_integer(a);
  const bool b_pole = is_nonpositive_integer(b);
  if (a_pole && b_pole) {
    // Both Gammas sit on poles; their ratio is 1/(a)_N with N = b - a.
    const int N = static_cast<int>(std::lround(b - a));
    double rising = 1.0;
    for (int k = 0; k < N; ++k) rising *= std::round(a) + k;
    return {false, sign_m * prefactor * poch / rising};
  }
  if (a_pole) return {true, 0.0};
  if (b_pole || poch == 0.0) return {false, 0.0};

  double sa = 1.0;
  double sb = 1.0;
  const double la = log_abs_gamma(a, sa);
  const double lb = log_abs_gamma(b, sb);
  return {false, sign_m * prefactor * poch * sa * sb * std::exp(la - lb)};
}

double grid_inner(const SphereGrid& grid, const EvenFunction& f, const EvenFunction& h) {
  return (grid.weights().array() * f.values().array() * h.values().array()).sum();
}

EvenFunction coslambda_apply(const EvenFunction& f, double lambda, const SphereGrid& grid,
                             double margin) {
  const double s = lambda - rho_of(grid.dimension());
  check_exponent(s, margin);
  const int N = grid.size();
  if (f.values().size() != N) throw Error(ErrorCode::ShapeMismatch, "function/grid size mismatch");
  const Eigen::MatrixXd& X = grid.nodes();
  const Eigen::VectorXd wf = grid.weights().cwiseProduct(f.values());
  Eigen::VectorXd out(N);
#if defined(BEREZIN_HAVE_OPENMP)
#pragma omp parallel for schedule(static)
#endif
  for (int i = 0; i < N; ++i) {
    double acc = 0.0;
    for (int j = 0; j < N; ++j) acc += kernel_power(X.row(i).dot(X.row(j)), s) * wf(j);
    out(i) = acc;
  }
  // Enforce exact evenness; the two halves agree up to rounding.
  for (int i = 0; i < N; ++i) {
    const int k = grid.antipode(i);
    if (k > i) out(i) = out(k) = 0.5 * (out(i) + out(k));
  }
  return EvenFunction::from_values(grid, std::move(out));
}

EvenFunction sinlambda_apply(const EvenFunction& f, double lambda, const SphereGrid& grid,
                             double margin) {
  if (grid.dimension() != 1) {
    throw Error(ErrorCode::UnsupportedFamily, "sin^lambda is only realised on the circle");
  }
  const EvenFunction c = coslambda_apply(f, lambda, grid, margin);
  const int N = grid.size();
  Eigen::VectorXd out(N);
  for (int i = 0; i < N; ++i) out(i) = c.values()((i + N / 4) % N);
  return EvenFunction::from_values(grid, std::move(out));
}

EvenFunction zonal_harmonic(const SphereGrid& grid, int m) {
  if (m < 0) throw Error(ErrorCode::InvalidArgument, "negative harmonic degree");
  Eigen::VectorXd v(grid.size());
  for (int i = 0; i < grid.size(); ++i) v(i) = zonal_value(grid, m, i);
  return EvenFunction::from_values(grid, std::move(v));
}

std::vector<SpectrumEntry> measure_spectrum(double lambda, const SphereGrid& grid, int m_max,
                                            double margin) {
  const int n = grid.dimension();
  const double s = lambda - rho_of(n);
  check_exponent(s, margin);
  if (m_max < 0) throw Error(ErrorCode::InvalidArgument, "m_max must be nonnegative");
  std::vector<SpectrumEntry> out;

  if (n == 1) {
    // Circulant kernel: Fourier modes are exact eigenvectors of the discrete sum.
    const int N = grid.size();
    Eigen::VectorXd row(N);
    for (int k = 0; k < N; ++k) row(k) = kernel_power(std::cos(2.0 * kPi * k / N), s) / N;
    for (int m = 0; m <= m_max; ++m) {
      double acc = 0.0;
      for (int k = 0; k < N; ++k) acc += row(k) * std::cos(2.0 * m * 2.0 * kPi * k / N);
      SpectrumEntry e;
      e.m = m;
      const EtaValue eta = eta_spectrum(n, m, lambda);
      if (!eta.pole) e.analytic = eta.value;
      e.measured = acc;
      out.push_back(e);
    }
    return out;
  }

  // S^2: the zonal function depends on the ring only, so the phi sums can be
  // done once per ring pair.
  const int nt = grid.n_theta();
  const int np = grid.n_phi();
  const Eigen::VectorXd& t = grid.cos_theta();
  const Eigen::VectorXd& tw = grid.cos_theta_weights();
  Eigen::VectorXd cphi(np);
  for (int d = 0; d < np; ++d) cphi(d) = std::cos(2.0 * kPi * d / np);
  Eigen::MatrixXd ring(nt, nt);
#if defined(BEREZIN_HAVE_OPENMP)
#pragma omp parallel for schedule(dynamic)
#endif
  for (int i = 0; i < nt; ++i) {
    const double si = std::sqrt(std::max(0.0, 1.0 - t(i) * t(i)));
    for (int k = i; k < nt; ++k) {
      const double sk = std::sqrt(std::max(0.0, 1.0 - t(k) * t(k)));
      double acc = 0.0;
      for (int d = 0; d < np; ++d) acc += kernel_power(t(i) * t(k) + si * sk * cphi(d), s);
      ring(i, k) = ring(k, i) = acc / np;
    }
  }
  const Eigen::VectorXd hw = 0.5 * tw;  // ring masses, summing to 1
  for (int m = 0; m <= m_max; ++m) {
    Eigen::VectorXd P(nt);
    for (int i = 0; i < nt; ++i) P(i) = gsl_sf_legendre_Pl(2 * m, t(i));
    const Eigen::VectorXd wp = hw.cwiseProduct(P);
    SpectrumEntry e;
    e.m = m;
    const EtaValue eta = eta_spectrum(n, m, lambda);
    if (!eta.pole) e.analytic = eta.value;
    e.measured = wp.dot(ring * wp) / wp.dot(P);
    out.push_back(e);
  }
  return out;
}

std::vector<SpectrumEntry> measure_spectrum_direct(double lambda, const SphereGrid& grid,
                                                   int m_max, double margin) {
  std::vector<SpectrumEntry> out;
  for (int m = 0; m <= m_max; ++m) {
    const EvenFunction f = zonal_harmonic(grid, m);
    const EvenFunction cf = coslambda_apply(f, lambda, grid, margin);
    SpectrumEntry e;
    e.m = m;
    const EtaValue eta = eta_spectrum(grid.dimension(), m, lambda);
    if (!eta.pole) e.analytic = eta.value;
    e.measured = grid_inner(grid, cf, f) / grid_inner(grid, f, f);
    out.push_back(e);
  }
  return out;
}

std::string spectrum_csv(const std::vector<SpectrumEntry>& entries, double lambda) {
  std::string out = "m,lambda,analytic,measured,abs_error,pole_flag\n";
  char buf[64];
  auto num = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };
  for (const auto& e : entries) {
    out += std::to_string(e.m) + "," + num(lambda) + ",";
    out += e.analytic ? num(*e.analytic) : std::string();
    out += ",";
    out += e.measured ? num(*e.measured) : std::string();
    out += ",";
    out += (e.analytic && e.measured) ? num(std::abs(*e.analytic - *e.measured)) : std::string();
    out += e.pole() ? ",1\n" : ",0\n";
  }
  return out;
}

}  // namespace berezin::transforms
