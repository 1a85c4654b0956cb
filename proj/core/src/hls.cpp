#include "berezin/hls.hpp"

#include "berezin/error.hpp"
#include "berezin/quadrature.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_integration.h>
#include <gsl/gsl_sf_gamma.h>

#include <cmath>
#include <cstdio>
#include <memory>
#include <numbers>
#include <sstream>

namespace berezin::hls {

namespace {

constexpr double kPi = std::numbers::pi;

void check_lambda(int n, double lambda) {
  if (!(lambda > 0.0 && lambda < n)) {
    std::ostringstream os;
    os << "lambda = " << lambda << " is outside (0, " << n << ")";
    throw Error(ErrorCode::LambdaOutOfRange, os.str());
  }
}

// Unit-cell weights: w(d) = int int over [0,1]^n x (d + [0,1]^n) of |x - y|^-lambda,
// the autocorrelation of the unit cell (a tent function) against the kernel.

double w1(int d, double lambda) {
  const double a = std::abs(static_cast<double>(d));
  if (a < 16.0) {
    const double c = 1.0 / ((1.0 - lambda) * (2.0 - lambda));
    auto F = [&](double t) { return c * std::pow(std::abs(t), 2.0 - lambda); };
    return F(a + 1.0) - 2.0 * F(a) + F(a - 1.0);
  }
  // Moment expansion of int (1-|t|) (a+t)^-lambda dt; the second difference
  // above cancels badly for large a.
  const double l = lambda;
  const double c1 = l * (l + 1.0) / 12.0;
  const double c2 = c1 * (l + 2.0) * (l + 3.0) / 30.0;
  const double c3 = c2 * (l + 4.0) * (l + 5.0) / 56.0;
  const double inv2 = 1.0 / (a * a);
  return std::pow(a, -l) * (1.0 + inv2 * (c1 + inv2 * (c2 + inv2 * c3)));
}

struct Gauss {
  quadrature::Rule phi_lo, phi_hi, near, far_fine, far_coarse;
};

const Gauss& gauss() {
  static const Gauss g{quadrature::gauss_legendre(32, 0.0, kPi / 4.0),
                       quadrature::gauss_legendre(32, kPi / 4.0, kPi / 2.0),
                       quadrature::gauss_legendre(16, 0.0, 1.0),
                       quadrature::gauss_legendre(10, 0.0, 1.0),
                       quadrature::gauss_legendre(6, 0.0, 1.0)};
  return g;
}

// Tent weight (1 - |u1|)(1 - |u2|) against |(k,l) + u|^-lambda on the unit
// sub-square [a, a+1] x [b, b+1].
double subsquare(int k, int l, int a, int b, double lambda) {
  const double s1 = a == 0 ? 1.0 : -1.0;
  const double s2 = b == 0 ? 1.0 : -1.0;
  const double c1 = -k;
  const double c2 = -l;
  const bool corner = (c1 == a || c1 == a + 1) && (c2 == b || c2 == b + 1);
  const Gauss& G = gauss();
  if (corner) {
    // Polar coordinates about the singular corner; the radial integral of
    // r^(1-lambda) times a quadratic in r is done in closed form.
    const double d1 = c1 == a ? 1.0 : -1.0;
    const double d2 = c2 == b ? 1.0 : -1.0;
    const double A1 = 1.0 - s1 * c1;
    const double A2 = 1.0 - s2 * c2;
    double acc = 0.0;
    for (const quadrature::Rule* rule : {&G.phi_lo, &G.phi_hi}) {
      for (int i = 0; i < rule->size(); ++i) {
        const double phi = rule->nodes(i);
        const double cs = std::cos(phi);
        const double sn = std::sin(phi);
        const double R = 1.0 / std::max(cs, sn);
        const double p0 = A1 * A2;
        const double p1 = -(A1 * s2 * d2 * sn + A2 * s1 * d1 * cs);
        const double p2 = s1 * d1 * s2 * d2 * cs * sn;
        const double radial = p0 * std::pow(R, 2.0 - lambda) / (2.0 - lambda) +
                              p1 * std::pow(R, 3.0 - lambda) / (3.0 - lambda) +
                              p2 * std::pow(R, 4.0 - lambda) / (4.0 - lambda);
        acc += rule->weights(i) * radial;
      }
    }
    return acc;
  }
  const int dist = std::max(std::abs(k), std::abs(l));
  const quadrature::Rule& r = dist <= 1 ? G.near : (dist <= 4 ? G.far_fine : G.far_coarse);
  double acc = 0.0;
  for (int i = 0; i < r.size(); ++i) {
    const double u1 = a + r.nodes(i);
    for (int j = 0; j < r.size(); ++j) {
      const double u2 = b + r.nodes(j);
      const double t = (1.0 - s1 * u1) * (1.0 - s2 * u2);
      acc += r.weights(i) * r.weights(j) * t * std::pow(std::hypot(k + u1, l + u2), -lambda);
    }
  }
  return acc;
}

double w2(int k, int l, double lambda) {
  double acc = 0.0;
  for (int a : {-1, 0})
    for (int b : {-1, 0}) acc += subsquare(k, l, a, b, lambda);
  return acc;
}

// Adaptive quadrature through GSL.
class Integrator {
 public:
  Integrator() : ws_(gsl_integration_workspace_alloc(kLimit), &gsl_integration_workspace_free) {
    gsl_set_error_handler_off();
  }

  template <class F>
  double upper(F&& f, double a) {
    gsl_function gf{&thunk<F>, &f};
    double r = 0.0;
    double err = 0.0;
    gsl_integration_qagiu(&gf, a, 0.0, kRel, kLimit, ws_.get(), &r, &err);
    return r;
  }

  template <class F>
  double finite(F&& f, double a, double b) {
    gsl_function gf{&thunk<F>, &f};
    double r = 0.0;
    double err = 0.0;
    gsl_integration_qags(&gf, a, b, 0.0, kRel, kLimit, ws_.get(), &r, &err);
    return r;
  }

  /// int_a^b (t - a)^alpha f(t) dt.
  template <class F>
  double algebraic(F&& f, double a, double b, double alpha) {
    std::unique_ptr<gsl_integration_qaws_table, decltype(&gsl_integration_qaws_table_free)> tab(
        gsl_integration_qaws_table_alloc(alpha, 0.0, 0, 0), &gsl_integration_qaws_table_free);
    gsl_function gf{&thunk<F>, &f};
    double r = 0.0;
    double err = 0.0;
    gsl_integration_qaws(&gf, a, b, tab.get(), 0.0, kRel, kLimit, ws_.get(), &r, &err);
    return r;
  }

 private:
  static constexpr std::size_t kLimit = 2000;
  static constexpr double kRel = 1e-11;

  template <class F>
  static double thunk(double x, void* p) {
    return (*static_cast<std::remove_reference_t<F>*>(p))(x);
  }

  std::unique_ptr<gsl_integration_workspace, decltype(&gsl_integration_workspace_free)> ws_;
};

// (a^(1-l) - b^(1-l)) / (1-l) for a = b + delta, without cancellation.
double g_difference(double b, double delta, double l) {
  if (b <= 0.0) return std::pow(delta, 1.0 - l) / (1.0 - l);
  return std::pow(b, 1.0 - l) * std::expm1((1.0 - l) * std::log1p(delta / b)) / (1.0 - l);
}

struct Reflection {
  std::vector<int> mirror;  // -1 when the mirror cell is off the grid
  std::vector<int> side;    // -1, 0 (centre on H), +1
  std::vector<double> distance;
};

Reflection reflection_of(const GridFunction& f, const Hyperplane& H) {
  if (H.axis < 0 || H.axis >= f.dimension()) throw Error(ErrorCode::InvalidArgument, "bad hyperplane axis");
  const double h = f.spacing();
  const double m = 2.0 * (H.position - f.origin()[H.axis]) / h;
  const double mr = std::round(m);
  if (std::abs(m - mr) > 1e-9 * std::max(1.0, std::abs(m))) {
    throw Error(ErrorCode::InvalidArgument, "hyperplane is not aligned with the grid");
  }
  const int shift = static_cast<int>(mr);
  const auto cells = f.cells();
  Reflection r;
  r.mirror.resize(f.size());
  r.side.resize(f.size());
  r.distance.resize(f.size());
  for (int i = 0; i < f.size(); ++i) {
    int idx[2] = {i / cells[1], i % cells[1]};
    const double c = f.center(i)[H.axis];
    r.distance[i] = std::abs(c - H.position);
    r.side[i] = r.distance[i] < 1e-12 * h ? 0 : (c < H.position ? -1 : 1);
    idx[H.axis] = shift - idx[H.axis];
    const bool inside = idx[H.axis] >= 0 && idx[H.axis] < cells[H.axis];
    r.mirror[i] = inside ? idx[0] * cells[1] + idx[1] : -1;
  }
  return r;
}

}  // namespace

GridFunction GridFunction::line(double origin, double spacing, int cells) {
  if (!(spacing > 0.0) || cells < 1) throw Error(ErrorCode::InvalidArgument, "bad 1D grid");
  GridFunction g;
  g.n_ = 1;
  g.h_ = spacing;
  g.origin_ = {origin, 0.0};
  g.cells_ = {cells, 1};
  g.values_ = Eigen::VectorXd::Zero(cells);
  return g;
}

GridFunction GridFunction::plane(std::array<double, 2> origin, double spacing, std::array<int, 2> cells) {
  if (!(spacing > 0.0) || cells[0] < 1 || cells[1] < 1) throw Error(ErrorCode::InvalidArgument, "bad 2D grid");
  GridFunction g;
  g.n_ = 2;
  g.h_ = spacing;
  g.origin_ = origin;
  g.cells_ = cells;
  g.values_ = Eigen::VectorXd::Zero(cells[0] * cells[1]);
  return g;
}

double GridFunction::cell_volume() const { return n_ == 1 ? h_ : h_ * h_; }

std::array<double, 2> GridFunction::center(int i) const {
  const int a = i / cells_[1];
  const int b = i % cells_[1];
  return {origin_[0] + a * h_, n_ == 1 ? 0.0 : origin_[1] + b * h_};
}

GridFunction& GridFunction::sample(const std::function<double(double, double)>& fn) {
  for (int i = 0; i < size(); ++i) {
    const auto c = center(i);
    values_(i) = fn(c[0], c[1]);
  }
  return *this;
}

bool GridFunction::same_grid(const GridFunction& o) const {
  return n_ == o.n_ && h_ == o.h_ && origin_ == o.origin_ && cells_ == o.cells_;
}

GridFunction GridFunction::with_values(Eigen::VectorXd v) const {
  if (v.size() != size()) throw Error(ErrorCode::ShapeMismatch, "value count != grid size");
  GridFunction g = *this;
  g.values_ = std::move(v);
  return g;
}

HLSParams HLSParams::make(int n, double lambda) {
  if (n != 1 && n != 2) throw Error(ErrorCode::InvalidArgument, "only n = 1, 2 are supported");
  check_lambda(n, lambda);
  return {n, lambda, 2.0 * n / (2.0 * n - lambda)};
}

double i_lambda(const GridFunction& f, const GridFunction& h, double lambda) {
  if (!f.same_grid(h)) throw Error(ErrorCode::ShapeMismatch, "i_lambda: functions on different grids");
  const int n = f.dimension();
  check_lambda(n, lambda);
  const double scale = std::pow(f.spacing(), 2.0 * n - lambda);
  const Eigen::VectorXd& a = f.values();
  const Eigen::VectorXd& b = h.values();

  if (n == 1) {
    const int N = f.size();
    Eigen::VectorXd w(N);
    for (int d = 0; d < N; ++d) w(d) = w1(d, lambda);
    double acc = 0.0;
#if defined(BEREZIN_HAVE_OPENMP)
#pragma omp parallel for reduction(+ : acc) schedule(static)
#endif
    for (int i = 0; i < N; ++i) {
      if (a(i) == 0.0) continue;
      double row = 0.0;
      for (int j = 0; j < N; ++j) row += w(std::abs(i - j)) * b(j);
      acc += a(i) * row;
    }
    return scale * acc;
  }

  const auto cells = f.cells();
  Eigen::MatrixXd w(cells[0], cells[1]);
  for (int k = 0; k < cells[0]; ++k)
    for (int l = 0; l < cells[1]; ++l) w(k, l) = w2(k, l, lambda);
  const int N = f.size();
  double acc = 0.0;
#if defined(BEREZIN_HAVE_OPENMP)
#pragma omp parallel for reduction(+ : acc) schedule(static)
#endif
  for (int i = 0; i < N; ++i) {
    if (a(i) == 0.0) continue;
    const int i0 = i / cells[1];
    const int i1 = i % cells[1];
    double row = 0.0;
    for (int j = 0; j < N; ++j) row += w(std::abs(i0 - j / cells[1]), std::abs(i1 - j % cells[1])) * b(j);
    acc += a(i) * row;
  }
  return scale * acc;
}

double lp_norm(const GridFunction& f, double p) {
  return std::pow(f.cell_volume() * f.values().array().abs().pow(p).sum(), 1.0 / p);
}

double sharp_constant(int n, double lambda) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "n must be positive");
  check_lambda(n, lambda);
  const double log_c = 0.5 * lambda * std::log(kPi) + std::lgamma(0.5 * (n - lambda)) -
                       std::lgamma(n - 0.5 * lambda) +
                       (1.0 - lambda / n) * (std::lgamma(n) - std::lgamma(0.5 * n));
  return std::exp(log_c);
}

double optimizer(int n, double lambda, double x_norm) {
  return std::pow(1.0 + x_norm * x_norm, -0.5 * (2.0 * n - lambda));
}

GridFunction reflect(const GridFunction& f, const Hyperplane& H) {
  const Reflection r = reflection_of(f, H);
  Eigen::VectorXd v = Eigen::VectorXd::Zero(f.size());
  for (int i = 0; i < f.size(); ++i) {
    if (f.values()(i) == 0.0) continue;
    if (r.mirror[i] < 0) throw Error(ErrorCode::InvalidArgument, "reflected support leaves the grid");
    v(r.mirror[i]) = f.values()(i);
  }
  return f.with_values(std::move(v));
}

double reflection_positivity_check(const GridFunction& f, double lambda, const Hyperplane& H) {
  const Reflection r = reflection_of(f, H);
  bool neg = false;
  bool pos = false;
  for (int i = 0; i < f.size(); ++i) {
    if (f.values()(i) == 0.0 || r.distance[i] <= f.spacing() * (1.0 + 1e-12)) continue;
    (r.side[i] < 0 ? neg : pos) = true;
  }
  if (neg && pos) throw Error(ErrorCode::SupportViolation, "f has mass on both sides of the hyperplane");
  return i_lambda(reflect(f, H), f, lambda);
}

EvenAverageResult even_average_inequality(const GridFunction& f, double lambda, const Hyperplane& H) {
  const Reflection r = reflection_of(f, H);
  Eigen::VectorXd a = Eigen::VectorXd::Zero(f.size());
  Eigen::VectorXd b = Eigen::VectorXd::Zero(f.size());
  for (int i = 0; i < f.size(); ++i) {
    if (r.side[i] == 0) throw Error(ErrorCode::InvalidArgument, "hyperplane must run along cell faces");
    (r.side[i] < 0 ? a : b)(i) = f.values()(i);
  }
  const GridFunction fa = f.with_values(a);
  const GridFunction fb = f.with_values(b);
  const GridFunction ra = reflect(fa, H);
  const GridFunction rb = reflect(fb, H);
  const GridFunction fi = f.with_values(a + ra.values());
  const GridFunction fo = f.with_values(b + rb.values());

  EvenAverageResult res;
  res.lhs = 0.5 * (i_lambda(fi, fi, lambda) + i_lambda(fo, fo, lambda));
  res.rhs = i_lambda(f, f, lambda);
  // Odd part restricted to the positive side: (b - Theta a) / 2.
  const GridFunction odd_plus = f.with_values(0.5 * (b - ra.values()));
  res.odd_form = 4.0 * i_lambda(reflect(odd_plus, H), odd_plus, lambda);
  res.holds = res.lhs >= res.rhs - 1e-10 * std::max(std::abs(res.lhs), std::abs(res.rhs));
  return res;
}

OptimizerRayleigh optimizer_rayleigh(double lambda, double L, double spacing) {
  check_lambda(1, lambda);
  const double cells_real = 2.0 * L / spacing;
  const int N = static_cast<int>(std::lround(cells_real));
  if (N < 2 || std::abs(cells_real - N) > 1e-9 * cells_real) {
    throw Error(ErrorCode::InvalidArgument, "2L / spacing must be an integer >= 2");
  }
  const HLSParams P = HLSParams::make(1, lambda);
  auto h = [&](double x) { return optimizer(1, lambda, std::abs(x)); };

  GridFunction f = GridFunction::line(-L + 0.5 * spacing, spacing, N);
  f.sample([&](double x, double) { return h(x); });

  OptimizerRayleigh out;
  out.half_width = L;
  out.spacing = spacing;
  out.box_form = i_lambda(f, f, lambda);

  Integrator outer;
  Integrator inner;
  const double l = lambda;

  // Box x right tail for every cell, integrated exactly over the cell. The
  // left tail gives the same total by symmetry; both orders of the pair count.
  double cross = 0.0;
  for (int k = 0; k < N; ++k) {
    const double hi = f.center(k)[0] + 0.5 * spacing;
    const double fk = f.values()(k);
    auto integrand = [&](double y) { return h(y) * g_difference(y - hi, spacing, l); };
    cross += fk * outer.upper(integrand, L);
  }
  out.cross_form = 4.0 * cross;

  // Tail x tail: same side (twice, ordered pairs) and opposite sides.
  auto V = [&](double x) {
    auto near = [&](double t) { return h(x + t); };
    auto far = [&](double t) { return h(x + t) * std::pow(t, -l); };
    return inner.algebraic(near, 0.0, 1.0, -l) + inner.upper(far, 1.0);
  };
  auto Wo = [&](double x) {
    auto g = [&](double y) { return h(y) * std::pow(x + y, -l); };
    return inner.upper(g, L);
  };
  const double same = outer.upper([&](double x) { return h(x) * V(x); }, L);
  const double opposite = outer.upper([&](double x) { return h(x) * Wo(x); }, L);
  out.tail_form = 4.0 * same + 2.0 * opposite;

  const double tail_mass = kPi - 2.0 * std::atan(L);  // int_{|x|>L} h^p since h^p = 1/(1+x^2)
  const double box_mass = spacing * f.values().array().pow(P.p).sum();
  out.norm_p = std::pow(box_mass + tail_mass, 1.0 / P.p);
  out.quotient = (out.box_form + out.cross_form + out.tail_form) / (out.norm_p * out.norm_p);
  out.sharp = sharp_constant(1, lambda);
  out.relative_gap = 1.0 - out.quotient / out.sharp;
  return out;
}

std::string rayleigh_csv(const std::vector<OptimizerRayleigh>& rows) {
  std::string out = "spacing,half_width,quotient,sharp,relative_gap\n";
  char buf[160];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g\n", r.spacing, r.half_width,
                  r.quotient, r.sharp, r.relative_gap);
    out += buf;
  }
  return out;
}

}  // namespace berezin::hls
