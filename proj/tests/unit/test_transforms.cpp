#include "berezin/error.hpp"
#include "berezin/transforms.hpp"
#include "oracle_values.hpp"
#include "support.hpp"

#include <doctest.h>

#include <random>

using namespace berezin;
using namespace berezin::transforms;
using testing::code_of;

namespace {

double max_error(const std::vector<SpectrumEntry>& es) {
  double e = 0.0;
  for (const SpectrumEntry& s : es) e = std::max(e, std::abs(*s.analytic - *s.measured));
  return e;
}

double theta_of(const Eigen::VectorXd& u) { return std::atan2(u(1), u(0)); }

}  // namespace

TEST_CASE("eta at lambda = rho") {
  for (int n : {1, 2, 3, 4}) {
    const double rho = 0.5 * (n + 1);
    CHECK(std::abs(eta_spectrum(n, 0, rho).value - 1.0) < 1e-12);
    for (int m = 1; m <= 6; ++m) {
      const EtaValue v = eta_spectrum(n, m, rho);
      CHECK_FALSE(v.pole);
      CHECK(v.value == 0.0);
    }
  }
}

TEST_CASE("eta against high-precision values") {
  for (const oracle::EtaCase& c : oracle::kEta) {
    const EtaValue v = eta_spectrum(c.n, c.m, c.lambda);
    CAPTURE(c.n);
    CAPTURE(c.m);
    CAPTURE(c.lambda);
    CHECK_FALSE(v.pole);
    CHECK(std::abs(v.value - c.value) <= 1e-13 * std::max(1.0, std::abs(c.value)));
  }
}

TEST_CASE("eta pole bookkeeping") {
  // lambda - rho + 1 = 0 with nothing cancelling the numerator pole.
  CHECK(eta_spectrum(1, 1, 0.0).pole);
  CHECK(eta_spectrum(1, 0, 0.0).pole);
  CHECK(eta_spectrum(2, 3, -1.5).pole);
  // On S^2 at lambda - rho = -3 both Gamma(-1) and Gamma(0) are poles; the
  // ratio is 1/(-1) and eta_0 = -Gamma(3/2)/sqrt(pi).
  const EtaValue cancelled = eta_spectrum(2, 0, -1.5);
  CHECK_FALSE(cancelled.pole);
  CHECK(std::abs(cancelled.value + 0.5) < 1e-15);
  CHECK(code_of([] { eta_spectrum(0, 0, 1.0); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("composition identity on every K-type") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> lam(-6.0, 6.0);
  int tested = 0;
  double worst = 0.0;
  for (int n : {1, 2}) {
    int found = 0;
    while (found < 100) {
      const double l = lam(rng);
      const EtaValue a0 = eta_spectrum(n, 0, l);
      const EtaValue b0 = eta_spectrum(n, 0, -l);
      if (a0.pole || b0.pole) continue;
      bool ok = true;
      for (int m = 0; m <= 20 && ok; ++m) ok = !eta_spectrum(n, m, l).pole && !eta_spectrum(n, m, -l).pole;
      if (!ok) continue;
      ++found;
      const double rhs = a0.value * b0.value;
      for (int m = 0; m <= 20; ++m) {
        const double lhs = eta_spectrum(n, m, l).value * eta_spectrum(n, m, -l).value;
        worst = std::max(worst, std::abs(lhs - rhs) / std::abs(rhs));
        ++tested;
      }
    }
  }
  CHECK(tested == 2 * 100 * 21);
  CHECK(worst <= 1e-10);
}

TEST_CASE("coslambda_apply examples") {
  const SphereGrid c = SphereGrid::circle(4096);
  const EvenFunction one = EvenFunction::sample(c, [](const Eigen::VectorXd&) { return 1.0; });
  const Eigen::VectorXd at_rho = coslambda_apply(one, 1.0, c).values();
  CHECK((at_rho.array() - 1.0).abs().maxCoeff() < 1e-12);
  for (double l : {2.0, 3.0, 4.7}) {
    const Eigen::VectorXd v = coslambda_apply(one, l, c).values();
    CHECK((v.array() - eta_spectrum(1, 0, l).value).abs().maxCoeff() < 1e-6);
  }
  const EvenFunction z2 = zonal_harmonic(c, 1);
  const Eigen::VectorXd out = coslambda_apply(z2, 2.0, c).values();
  CHECK((out - eta_spectrum(1, 1, 2.0).value * z2.values()).cwiseAbs().maxCoeff() < 1e-6);

  const SphereGrid s = SphereGrid::sphere2(32, 64);
  const EvenFunction one2 = EvenFunction::sample(s, [](const Eigen::VectorXd&) { return 1.0; });
  CHECK((coslambda_apply(one2, 1.5, s).values().array() - 1.0).abs().maxCoeff() < 1e-12);
  CHECK(code_of([&] { coslambda_apply(one, 0.05, c); }) == ErrorCode::SingularExponent);
}

TEST_CASE("sinlambda_apply examples") {
  const SphereGrid c = SphereGrid::circle(4096);
  const double l = 2.0;
  const EvenFunction one = EvenFunction::sample(c, [](const Eigen::VectorXd&) { return 1.0; });
  CHECK((sinlambda_apply(one, l, c).values().array() - eta_spectrum(1, 0, l).value).abs().maxCoeff() < 1e-6);
  const EvenFunction z2 = EvenFunction::sample(c, [](const Eigen::VectorXd& u) { return std::cos(2 * theta_of(u)); });
  CHECK((sinlambda_apply(z2, l, c).values() + eta_spectrum(1, 1, l).value * z2.values()).cwiseAbs().maxCoeff() < 1e-6);
  const double l4 = 2.6;
  const EvenFunction z4 = EvenFunction::sample(c, [](const Eigen::VectorXd& u) { return std::cos(4 * theta_of(u)); });
  CHECK((sinlambda_apply(z4, l4, c).values() - eta_spectrum(1, 2, l4).value * z4.values()).cwiseAbs().maxCoeff() < 1e-6);
  const SphereGrid s = SphereGrid::sphere2(8, 16);
  const EvenFunction one2 = EvenFunction::sample(s, [](const Eigen::VectorXd&) { return 1.0; });
  CHECK(code_of([&] { sinlambda_apply(one2, 2.0, s); }) == ErrorCode::UnsupportedFamily);
}

TEST_CASE("measure_spectrum examples") {
  const SphereGrid c = SphereGrid::circle(4096);
  const auto flat = measure_spectrum(1.0, c, 4);
  CHECK(std::abs(*flat[0].measured - 1.0) < 1e-12);
  for (int m = 1; m <= 4; ++m) CHECK(std::abs(*flat[m].measured) < 1e-12);
  CHECK(max_error(measure_spectrum(3.0, c, 4)) <= 1e-6);

  const SphereGrid s = SphereGrid::sphere2(128, 256);
  const auto flat2 = measure_spectrum(1.5, s, 3);
  CHECK(std::abs(*flat2[0].measured - 1.0) < 1e-12);
  for (int m = 1; m <= 3; ++m) CHECK(std::abs(*flat2[m].measured) < 1e-12);
  CHECK(max_error(measure_spectrum(2.5, s, 3)) <= 1e-5);
}

TEST_CASE("reduced and direct measurements agree") {
  const SphereGrid c = SphereGrid::circle(256);
  const auto a = measure_spectrum(2.3, c, 4);
  const auto b = measure_spectrum_direct(2.3, c, 4);
  for (int m = 0; m <= 4; ++m) CHECK(std::abs(*a[m].measured - *b[m].measured) < 1e-12);
  const SphereGrid s = SphereGrid::sphere2(24, 48);
  const auto a2 = measure_spectrum(2.1, s, 3);
  const auto b2 = measure_spectrum_direct(2.1, s, 3);
  for (int m = 0; m <= 3; ++m) CHECK(std::abs(*a2[m].measured - *b2[m].measured) < 1e-12);
}

TEST_CASE("the transform is self-adjoint on the grid") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> nd;
  for (const SphereGrid& g : {SphereGrid::circle(512), SphereGrid::sphere2(24, 48)}) {
    Eigen::VectorXd a(g.size()), b(g.size());
    for (int i = 0; i < g.size(); ++i) {
      const int j = g.antipode(i);
      if (j < i) continue;
      a(i) = a(j) = nd(rng);
      b(i) = b(j) = nd(rng);
    }
    const EvenFunction f = EvenFunction::from_values(g, a);
    const EvenFunction h = EvenFunction::from_values(g, b);
    for (double l : {0.9 * g.dimension(), 2.4, 3.0}) {
      const double lhs = grid_inner(g, coslambda_apply(f, l, g), h);
      const double rhs = grid_inner(g, f, coslambda_apply(h, l, g));
      CHECK(std::abs(lhs - rhs) < 1e-8);
    }
  }
  Eigen::VectorXd odd = Eigen::VectorXd::Zero(8);
  odd(0) = 1.0;
  CHECK(code_of([&] { EvenFunction::from_values(SphereGrid::circle(8), odd); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("grid refinement on the circle") {
  // The kernel |cos|^s is C^infinity away from its zero set; the uniform rule
  // converges like N^-(s+1) there, so a halving gains at least 10x once s >= 2.5.
  for (double s : {2.5, 3.0, 3.5, 4.5}) {
    const double e1 = max_error(measure_spectrum(1.0 + s, SphereGrid::circle(64), 4));
    const double e2 = max_error(measure_spectrum(1.0 + s, SphereGrid::circle(128), 4));
    CAPTURE(s);
    CHECK(e2 * 10.0 <= e1);
  }
  // At s = 1 the kink gives second-order convergence.
  const double k1 = max_error(measure_spectrum(2.0, SphereGrid::circle(64), 4));
  const double k2 = max_error(measure_spectrum(2.0, SphereGrid::circle(128), 4));
  CHECK(k1 / k2 > 3.5);
  CHECK(k1 / k2 < 4.5);
}

TEST_CASE("spectrum csv format") {
  const auto es = measure_spectrum(2.0, SphereGrid::circle(64), 1);
  const std::string csv = spectrum_csv(es, 2.0);
  CHECK(csv.rfind("m,lambda,analytic,measured,abs_error,pole_flag\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
}
