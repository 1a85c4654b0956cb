#include "berezin/error.hpp"
#include "berezin/hls.hpp"
#include "oracle_values.hpp"
#include "support.hpp"

#include <doctest.h>

#include <random>

using namespace berezin;
using namespace berezin::hls;
using testing::code_of;

namespace {

GridFunction unit_interval(double h) {
  const int N = static_cast<int>(std::lround(1.0 / h));
  GridFunction f = GridFunction::line(0.5 * h, h, N);
  f.values().setOnes();
  return f;
}

double bump(double x, double c, double r) {
  const double t = (x - c) / r;
  return std::abs(t) < 1.0 ? std::exp(-1.0 / (1.0 - t * t)) : 0.0;
}

}  // namespace

TEST_CASE("parameters") {
  for (auto [n, l] : {std::pair{1, 0.5}, {2, 1.5}, {2, 0.1}}) {
    const HLSParams P = HLSParams::make(n, l);
    CHECK(std::abs(2.0 / P.p + l / n - 2.0) <= 1e-12);
  }
  CHECK(code_of([] { HLSParams::make(1, 1.0); }) == ErrorCode::LambdaOutOfRange);
  CHECK(code_of([] { HLSParams::make(2, 0.0); }) == ErrorCode::LambdaOutOfRange);
}

TEST_CASE("i_lambda examples") {
  for (double h : {0.5, 0.1, 0.02}) {
    const GridFunction f = unit_interval(h);
    CHECK(std::abs(i_lambda(f, f, 0.5) - oracle::kUnitIntervalHalf) < 1e-12);
  }
  // Unit square, lambda = 1: 4 (asinh(1) - (sqrt 2 - 1) / 3).
  const double square = 4.0 * (std::asinh(1.0) - (std::sqrt(2.0) - 1.0) / 3.0);
  for (double h : {0.5, 0.2}) {
    const int N = static_cast<int>(std::lround(1.0 / h));
    GridFunction f = GridFunction::plane({0.5 * h, 0.5 * h}, h, {N, N});
    f.values().setOnes();
    CHECK(std::abs(i_lambda(f, f, 1.0) - square) < 1e-10);
  }
  const GridFunction f = unit_interval(0.1);
  CHECK(code_of([&] { i_lambda(f, f, 1.0); }) == ErrorCode::LambdaOutOfRange);
  CHECK(code_of([&] { i_lambda(f, unit_interval(0.2), 0.5); }) == ErrorCode::ShapeMismatch);
}

TEST_CASE("positivity and bilinearity") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> nd;
  GridFunction a = GridFunction::line(-2.0, 0.05, 80);
  GridFunction b = a;
  GridFunction c = a;
  for (int k = 0; k < 10; ++k) {
    for (int i = 0; i < a.size(); ++i) {
      a.values()(i) = nd(rng);
      b.values()(i) = nd(rng);
      c.values()(i) = nd(rng);
    }
    for (double l : {0.2, 0.5, 0.9}) {
      CHECK(i_lambda(a, a, l) >= 0.0);
      const double s = 0.7, t = -1.3;
      const GridFunction comb = a.with_values(s * a.values() + t * b.values());
      const double lhs = i_lambda(comb, c, l);
      const double rhs = s * i_lambda(a, c, l) + t * i_lambda(b, c, l);
      CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, std::abs(rhs)));
      CHECK(std::abs(i_lambda(a, b, l) - i_lambda(b, a, l)) <= 1e-12 * std::max(1.0, std::abs(i_lambda(a, b, l))));
    }
  }
  GridFunction p = GridFunction::plane({-1.0, -1.0}, 0.1, {20, 20});
  for (int i = 0; i < p.size(); ++i) p.values()(i) = nd(rng);
  for (double l : {0.5, 1.0, 1.8}) CHECK(i_lambda(p, p, l) >= 0.0);
}

TEST_CASE("translation and rotation invariance") {
  const double h = 0.1;
  GridFunction f = GridFunction::line(-1.0, h, 30);
  f.sample([](double x, double) { return bump(x, 0.2, 0.8); });
  GridFunction g = GridFunction::line(3.7, h, 30);
  g.sample([](double x, double) { return bump(x - 4.7, 0.2, 0.8); });
  for (double l : {0.3, 0.7}) CHECK(std::abs(i_lambda(f, f, l) - i_lambda(g, g, l)) < 1e-12);

  GridFunction p = GridFunction::plane({-1.0, -0.5}, h, {20, 12});
  p.sample([](double x, double y) { return bump(x, 0.1, 0.8) * bump(y, 0.0, 0.5) * (1.0 + x); });
  GridFunction r = GridFunction::plane({-0.5, -1.0}, h, {12, 20});
  r.sample([](double x, double y) { return bump(y, 0.1, 0.8) * bump(-x, 0.0, 0.5) * (1.0 + y); });
  for (double l : {0.5, 1.5}) CHECK(std::abs(i_lambda(p, p, l) - i_lambda(r, r, l)) < 1e-12 * i_lambda(p, p, l));
}

TEST_CASE("sharp constant and optimizer") {
  for (const oracle::SharpCase& c : oracle::kSharp) {
    CHECK(sharp_constant(c.n, c.lambda) == doctest::Approx(c.value).epsilon(1e-13));
  }
  CHECK(sharp_constant(1, 0.5) == doctest::Approx(std::tgamma(0.25) / std::tgamma(0.75)).epsilon(1e-13));
  // Continuity at the lambda -> 0 end: the formula tends to 1.
  CHECK(std::abs(sharp_constant(2, 1e-6) - 1.0) < 1e-4);
  CHECK(std::abs(sharp_constant(2, 1e-6) - sharp_constant(2, 2e-6)) < 1e-5);
  CHECK(code_of([] { sharp_constant(1, 1.0); }) == ErrorCode::LambdaOutOfRange);

  CHECK(optimizer(1, 0.5, 0.0) == 1.0);
  CHECK(optimizer(1, 0.5, 1.0) == doctest::Approx(oracle::kOptimizerAtOne).epsilon(1e-15));
  for (int n : {1, 2}) {
    const double l = 0.4 * n;
    const double p = HLSParams::make(n, l).p;
    for (double x : {0.0, 0.5, 3.0, 40.0}) {
      CHECK(std::pow(optimizer(n, l, x), p) == doctest::Approx(std::pow(1.0 + x * x, -n)).epsilon(1e-13));
    }
  }
}

TEST_CASE("HLS inequality on random bumps") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 100; ++k) {
    const double l = 0.1 + 0.8 * u(rng);
    const double p = HLSParams::make(1, l).p;
    GridFunction f = GridFunction::line(-3.0 + 0.025, 0.05, 120);
    const double c1 = 4 * u(rng) - 2, r1 = 0.2 + u(rng), c2 = 4 * u(rng) - 2, r2 = 0.2 + u(rng), w = u(rng);
    f.sample([&](double x, double) { return bump(x, c1, r1) + w * bump(x, c2, r2); });
    const double n = lp_norm(f, p);
    CHECK(i_lambda(f, f, l) <= sharp_constant(1, l) * n * n);
  }
}

TEST_CASE("reflections") {
  GridFunction f = GridFunction::line(0.05, 0.1, 20);  // cells on [0, 2]
  f.values()(2) = 3.0;
  const GridFunction r = reflect(f, {0, 1.0});
  CHECK(r.values()(17) == 3.0);
  CHECK(r.values().sum() == 3.0);
  CHECK(code_of([&] { reflect(f, {0, 1.03}); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([&] { reflect(f, {0, 0.1}); }) == ErrorCode::InvalidArgument);
  CHECK(reflect(f, {0, 0.5}).values()(7) == 3.0);
  CHECK(code_of([&] { reflect(f, {1, 0.5}); }) == ErrorCode::InvalidArgument);
  GridFunction p = GridFunction::plane({0.05, 0.05}, 0.1, {10, 6});
  p.values()(1 * 6 + 4) = 2.0;
  const GridFunction pr = reflect(p, {1, 0.3});
  CHECK(pr.values()(1 * 6 + 1) == 2.0);
}

TEST_CASE("reflection positivity") {
  const double h = 0.05;
  GridFunction cell = GridFunction::line(-0.975, h, 40);
  cell.values()(5) = 1.0;
  const double v = reflection_positivity_check(cell, 0.5, {0, 0.0});
  CHECK(v > 0.0);
  GridFunction mirror = cell.with_values(Eigen::VectorXd::Zero(40));
  mirror.values()(34) = 1.0;
  CHECK(std::abs(v - i_lambda(mirror, cell, 0.5)) < 1e-15);

  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (double l : {0.2, 0.5, 0.8}) {
    for (int k = 0; k < 100; ++k) {
      GridFunction f = GridFunction::line(-1.975, h, 80);
      const double c = -1.6 * u(rng), r = 0.05 + 0.4 * u(rng), c2 = -1.6 * u(rng), s = 2 * u(rng) - 1;
      f.sample([&](double x, double) { return x < 0 ? bump(x, c, r) + s * bump(x, c2, r) : 0.0; });
      CHECK(reflection_positivity_check(f, l, {0, 0.0}) >= -1e-8 * i_lambda(f, f, l));
    }
  }
  GridFunction both = GridFunction::line(-0.975, h, 40);
  both.values()(0) = 1.0;
  both.values()(39) = 1.0;
  CHECK(code_of([&] { reflection_positivity_check(both, 0.5, {0, 0.0}); }) == ErrorCode::SupportViolation);
  // Mass right next to the hyperplane on the other side is tolerated.
  both.values()(39) = 0.0;
  both.values()(20) = 1e-3;
  CHECK_FALSE(code_of([&] { reflection_positivity_check(both, 0.5, {0, 0.0}); }).has_value());

  GridFunction half = GridFunction::plane({-0.95, -0.95}, 0.1, {20, 20});
  half.sample([](double x, double y) { return x < 0 ? bump(x, -0.5, 0.4) * bump(y, 0.1, 0.6) : 0.0; });
  for (double l : {0.5, 1.0, 1.5}) CHECK(reflection_positivity_check(half, l, {0, 0.0}) >= 0.0);
}

TEST_CASE("even-average inequality") {
  const double h = 0.05;
  GridFunction even = GridFunction::line(-0.975, h, 40);
  even.sample([](double x, double) { return bump(x, 0.4, 0.3) + bump(x, -0.4, 0.3) + bump(x, 0.0, 0.2); });
  const EvenAverageResult e = even_average_inequality(even, 0.5, {0, 0.0});
  CHECK(e.holds);
  CHECK(std::abs(e.lhs - e.rhs) <= 1e-10 * e.rhs);

  GridFunction one = GridFunction::line(-0.975, h, 40);
  one.sample([](double x, double) { return bump(x, -0.5, 0.3); });
  const EvenAverageResult o = even_average_inequality(one, 0.5, {0, 0.0});
  CHECK(o.holds);
  CHECK(o.lhs > o.rhs * (1.0 + 1e-6));

  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 100; ++k) {
    GridFunction f = GridFunction::line(-1.975, h, 80);
    const double c1 = 3 * u(rng) - 1.5, c2 = 3 * u(rng) - 1.5, r = 0.1 + 0.3 * u(rng), s = 2 * u(rng) - 1;
    f.sample([&](double x, double) { return bump(x, c1, r) + s * bump(x, c2, r); });
    const double l = 0.1 + 0.8 * u(rng);
    const EvenAverageResult res = even_average_inequality(f, l, {0, 0.0});
    CHECK(res.holds);
    CHECK(std::abs((res.lhs - res.rhs) - res.odd_form) <= 1e-10 * std::max(1.0, res.rhs));
  }

  GridFunction p = GridFunction::plane({-0.95, -0.45}, 0.1, {20, 10});
  p.sample([](double x, double y) { return bump(x, -0.3, 0.5) * bump(y, 0.0, 0.4) + 0.3 * bump(x, 0.4, 0.3); });
  const EvenAverageResult r2 = even_average_inequality(p, 1.2, {0, 0.0});
  CHECK(r2.holds);
  CHECK(std::abs((r2.lhs - r2.rhs) - r2.odd_form) <= 1e-10 * std::max(1.0, r2.rhs));
  CHECK(code_of([&] { even_average_inequality(p, 1.2, {0, 0.05}); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("optimizer Rayleigh quotient") {
  for (double l : {0.25, 0.5, 0.75}) {
    const OptimizerRayleigh coarse = optimizer_rayleigh(l, 100.0, 0.2);
    const OptimizerRayleigh fine = optimizer_rayleigh(l, 100.0, 0.1);
    CHECK(coarse.quotient < coarse.sharp);
    CHECK(fine.quotient < fine.sharp);
    CHECK(fine.relative_gap < coarse.relative_gap);
    CHECK(fine.relative_gap < 5e-3);
    // The tail handling makes the box size nearly irrelevant.
    const OptimizerRayleigh wide = optimizer_rayleigh(l, 200.0, 0.1);
    CHECK(std::abs(wide.quotient - fine.quotient) < 1e-6 * fine.quotient);
  }
  CHECK(code_of([] { optimizer_rayleigh(0.5, 10.0, 0.3); }) == ErrorCode::InvalidArgument);
  const std::string csv = rayleigh_csv({optimizer_rayleigh(0.5, 10.0, 0.5)});
  CHECK(csv.rfind("spacing,half_width,quotient,sharp,relative_gap\n", 0) == 0);
}
