#include "berezin/error.hpp"
#include "berezin/rspace.hpp"
#include "support.hpp"

#include <doctest.h>

#include <numbers>
#include <set>

using namespace berezin;
using namespace berezin::rspace;
using matgroup::Rng;
using testing::code_of;
using testing::gaussian;
using testing::max_abs;

namespace {

FlagPoint line(double x, double y) {
  Matrix v(2, 1);
  v << x, y;
  return FlagPoint::from_spanning(v);
}

}  // namespace

TEST_CASE("family invariants") {
  for (int n : {1, 2, 3, 5}) {
    const FamilySpec b = FamilySpec::ball(n);
    CHECK(b.rank_r == 1);
    CHECK(b.rho() == doctest::Approx(0.5 * (n + 1)));
    const FamilySpec s = FamilySpec::siegel(n);
    CHECK(s.rank_r == n);
    CHECK(s.rho() == doctest::Approx(0.5 * (n + 1)));
    CHECK(s.wallach_c.value() == 0.5);
  }
  for (auto [p, q] : {std::pair{1, 2}, {2, 2}, {2, 3}, {3, 1}}) {
    const FamilySpec g = FamilySpec::grassmann(p, q);
    CHECK(g.rank_r == std::min(p, q));
    CHECK(g.rho() == doctest::Approx(0.5 * (p + q)));
    CHECK_FALSE(g.wallach_c.has_value());
  }
  CHECK(FamilySpec::grassmann(2, 2).comp_series_R.value() == 2.0);
  CHECK(FamilySpec::grassmann(2, 3).comp_series_R.value() == 0.0);
  CHECK(FamilySpec::siegel(4).comp_series_R.value() == 2.0);
  CHECK(FamilySpec::siegel(3).comp_series_R.value() == 0.0);
  CHECK(FamilySpec::from_name("ball", 3).name() == "ball(3)");
  CHECK(FamilySpec::from_name("grassmann", 0, 2, 3).name() == "grassmann(2,3)");
  CHECK(code_of([] { FamilySpec::from_name("torus", 2); }) == ErrorCode::UnsupportedFamily);
}

TEST_CASE("cos_kernel examples") {
  Rng rng(1);
  const FlagPoint b = FlagPoint::from_spanning(gaussian(5, 2, rng));
  CHECK(cos_kernel(b, b) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(cos_kernel(line(1, 0), line(0, 1)) == doctest::Approx(0.0));
  for (double t : {0.1, 1.0, 2.5, -0.7}) {
    CHECK(cos_kernel(line(1, 0), line(std::cos(t), std::sin(t))) == doctest::Approx(std::abs(std::cos(t))).epsilon(1e-14));
  }
  CHECK(code_of([&] { cos_kernel(b, line(1, 0)); }) == ErrorCode::ShapeMismatch);
}

TEST_CASE("cos_kernel is symmetric, bounded and basis invariant") {
  Rng rng(2);
  for (int k = 0; k < 100; ++k) {
    const FlagPoint b = FlagPoint::from_spanning(gaussian(5, 2, rng));
    const FlagPoint c = FlagPoint::from_spanning(gaussian(5, 2, rng));
    const double v = cos_kernel(b, c);
    CHECK(v >= 0.0);
    CHECK(v <= 1.0 + 1e-14);
    CHECK(std::abs(v - cos_kernel(c, b)) < 1e-14);
    const Matrix O = matgroup::random_k(1, 1, rng).matrix();
    const FlagPoint rotated = FlagPoint::from_frame(b.frame() * O);
    CHECK(std::abs(cos_kernel(rotated, c) - v) < 1e-10);
  }
}

TEST_CASE("graph_point examples") {
  const FlagPoint b0 = graph_point(Matrix::Zero(3, 2));
  CHECK(max_abs(b0.projector() - FlagPoint::from_spanning(Matrix::Identity(5, 2)).projector()) < 1e-15);
  Matrix one(1, 1);
  one << 1.0;
  const FlagPoint d = graph_point(one);
  CHECK(std::abs(std::abs(d.frame()(0, 0)) - std::sqrt(0.5)) < 1e-15);
  CHECK(std::abs(d.frame()(0, 0) - d.frame()(1, 0)) < 1e-15);
  Rng rng(3);
  for (int k = 0; k < 100; ++k) {
    const Matrix X = gaussian(3, 2, rng);
    CHECK(max_abs(recover_X(graph_point(X)) - X) < 1e-10);
  }
  CHECK(code_of([] { FlagPoint::from_frame(Matrix::Ones(3, 1)); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("classify_orbit examples") {
  for (auto [p, q] : {std::pair{1, 1}, {1, 2}, {2, 2}, {2, 3}}) {
    CHECK(classify_orbit(base_point(p, q, 0), p, q).j == 0);
    CHECK(classify_orbit(base_point(p, q, p), p, q).j == p);
    for (int j = 0; j <= p; ++j) {
      const OrbitLabel l = classify_orbit(base_point(p, q, j), p, q);
      CHECK(l.j == j);
      CHECK(l.plus == p - j);
      CHECK(l.minus == j);
    }
  }
  CHECK(code_of([] { classify_orbit(line(1, 1), 1, 1); }) == ErrorCode::DegeneratePlane);
}

TEST_CASE("orbit samplers") {
  const FamilySpec ball = FamilySpec::ball(2);
  for (const Matrix& x : sample_orbit_coords(ball, {0, 1, 0}, 100, 4)) CHECK(x.norm() < 1.0 - 1e-3);
  for (const Matrix& x : sample_orbit_coords(ball, {1, 0, 1}, 100, 4)) CHECK(x.norm() > 1.0 + 1e-3);

  const FamilySpec sg = FamilySpec::siegel(2);
  for (const Matrix& y : sample_orbit_coords(sg, {1, 1, 1}, 100, 5)) {
    const double a = y(0, 0), b = y(0, 1), c = y(1, 1);
    CHECK(std::abs(b - y(1, 0)) < 1e-15);
    CHECK(-std::abs(a + c) < 1.0 + a * c - b * b);
    CHECK(1.0 + a * c - b * b < std::abs(a + c));
    CHECK(siegel_cayley_label(y) == classify_chart(sg, y));
  }
  for (int j = 0; j <= 2; ++j) {
    for (const Matrix& y : sample_orbit_coords(sg, make_label(sg, j), 30, 6)) {
      CHECK(classify_chart(sg, y).j == j);
      CHECK(siegel_cayley_label(y).j == j);
    }
  }

  const auto a1 = sample_orbit_coords(ball, {0, 1, 0}, 20, 99);
  const auto a2 = sample_orbit_coords(ball, {0, 1, 0}, 20, 99);
  for (std::size_t i = 0; i < a1.size(); ++i) CHECK(max_abs(a1[i] - a2[i]) == 0.0);

  CHECK(code_of([&] { make_label(ball, 2); }) == ErrorCode::InvalidLabel);
  CHECK(code_of([&] { sample_orbit_coords(ball, {3, 0, 3}, 5, 1); }) == ErrorCode::InvalidLabel);

  const FamilySpec gr = FamilySpec::grassmann(2, 3);
  for (int j = 0; j <= 2; ++j) {
    const OrbitLabel l = make_label(gr, j);
    for (const FlagPoint& b : sample_orbit_flags(gr, l, 20, 7)) CHECK(classify_orbit(b, 2, 3) == l);
  }
}

TEST_CASE("orbit labels are H-invariant") {
  Rng rng(8);
  for (auto [p, q] : {std::pair{1, 2}, {2, 2}, {2, 3}}) {
    const FamilySpec gr = FamilySpec::grassmann(p, q);
    int checked = 0;
    for (int j = 0; j <= p; ++j) {
      const auto pts = sample_orbit_flags(gr, make_label(gr, j), 20, 10 + j, 0.05);
      for (const FlagPoint& b : pts) {
        for (int k = 0; k < 5; ++k) {
          const auto h = matgroup::random_h(matgroup::GroupFamily::SL, p, q, rng, 0.7);
          CHECK(classify_orbit(b.moved(h), p, q).j == j);
          ++checked;
        }
      }
    }
    CHECK(checked == 100 * (p + 1));
  }
}

TEST_CASE("stabilizer elements fix the base points") {
  Rng rng(9);
  for (auto [p, q] : {std::pair{1, 2}, {2, 2}, {2, 3}}) {
    for (int j = 0; j <= p; ++j) {
      const FlagPoint bj = base_point(p, q, j);
      for (int k = 0; k < 20; ++k) {
        const GroupElement h = random_stabilizer(p, q, j, rng);
        const Matrix I = matgroup::signature_matrix(p, q);
        CHECK(max_abs(h.matrix().transpose() * I * h.matrix() - I) < 1e-12);
        CHECK(max_abs(bj.moved(h).projector() - bj.projector()) < 1e-12);
      }
    }
  }
}

TEST_CASE("sampling finds exactly p + 1 open orbits") {
  for (auto [p, q] : {std::pair{1, 1}, {1, 2}, {2, 2}, {2, 3}, {3, 3}, {3, 4}, {4, 4}}) {
    Rng rng(100 + p * 10 + q);
    std::set<int> seen;
    for (int k = 0; k < 4000; ++k) {
      const FlagPoint b = FlagPoint::from_spanning(gaussian(p + q, p, rng));
      try {
        seen.insert(classify_orbit(b, p, q).j);
      } catch (const Error&) {
      }
    }
    CHECK(static_cast<int>(seen.size()) == p + 1);
  }
}

TEST_CASE("chart classification matches the plane classification") {
  Rng rng(10);
  const FamilySpec gr = FamilySpec::grassmann(2, 2);
  for (int k = 0; k < 200; ++k) {
    const Matrix X = gaussian(2, 2, rng);
    try {
      CHECK(classify_chart(gr, X) == classify_orbit(graph_point(X), 2, 2));
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::DegeneratePlane);
    }
  }
  const FamilySpec ball = FamilySpec::ball(3);
  Matrix x = Matrix::Zero(3, 1);
  x(1, 0) = 0.5;
  CHECK(classify_chart(ball, x).j == 0);
  x(1, 0) = 1.5;
  CHECK(classify_chart(ball, x).j == 1);
}
