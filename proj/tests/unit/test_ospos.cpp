#include "berezin/error.hpp"
#include "berezin/ospos.hpp"
#include "oracle_values.hpp"
#include "support.hpp"

#include <doctest.h>

using namespace berezin;
using namespace berezin::ospos;
using rspace::FamilySpec;
using testing::code_of;
using testing::gaussian;

using cd = std::complex<double>;

TEST_CASE("quotient rank examples") {
  const FamilySpec b2 = FamilySpec::ball(2);
  const auto pts = rspace::sample_orbit_coords(b2, {0, 1, 0}, 32, 11);
  CHECK(gns_quotient(pts, {b2, 0.0}).rank() == 1);
  const HilbertQuotient q = gns_quotient(pts, {b2, -0.5});
  CHECK(q.rank() == 32);
  CHECK(q.tol() == kDefaultQuotientTol);

  auto dup = pts;
  dup.push_back(pts[5]);
  const HilbertQuotient qd = gns_quotient(dup, {b2, -0.5});
  CHECK(qd.rank() < static_cast<int>(dup.size()));
  Eigen::VectorXd v = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dup.size()));
  v(5) = 1.0;
  v(32) = -1.0;
  CHECK(qd.quotient_norm2(v) <= 1e-6);

  const auto o1 = rspace::sample_orbit_coords(b2, {1, 0, 1}, 16, 3);
  CHECK(code_of([&] { gns_quotient(o1, {b2, -0.5}); }) == ErrorCode::NotPositive);
}

TEST_CASE("quotient norm consistency and rank monotonicity") {
  const FamilySpec b2 = FamilySpec::ball(2);
  matgroup::Rng rng(12);
  for (double e : {-0.5, -2.0, 0.0}) {
    const auto pts = rspace::sample_orbit_coords(b2, {0, 1, 0}, 48, 13);
    const HilbertQuotient q = gns_quotient(pts, {b2, e});
    const double gnorm = q.gram().norm();
    for (int k = 0; k < 50; ++k) {
      const Eigen::VectorXd v = gaussian(48, 1, rng);
      const double direct = v.dot(q.gram() * v);
      CHECK(std::abs(q.quotient_norm2(v) - direct) <= 1e-6 * gnorm);
    }
    int last = 0;
    for (int n : {4, 8, 16, 32, 48}) {
      const std::vector<matgroup::Matrix> sub(pts.begin(), pts.begin() + n);
      const int r = gns_quotient(sub, {b2, e}).rank();
      CHECK(r >= last);
      last = r;
    }
  }
}

TEST_CASE("invariance defect") {
  const FamilySpec b2 = FamilySpec::ball(2);
  const auto pts = rspace::sample_orbit_coords(b2, {0, 1, 0}, 16, 21);
  const HilbertQuotient q = gns_quotient(pts, {b2, -1.0});
  CHECK(invariance_check(q, matgroup::GroupElement::identity(matgroup::GroupFamily::SL, 1, 2)) == 0.0);
  matgroup::Rng rng(22);
  for (int k = 0; k < 20; ++k) {
    CHECK(invariance_check(q, matgroup::random_h(matgroup::GroupFamily::SL, 1, 2, rng)) <= 1e-8);
  }
  const matgroup::GroupElement g = matgroup::random_sl(1, 2, rng);
  CHECK(code_of([&] { invariance_check(q, g); }) == ErrorCode::InvalidArgument);
  double generic = 0.0;
  for (int k = 0; k < 10; ++k) {
    try {
      generic = std::max(generic, invariance_check(q, matgroup::random_sl(1, 2, rng), false));
    } catch (const Error&) {
    }
  }
  CHECK(generic >= 1e-2);
}

TEST_CASE("highest-weight kernel") {
  const HighestWeightKernel k{2, 1.7};
  CHECK(hw_kernel(k, Eigen::VectorXcd::Zero(2), Eigen::VectorXcd::Zero(2)) == cd(1.0));
  CHECK(hw_kernel({2, 0.0}, Eigen::VectorXcd::Constant(2, cd(0.3, 0.2)), Eigen::VectorXcd::Constant(2, 0.1)) == cd(1.0));
  matgroup::Rng rng(31);
  const FamilySpec b2 = FamilySpec::ball(2);
  double worst = 0.0;
  for (int i = 0; i < 10000; ++i) {
    Eigen::VectorXd x = gaussian(2, 1, rng);
    Eigen::VectorXd y = gaussian(2, 1, rng);
    x /= 1.0 + x.norm();
    y /= 1.0 + y.norm();
    const double nu = 0.25 * (i % 13);
    const cd h = hw_kernel({2, nu}, x.cast<cd>(), y.cast<cd>());
    const double kap = kernel::kappa({b2, -nu}, x, y);
    worst = std::max(worst, std::abs(h - kap) / std::abs(kap));
  }
  CHECK(worst <= 1e-12);
  const cd zw = hw_kernel(k, Eigen::VectorXcd::Constant(2, cd(0.2, 0.4)), Eigen::VectorXcd::Constant(2, cd(0.2, 0.4)));
  CHECK(std::abs(zw.imag()) < 1e-15);
  CHECK(zw.real() > 0.0);
}

TEST_CASE("weighted Bergman space") {
  CHECK(bergman_normalization(3.0) == doctest::Approx(oracle::kBergmanC3).epsilon(1e-15));
  CHECK(code_of([] { bergman_normalization(1.0); }) == ErrorCode::DivergentWeight);
  CHECK(code_of([] { bergman_reproduce_check(0.5, 0.0, 0.0); }) == ErrorCode::DivergentWeight);
  CHECK(bergman_reproduce_check(3.0, 0.0, 0.0) <= 1e-12);
  CHECK(bergman_reproduce_check(3.0, 0.3, cd(-0.2, 0.1)) <= 1e-6);
  CHECK(bergman_reproduce_check(2.5, cd(0.1, -0.3), cd(0.4, 0.2)) <= 1e-6);
}

TEST_CASE("T_mu isometry") {
  const IsometryResult tiny = tmu_isometry_check(3.0, bump(0.0, 0.01), bump(0.0, 0.01));
  // int exp(-1/(1 - t^2)) over (-1, 1)
  const double mass = 0.01 * 0.44399381616807943;
  CHECK(tiny.relative_error <= 1e-3);
  CHECK(tiny.rhs == doctest::Approx(mass * mass).epsilon(1e-3));
  CHECK(tiny.lhs == doctest::Approx(mass * mass).epsilon(1e-3));
  const IsometryResult r = tmu_isometry_check(3.0, bump(0.3, 0.2), bump(-0.3, 0.2));
  CHECK(r.relative_error <= 1e-3);
  const IsometryResult same = tmu_isometry_check(3.0, bump(0.3, 0.2), bump(0.3, 0.2));
  CHECK(same.lhs > 0.0);
  CHECK(same.rhs > 0.0);
  CHECK(code_of([] { tmu_isometry_check(3.0, bump(0.9, 0.2), bump(0.0, 0.2)); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([] { tmu_isometry_check(1.0, bump(0.0, 0.2), bump(0.0, 0.2)); }) == ErrorCode::DivergentWeight);
}
