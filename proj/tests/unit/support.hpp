#pragma once

#include "berezin/error.hpp"
#include "berezin/matgroup.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <optional>
#include <random>

namespace testing {

using berezin::matgroup::Matrix;
using berezin::matgroup::Rng;

inline Matrix gaussian(int rows, int cols, Rng& rng, double scale = 1.0) {
  std::normal_distribution<double> nd(0.0, scale);
  Matrix m(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) m(i, j) = nd(rng);
  return m;
}

inline Matrix symmetric(int n, Rng& rng, double scale = 1.0) {
  const Matrix a = gaussian(n, n, rng, scale);
  return 0.5 * (a + a.transpose());
}

inline double max_abs(const Matrix& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

inline double rel_diff(double a, double b) {
  return std::abs(a - b) / std::max({1e-300, std::abs(a), std::abs(b)});
}

/// The code of the berezin::Error thrown by fn, or nullopt when fn returns.
template <class F>
std::optional<berezin::ErrorCode> code_of(F&& fn) {
  try {
    fn();
  } catch (const berezin::Error& e) {
    return e.code();
  }
  return std::nullopt;
}

}  // namespace testing
