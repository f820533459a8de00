#pragma once

#include "minimax/builtins.hpp"
#include "minimax/generator.hpp"
#include "minimax/report.hpp"

#include <doctest.h>

namespace mt {

using namespace minimax;

inline ProblemSpec spec_of(const std::string& name) { return to_problem(builtin(name).doc); }
inline PrimalDualPoint point_of(const std::string& name) { return builtin(name).point; }

inline Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Index>(xs.size()));
  Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

inline Matrix mat(std::initializer_list<std::initializer_list<double>> rows) {
  const Index r = static_cast<Index>(rows.size());
  const Index c = r == 0 ? 0 : static_cast<Index>(rows.begin()->size());
  Matrix m(r, c);
  Index i = 0;
  for (const auto& row : rows) {
    Index j = 0;
    for (double x : row) m(i, j++) = x;
    ++i;
  }
  return m;
}

inline double diff(const Matrix& a, const Matrix& b) {
  REQUIRE(a.rows() == b.rows());
  REQUIRE(a.cols() == b.cols());
  return a.size() == 0 ? 0.0 : max_abs(a - b);
}

inline Vector x1(double x) { return Vector::Constant(1, x); }

/// Generated instance of a random shape satisfying the uniqueness conditions.
inline GeneratedInstance generated(std::uint64_t seed) { return generate_instance(random_config(seed)); }

}  // namespace mt
