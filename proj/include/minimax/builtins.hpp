#pragma once

#include "minimax/kkt.hpp"

#include <string>
#include <vector>

namespace minimax {

/// Corpus entry with its point of interest and the verdicts it was built to
/// produce. `kkt` is false when the point is only a lower-level evaluation
/// point or not stationary for the full problem.
struct Builtin {
  std::string name;
  LQDocument doc;
  PrimalDualPoint point;
  bool kkt = true;
  bool expect_lower_ju = true;
  bool expect_ju = true;
  bool expect_property_a = true;
  int expect_oracle = -1;  // -1 not run, 0 fail, 1 pass
  double expect_value_hessian = 0.0;  // checked when has_value_hessian
  bool has_value_hessian = false;
};

std::vector<Builtin> builtin_corpus();
/// Throws std::invalid_argument for an unknown name.
Builtin builtin(const std::string& name);

/// f = xy - y^2/2 + theta x
LQDocument parametric_p1();
/// P3 with G = -x + theta, theta0 = 0.01
LQDocument parametric_p3();

/// Nonlinear family f = A(x - theta^3) - y^2/2 with A(s) = s atan(s) - ln(1+s^2)/2,
/// so phi(x) = A(x - theta^3) and x(theta) = theta^3.
ParametricProblemSpec atan_family(double theta0 = 0.5);

}  // namespace minimax
