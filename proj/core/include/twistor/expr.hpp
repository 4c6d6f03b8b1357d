#pragma once

#include <memory>
#include <string>

#include "twistor/metric.hpp"

namespace twistor {

// Arithmetic expression in the complex variable z, for conformal factors
// given in config files. Supported: + - * /, unary minus, parentheses,
// decimal literals, the variable z, and the functions exp, log, abs2, re,
// im (names case-insensitive; abs2(z) is |z|^2). Everything evaluates in
// complex arithmetic; callers that need a real number take the real part.
class Expr {
 public:
  static Expr parse(const std::string& text);  // throws ConfigError on bad input

  cplx eval(cplx z) const;

  struct Node;

 private:
  std::shared_ptr<const Node> root_;
};

// Metric from a config-file expression: sigma(z) = Re expr(z), derivative
// by the central-difference fallback of the custom-metric machinery.
ConformalMetric metric_from_expr(const std::string& sigma_expr, double R,
                                 bool rotationally_symmetric);

}  // namespace twistor
