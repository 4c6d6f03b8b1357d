#pragma once

#include <vector>

namespace twistor {

struct QuadRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Gauss-Legendre rule on [-1, 1] (Newton iteration on the Legendre
// recurrence; nodes accurate to machine precision).
const QuadRule& gauss_legendre(int n);

// Same rule mapped to [a, b].
QuadRule gauss_legendre_on(int n, double a, double b);

// First-kind Gauss-Chebyshev rule for integrals of the form
//   int_0^1 g(u) / sqrt(u (1-u)) du  ~=  sum_q w_q g(u_q),
// i.e. nodes u_q = (1 + cos((2q-1) pi / 2n)) / 2 and constant weight pi/n.
// The square-root endpoint singularity is absorbed exactly.
const QuadRule& gauss_chebyshev01(int n);

}  // namespace twistor
