#include "twistor/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>

#include "twistor/errors.hpp"

namespace twistor {

namespace {

QuadRule make_gauss_legendre(int n) {
  QuadRule r;
  r.nodes.resize(n);
  r.weights.resize(n);
  // Newton on P_n with the three-term recurrence; initial guesses from the
  // Chebyshev asymptotic. Standard and stable for any practical n.
  for (int i = 0; i < n; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
      }
      pp = n * (x * p0 - p1) / (x * x - 1.0);
      double dx = p0 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    r.nodes[n - 1 - i] = x;
    r.weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * pp * pp);
  }
  return r;
}

std::map<int, QuadRule> g_gl_cache;
std::map<int, QuadRule> g_gc_cache;
std::mutex g_cache_mutex;

}  // namespace

const QuadRule& gauss_legendre(int n) {
  require(n >= 1, "gauss_legendre: n >= 1");
  std::lock_guard<std::mutex> lock(g_cache_mutex);
  auto it = g_gl_cache.find(n);
  if (it == g_gl_cache.end()) it = g_gl_cache.emplace(n, make_gauss_legendre(n)).first;
  return it->second;
}

QuadRule gauss_legendre_on(int n, double a, double b) {
  const QuadRule& base = gauss_legendre(n);
  QuadRule r;
  r.nodes.resize(n);
  r.weights.resize(n);
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  for (int i = 0; i < n; ++i) {
    r.nodes[i] = mid + half * base.nodes[i];
    r.weights[i] = half * base.weights[i];
  }
  return r;
}

const QuadRule& gauss_chebyshev01(int n) {
  require(n >= 1, "gauss_chebyshev01: n >= 1");
  std::lock_guard<std::mutex> lock(g_cache_mutex);
  auto it = g_gc_cache.find(n);
  if (it == g_gc_cache.end()) {
    QuadRule r;
    r.nodes.resize(n);
    r.weights.assign(n, M_PI / n);
    for (int q = 0; q < n; ++q) {
      // ascending in u
      r.nodes[q] = 0.5 * (1.0 + std::cos(M_PI * (2.0 * (n - q) - 1.0) / (2.0 * n)));
    }
    it = g_gc_cache.emplace(n, std::move(r)).first;
  }
  return it->second;
}

}  // namespace twistor
