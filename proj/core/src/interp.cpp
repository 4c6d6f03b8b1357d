#include <cmath>

#include "twistor/errors.hpp"
#include "twistor/fft.hpp"
#include "twistor/fields.hpp"

namespace twistor {

std::array<double, 4> cubic_weights(double t) {
  // Lagrange basis on stencil positions {-1, 0, 1, 2}
  const double tm = t - 1.0, tp = t + 1.0, t2 = t - 2.0;
  return {-t * tm * t2 / 6.0, tp * tm * t2 / 2.0, -t * tp * t2 / 2.0, t * tp * tm / 6.0};
}

static void assign_leg(RadialStencil& st, int q, int signed_idx, double w) {
  st.w[q] = w;
  if (signed_idx >= 0) {
    st.idx[q] = signed_idx;
    st.reflected[q] = false;
  } else {
    st.idx[q] = -1 - signed_idx;  // node at radius -r_s, value taken at phi + pi
    st.reflected[q] = true;
  }
}

RadialStencil radial_stencil(const PolarGrid& g, double r) {
  require(g.n_r >= 1, "radial_stencil: empty grid");
  const double h = g.R / g.n_r;
  const double x = r / h - 0.5;  // node i sits at x = i
  RadialStencil st;
  for (int q = 0; q < 4; ++q) assign_leg(st, q, 0, 0.0);
  if (g.n_r >= 4) {
    int i1 = (int)std::floor(x);
    // keep the stencil inside the grid at the rim; negative legs reflect
    if (i1 > g.n_r - 3) i1 = g.n_r - 3;
    const auto w = cubic_weights(x - i1);
    for (int q = 0; q < 4; ++q) assign_leg(st, q, i1 - 1 + q, w[q]);
  } else if (g.n_r >= 2) {
    // too few rings for a cubic; fall back to a linear pair
    int i0 = (int)std::floor(x);
    if (i0 > g.n_r - 2) i0 = g.n_r - 2;
    if (i0 < -1) i0 = -1;
    const double t = x - i0;
    assign_leg(st, 0, i0, 1.0 - t);
    assign_leg(st, 1, i0 + 1, t);
  } else {
    assign_leg(st, 0, 0, 1.0);  // single ring: angular interpolation only
  }
  return st;
}

PolarStencil polar_stencil(const PolarGrid& g, cplx z) {
  const double r = std::abs(z);
  double phi = std::arg(z);
  if (phi < 0) phi += 2.0 * M_PI;
  const RadialStencil rs = radial_stencil(g, r);

  const double dphi = 2.0 * M_PI / g.n_theta;
  double y = phi / dphi;
  int j1 = (int)std::floor(y);
  const auto wa = cubic_weights(y - j1);
  j1 %= g.n_theta;  // phi = 2 pi lands on column 0

  PolarStencil st;
  const int half = g.n_theta / 2;
  for (int p = 0; p < 4; ++p) {
    const int jbase = j1 + (rs.reflected[p] ? half : 0);
    for (int q = 0; q < 4; ++q) {
      int j = (jbase + q - 1) % g.n_theta;
      if (j < 0) j += g.n_theta;
      st.idx[4 * p + q] = rs.idx[p] * g.n_theta + j;
      st.w[4 * p + q] = rs.w[p] * wa[q];
    }
  }
  return st;
}

cplx gather(const PolarStencil& st, const std::vector<cplx>& v) {
  cplx acc = 0.0;
  for (int p = 0; p < 16; ++p) acc += st.w[p] * v[st.idx[p]];
  return acc;
}

int ModeField::find_mode(int k) const {
  for (size_t i = 0; i < k_values.size(); ++i)
    if (k_values[i] == k) return (int)i;
  return -1;
}

int ModeField::the_mode() const {
  require(single_mode(), "ModeField: expected a single stored mode");
  return k_values[0];
}

ModeField single_mode_field(const PolarGrid& g, int k, const std::vector<cplx>& values,
                            FieldWeight w) {
  require((int)values.size() == g.size(), "single_mode_field: size mismatch");
  ModeField f;
  f.grid = g;
  f.k_values = {k};
  f.coeffs = {values};
  f.weight = w;
  return f;
}

ModeField sample_single_mode(const PolarGrid& g, int k, const std::function<cplx(cplx)>& fn,
                             FieldWeight w) {
  std::vector<cplx> v((size_t)g.size());
  for (int i = 0; i < g.n_r; ++i)
    for (int j = 0; j < g.n_theta; ++j) v[g.index(i, j)] = fn(g.node(i, j));
  return single_mode_field(g, k, v, w);
}

cplx eval_mode(const ModeField& f, int which, cplx z) {
  return gather(polar_stencil(f.grid, z), f.coeffs[which]);
}

cplx eval_field(const ModeField& f, const ConformalMetric& m, cplx z, double theta) {
  const PolarStencil st = polar_stencil(f.grid, z);
  cplx acc = 0.0;
  for (size_t i = 0; i < f.k_values.size(); ++i)
    acc += gather(st, f.coeffs[i]) * std::exp(cplx(0.0, f.k_values[i] * theta));
  if (f.weight == FieldWeight::rho_half) {
    const double p = rho(m, z);
    require(p > 0.0, "eval_field: rho^{-1/2} field evaluated on the boundary");
    acc /= std::sqrt(p);
  }
  return acc;
}

std::vector<double> fd_weights(double x0, const std::vector<double>& xs, int m) {
  // Fornberg's recurrence, verbatim up to naming
  const int n = (int)xs.size();
  require(n >= m + 1, "fd_weights: not enough nodes for requested derivative");
  std::vector<std::vector<double>> c(n, std::vector<double>(m + 1, 0.0));
  double c1 = 1.0;
  double c4 = xs[0] - x0;
  c[0][0] = 1.0;
  for (int i = 1; i < n; ++i) {
    const int mn = std::min(i, m);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = xs[i] - x0;
    for (int j = 0; j < i; ++j) {
      const double c3 = xs[i] - xs[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k) c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
        c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
      }
      for (int k = mn; k >= 1; --k) c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
      c[j][0] = c4 * c[j][0] / c3;
    }
    c1 = c2;
  }
  std::vector<double> w(n);
  for (int j = 0; j < n; ++j) w[j] = c[j][m];
  return w;
}

DerivPair derivative_fields(const PolarGrid& g, const std::vector<cplx>& values) {
  const int nr = g.n_r, nt = g.n_theta;
  require((int)values.size() == g.size(), "derivative_fields: size mismatch");
  require(nr >= 4, "derivative_fields: need at least 4 rings");
  require(nt >= 4 && nt % 2 == 0, "derivative_fields: angular count must be even");
  const double h = g.R / nr;

  // raw ring spectra, A[mode][ring]; forward transform is unnormalized and
  // the inverse at the end divides by nt, so no explicit 1/nt anywhere
  const bool pow2 = (nt & (nt - 1)) == 0;
  std::vector<std::vector<cplx>> A(nt, std::vector<cplx>(nr));
  {
    std::vector<cplx> ring(nt);
    for (int i = 0; i < nr; ++i) {
      for (int j = 0; j < nt; ++j) ring[j] = values[g.index(i, j)];
      if (pow2) {
        fft_pow2(ring, false);
        for (int mm = 0; mm < nt; ++mm) A[mm][i] = ring[mm];
      } else {
        for (int mm = 0; mm < nt; ++mm) {
          cplx acc = 0.0;
          for (int j = 0; j < nt; ++j)
            acc += values[g.index(i, j)] *
                   cplx(std::cos(2.0 * M_PI * mm * j / nt), -std::sin(2.0 * M_PI * mm * j / nt));
          A[mm][i] = acc;
        }
      }
    }
  }

  // radial difference stencils, one set per ring (shared across modes up to
  // the parity sign on reflected legs)
  const int width = std::min(7, nr);
  struct RadFd {
    std::vector<int> pos;  // signed ring index; negative = parity ghost
    std::vector<double> w;
  };
  std::vector<RadFd> rad(nr);
  for (int i = 0; i < nr; ++i) {
    int lo = i - width / 2;
    if (lo + width - 1 > nr - 1) lo = nr - width;
    std::vector<double> xs(width);
    RadFd fd;
    fd.pos.resize(width);
    for (int q = 0; q < width; ++q) {
      fd.pos[q] = lo + q;
      xs[q] = h * (fd.pos[q] + 0.5);
    }
    fd.w = fd_weights(g.radius(i), xs, 1);
    rad[i] = fd;
  }

  std::vector<std::vector<cplx>> Bdz(nt, std::vector<cplx>(nr, cplx(0.0)));
  std::vector<std::vector<cplx>> Bdzb(nt, std::vector<cplx>(nr, cplx(0.0)));
  for (int mm = 0; mm < nt; ++mm) {
    const int ms = (mm <= nt / 2) ? mm : mm - nt;  // signed mode
    const double sgn = (ms % 2 == 0) ? 1.0 : -1.0;
    const auto& Am = A[mm];
    for (int i = 0; i < nr; ++i) {
      cplx dA = 0.0;
      for (size_t q = 0; q < rad[i].pos.size(); ++q) {
        const int p = rad[i].pos[q];
        const cplx v = (p >= 0) ? Am[p] : sgn * Am[-1 - p];
        dA += rad[i].w[q] * v;
      }
      const cplx ratio = Am[i] * (double(ms) / g.radius(i));
      // d/dz = e^{-i phi} (d_r - i d_phi / r) / 2 on A e^{i m phi}
      const int tz = ((ms - 1) % nt + nt) % nt;
      Bdz[tz][i] += 0.5 * (dA + ratio);
      const int tzb = ((ms + 1) % nt + nt) % nt;
      Bdzb[tzb][i] += 0.5 * (dA - ratio);
    }
  }

  DerivPair out;
  out.dz.assign((size_t)g.size(), cplx(0.0));
  out.dzbar.assign((size_t)g.size(), cplx(0.0));
  std::vector<cplx> spec(nt);
  for (int i = 0; i < nr; ++i) {
    for (int pass = 0; pass < 2; ++pass) {
      const auto& B = pass == 0 ? Bdz : Bdzb;
      auto& dst = pass == 0 ? out.dz : out.dzbar;
      for (int mm = 0; mm < nt; ++mm) spec[mm] = B[mm][i];
      if (pow2) {
        fft_pow2(spec, true);
        for (int j = 0; j < nt; ++j) dst[g.index(i, j)] = spec[j];
      } else {
        for (int j = 0; j < nt; ++j) {
          cplx acc = 0.0;
          for (int mm = 0; mm < nt; ++mm)
            acc += spec[mm] *
                   cplx(std::cos(2.0 * M_PI * mm * j / nt), std::sin(2.0 * M_PI * mm * j / nt));
          dst[g.index(i, j)] = acc / double(nt);
        }
      }
    }
  }
  return out;
}

BoundaryField make_boundary_field(const BoundaryGrid& g) {
  BoundaryField f;
  f.grid = g;
  f.samples.assign((size_t)g.size(), cplx(0.0));
  return f;
}

cplx eval_boundary(const BoundaryField& f, double omega, double alpha) {
  const BoundaryGrid& g = f.grid;
  const double dw = 2.0 * M_PI / g.n_omega;
  double y = omega / dw;
  y -= std::floor(y / g.n_omega) * g.n_omega;
  int j1 = (int)std::floor(y);
  const auto wo = cubic_weights(y - j1);
  j1 %= g.n_omega;

  const double s = g.s_of_alpha(alpha);
  const double ds = 2.0 / (g.n_alpha - 1);
  const double x = (s + 1.0) / ds;
  int a1 = (int)std::floor(x);
  if (a1 < 1) a1 = 1;
  if (a1 > g.n_alpha - 3) a1 = g.n_alpha - 3;
  const auto ws = cubic_weights(x - a1);

  cplx acc = 0.0;
  for (int p = 0; p < 4; ++p) {
    const int a = a1 - 1 + p;
    cplx row = 0.0;
    for (int q = 0; q < 4; ++q) {
      int j = (j1 + q - 1) % g.n_omega;
      if (j < 0) j += g.n_omega;
      row += wo[q] * f.samples[g.index(a, j)];
    }
    acc += ws[p] * row;
  }
  return acc;
}

}  // namespace twistor
