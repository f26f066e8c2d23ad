#include "robin/disc.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace robin {

MagneticOffset magnetic_offset(double b) {
  if (b < 0.0) throw std::invalid_argument("magnetic_offset: b must be >= 0");
  int m0 = (int)std::floor(b / 2.0);
  double v0 = (m0 - b / 2.0) * (m0 - b / 2.0);
  double v1 = (m0 + 1 - b / 2.0) * (m0 + 1 - b / 2.0);
  MagneticOffset out;
  if (v0 <= v1) {  // ties toward the smaller m
    out.value = v0;
    out.m = m0;
  } else {
    out.value = v1;
    out.m = m0 + 1;
  }
  return out;
}

std::vector<double> disc_effective_lambda(double h, double b, int count) {
  if (!(h > 0.0 && h < 1.0)) throw std::invalid_argument("disc_effective_lambda: h in (0,1)");
  auto off = magnetic_offset(b);
  std::vector<double> vals;
  int span = count + 3;
  for (int m = off.m - span; m <= off.m + span; ++m) {
    double q = m - b / 2.0;
    vals.push_back(-1.0 - std::sqrt(h) - 0.5 * h + h * q * q);
  }
  std::sort(vals.begin(), vals.end());
  vals.resize(count);
  return vals;
}

namespace {

// Generalized symmetric tridiagonal system of the radial mode operator.
HermitianSystem radial_system(const DiscParams& p, int m) {
  if (p.gamma > 0.0) throw std::invalid_argument("disc: gamma must be <= 0");
  if (p.n_r < 256) throw std::invalid_argument("disc: need n_r >= 256");
  if (p.inner_wall < 0.0 || p.inner_wall >= 1.0)
    throw std::invalid_argument("disc: inner wall must lie in [0,1)");
  const double r_in = p.inner_wall > 0.0 ? 1.0 - p.inner_wall : 0.0;
  const int n = p.n_r;
  const double dr = (1.0 - r_in) / n;
  const double gabs = -p.gamma;
  if (gabs * dr >= 1.0)
    throw std::invalid_argument("disc: grid too coarse for this Robin parameter");

  std::vector<double> d(n), e(n - 1), mass(n);
  for (int i = 1; i <= n; ++i) {
    double r = r_in + (i - 0.5) * dr;
    double f_in = r_in + (i - 1) * dr;   // inner face
    double f_out = r_in + (double)i * dr;  // outer face
    double v = 0.0;
    {
      double q = (double)m / r - 0.5 * p.b * r;
      v = q * q;
    }
    double diag = (f_in + f_out) / dr + r * v * dr;
    if (i == 1 && r_in > 0.0) diag += 2.0 * f_in / dr;  // Dirichlet wall at the inner face
    if (i == n) {
      // Robin face at r = 1 via a ghost cell f_ghost = theta f_n with
      // theta = (1 + |gamma| dr / 2) / (1 - |gamma| dr / 2)
      double theta = (1.0 + 0.5 * gabs * dr) / (1.0 - 0.5 * gabs * dr);
      diag = (f_in + (1.0 - theta) * f_out) / dr + r * v * dr;
    }
    d[i - 1] = diag;
    mass[i - 1] = r * dr;
    if (i < n) e[i - 1] = -f_out / dr;
  }
  auto sys = HermitianSystem::make_tridiagonal(std::move(d), std::move(e));
  sys.mass = std::move(mass);
  return sys;
}

}  // namespace

double solve_disc_radial(const DiscParams& p, int m, bool* outside_window) {
  if (outside_window) {
    double window = p.b / 2.0 + 10.0 * std::abs(p.gamma) + 50.0;
    *outside_window = std::abs((double)m) > window;
  }
  auto sys = radial_system(p, m);
  return eigh_tridiagonal(sys, 1, false).eigenvalues[0];
}

DiscModeTable solve_disc_full(const DiscParams& p) {
  auto off = magnetic_offset(p.b);
  int lo = p.m_lo, hi = p.m_hi;
  if (lo == 0 && hi == 0) {
    double half = std::sqrt(off.value + 5.0);
    lo = (int)std::floor(p.b / 2.0 - half) - 10;
    hi = (int)std::ceil(p.b / 2.0 + half) + 10;
  }
  if (lo >= hi) throw std::invalid_argument("solve_disc_full: empty mode window");

  DiscModeTable out;
  for (int m = lo; m <= hi; ++m) {
    out.modes.push_back(m);
    out.lambda1.push_back(solve_disc_radial(p, m));
  }
  size_t best = std::min_element(out.lambda1.begin(), out.lambda1.end()) - out.lambda1.begin();
  if (best == 0 || best + 1 == out.lambda1.size())
    throw std::runtime_error("solve_disc_full: minimizer at the window edge; widen the window");
  out.argmin_m = out.modes[best];
  out.lambda_min = out.lambda1[best];
  double h = p.h();
  out.mu1 = h * h * out.lambda_min;
  out.residual = (out.mu1 + h + std::pow(h, 1.5)) / (h * h);
  return out;
}

}  // namespace robin
