#include "robin/effective.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace robin {

namespace {
using std::numbers::pi;
}

void EffectiveSpec::validate() const {
  if (!profile) throw std::invalid_argument("effective: profile missing");
  if (!(h > 0.0 && h < 1.0)) throw std::invalid_argument("effective: h must lie in (0,1)");
  if (gamma != 0.0) {
    if (!(gamma < 0.0)) throw std::invalid_argument("effective: gamma must be negative");
    if (std::abs(h * gamma * gamma - 1.0) > 1e-12)
      throw std::invalid_argument("effective: h and gamma inconsistent (h = gamma^-2)");
  }
  if (b < 0.0) throw std::invalid_argument("effective: b must be >= 0");
  if (variant == EffectiveVariant::bracket) {
    if (c < 0.0) throw std::invalid_argument("effective: bracket constant c must be >= 0");
    if (!(alpha > 0.0)) throw std::invalid_argument("effective: bracket alpha must be > 0");
    if (bracket_sign != 1 && bracket_sign != -1)
      throw std::invalid_argument("effective: bracket sign must be +-1");
  }
}

double EffectiveSpec::kinetic_coefficient() const {
  if (variant == EffectiveVariant::bracket) {
    double r = std::min(alpha, 0.5);
    return h * (1.0 + bracket_sign * c * std::pow(h, r));
  }
  return h;
}

double EffectiveSpec::potential(double s) const {
  double rh = std::sqrt(h);
  switch (variant) {
    case EffectiveVariant::gamma_form:
    case EffectiveVariant::semiclassical:
      return -1.0 - rh * profile->kappa(s);
    case EffectiveVariant::full:
    case EffectiveVariant::bracket: {
      double k = profile->kappa(s);
      return -1.0 - rh * k - 0.5 * h * k * k;
    }
    case EffectiveVariant::disc_effective:
      return -1.0 - rh - 0.5 * h;
  }
  return 0.0;
}

int cutoff_floor(const EffectiveSpec& spec) {
  double L = spec.profile->L;
  return (int)std::ceil(5.0 * (spec.b * spec.beta0 + 1.0 / (std::sqrt(spec.h) * 2.0 * L)));
}

int default_cutoff(const EffectiveSpec& spec) {
  // The floor tracks the phase and the sqrt(h) potential scale; localized
  // states near a curvature maximum also need modes out to the inverse of
  // their harmonic width (|kappa''| / sqrt(h))^{1/4}.
  double L = spec.profile->L;
  double kpp = std::max(std::abs(spec.profile->max_info.kappa_pp), 1.0);
  int m_loc = (int)std::ceil(6.0 * (L / pi) * std::pow(kpp / std::sqrt(spec.h), 0.25));
  return std::max(cutoff_floor(spec), m_loc) + 8;
}

HermitianSystem assemble_effective(const EffectiveSpec& spec, int M, bool* warning) {
  spec.validate();
  if (M < 1) throw std::invalid_argument("assemble_effective: cutoff must be >= 1");
  if (warning) *warning = (M < cutoff_floor(spec));
  const double L = spec.profile->L;
  const double K = spec.kinetic_coefficient();
  const int dim = 2 * M + 1;

  // potential Fourier coefficients by direct quadrature on a grid fine enough
  // for the 2M coupling range
  int nq = std::max(spec.profile->size(), 4 * M + 8);
  if (nq % 2) ++nq;
  nq = std::min(nq, 8192);
  std::vector<double> v(nq);
  for (int j = 0; j < nq; ++j) v[j] = spec.potential(-L + 2.0 * L * j / nq);
  std::vector<cplx> vhat(2 * M + 1);
  for (int kk = 0; kk <= 2 * M; ++kk) {
    // e^{-i pi kk s_j / L} = e^{i pi kk} e^{-2 pi i kk j / nq}
    cplx tw = std::polar(1.0, -2.0 * pi * kk / nq);
    cplx ph = std::polar(1.0, pi * kk);
    cplx acc(0.0);
    for (int j = 0; j < nq; ++j) {
      acc += v[j] * ph;
      ph *= tw;
    }
    vhat[kk] = acc / (double)nq;
  }

  std::vector<cplx> a((size_t)dim * dim, cplx(0.0));
  for (int r = 0; r < dim; ++r) {
    int m = r - M;
    double q = pi * m / L - spec.b * spec.beta0;
    a[(size_t)r * dim + r] = K * q * q + vhat[0].real();
    for (int cidx = 0; cidx < r; ++cidx) {
      cplx val = vhat[r - cidx];
      a[(size_t)r * dim + cidx] = val;
      a[(size_t)cidx * dim + r] = std::conj(val);
    }
  }
  return HermitianSystem::make_dense(dim, std::move(a));
}

EigenResult solve_effective(const EffectiveSpec& spec, int M, int k, bool want_vectors) {
  if (M <= 0) M = default_cutoff(spec);
  bool warn = false;
  auto sys = assemble_effective(spec, M, &warn);
  auto res = eigh_dense(sys, k, want_vectors);
  res.cutoff = M;
  res.warning = res.warning || warn;
  if (warn) res.note = "Fourier cutoff below the resolution floor";
  return res;
}

EigenResult solve_effective_fd(const EffectiveSpec& spec, int n, int k) {
  spec.validate();
  if (n < 128) throw std::invalid_argument("solve_effective_fd: need n >= 128");
  const double L = spec.profile->L;
  const double K = spec.kinetic_coefficient();
  const double ds = 2.0 * L / n;
  const cplx link = std::polar(1.0, -spec.b * spec.beta0 * ds);

  BandedHermitian a;
  a.dim = n;
  a.w = 1;
  a.bands.assign(2, {});
  a.bands[0].resize(n);
  a.bands[1].resize(n - 1);
  double vmin = 1e300;
  for (int j = 0; j < n; ++j) {
    double vj = spec.potential(-L + j * ds);
    vmin = std::min(vmin, vj);
    a.bands[0][j] = 2.0 * K / (ds * ds) + vj;
  }
  for (int j = 0; j + 1 < n; ++j) a.bands[1][j] = -K * std::conj(link) / (ds * ds);
  a.wraps.push_back({0, n - 1, -K * std::conj(link) / (ds * ds)});

  IterativeOptions opts;
  opts.shift = vmin - 0.02 * (1.0 + std::abs(vmin));
  opts.have_shift = true;
  opts.max_iterations = 500;
  auto res = lowest_eigenpairs_banded(a, k, opts);
  res.n = n;
  res.step = ds;
  return res;
}

FluxShiftReport flux_shift_spectrum_check(const EffectiveSpec& spec, int M, int k) {
  if (M <= 0) M = default_cutoff(spec);
  const double L = spec.profile->L;
  FluxShiftReport rep;
  rep.period_in_b = pi / (L * spec.beta0);
  EffectiveSpec shifted = spec;
  shifted.b = spec.b + rep.period_in_b;
  auto r0 = solve_effective(spec, M + 2, k);
  auto r1 = solve_effective(shifted, M + 2, k);
  double dev = 0.0;
  for (int j = 0; j < k; ++j) dev = std::max(dev, std::abs(r0.eigenvalues[j] - r1.eigenvalues[j]));
  rep.max_deviation = dev;
  rep.equal = dev <= 1e-10 * std::max(1.0, std::abs(r0.eigenvalues[0]));
  return rep;
}

EigenResult dirichlet_fluxfree(const CurvatureProfile& profile, double hbar, int n, int k,
                               bool want_vectors) {
  if (!(hbar > 0.0 && hbar < 1.0)) throw std::invalid_argument("dirichlet_fluxfree: hbar in (0,1)");
  if (n < 64) throw std::invalid_argument("dirichlet_fluxfree: need n >= 64");
  const double L = profile.L;
  const double ds = 2.0 * L / n;
  const double kmax = profile.max_info.kappa_max;
  std::vector<double> d(n - 1), e(n - 2);
  for (int i = 0; i + 1 < n; ++i) {
    double s = -L + (i + 1) * ds;
    d[i] = 2.0 * hbar * hbar / (ds * ds) + (kmax - profile.kappa(s));
    if (i + 2 < n) e[i] = -hbar * hbar / (ds * ds);
  }
  auto res = eigh_tridiagonal(HermitianSystem::make_tridiagonal(std::move(d), std::move(e)), k,
                              want_vectors);
  res.n = n;
  res.step = ds;
  return res;
}

EigenResult dirichlet_fluxfree_fluxed(const CurvatureProfile& profile, double hbar, int n, int k,
                                      double b, double beta0) {
  if (!(hbar > 0.0 && hbar < 1.0)) throw std::invalid_argument("dirichlet_fluxfree: hbar in (0,1)");
  if (n < 64) throw std::invalid_argument("dirichlet_fluxfree: need n >= 64");
  const double L = profile.L;
  const double ds = 2.0 * L / n;
  const double kmax = profile.max_info.kappa_max;
  const cplx link = std::polar(1.0, -b * beta0 * ds);
  BandedHermitian a;
  a.dim = n - 1;
  a.w = 1;
  a.bands.assign(2, {});
  a.bands[0].resize(n - 1);
  a.bands[1].resize(n - 2);
  double vmin = 1e300;
  for (int i = 0; i + 1 < n; ++i) {
    double s = -L + (i + 1) * ds;
    double v = kmax - profile.kappa(s);
    vmin = std::min(vmin, v);
    a.bands[0][i] = 2.0 * hbar * hbar / (ds * ds) + v;
    if (i + 2 < n) a.bands[1][i] = -hbar * hbar * std::conj(link) / (ds * ds);
  }
  IterativeOptions opts;
  opts.shift = vmin - 0.02 * (1.0 + std::abs(vmin));
  opts.have_shift = true;
  opts.max_iterations = 600;
  auto res = lowest_eigenpairs_banded(a, k, opts);
  res.n = n;
  res.step = ds;
  return res;
}

std::vector<SandwichRow> bracket_sandwich(const EffectiveSpec& base, int M,
                                          const std::vector<double>& mu) {
  EffectiveSpec lo = base, hi = base;
  lo.variant = EffectiveVariant::bracket;
  hi.variant = EffectiveVariant::bracket;
  lo.bracket_sign = -1;
  hi.bracket_sign = +1;
  int k = (int)mu.size();
  auto rlo = solve_effective(lo, M, k);
  auto rhi = solve_effective(hi, M, k);
  std::vector<SandwichRow> rows(k);
  for (int j = 0; j < k; ++j) {
    rows[j].index = j + 1;
    rows[j].lower = rlo.eigenvalues[j];
    rows[j].upper = rhi.eigenvalues[j];
    rows[j].mu = mu[j];
    rows[j].defect_lower = std::max(0.0, rows[j].lower - mu[j]);
    rows[j].defect_upper = std::max(0.0, mu[j] - rows[j].upper);
  }
  return rows;
}

}  // namespace robin
