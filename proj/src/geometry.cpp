#include "robin/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <memory>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "robin/constants.hpp"

namespace robin {

namespace {
using std::numbers::pi;
using cplxd = std::complex<double>;
}  // namespace

// ---------------------------------------------------------------------------
// TrigSeries

TrigSeries::TrigSeries(std::vector<double> samples, double period, double x0)
    : period_(period), x0_(x0), nsamples_((int)samples.size()) {
  int n = nsamples_;
  if (n < 4) throw std::invalid_argument("TrigSeries: need at least 4 samples");
  int kmax = n / 2;
  coeff_.assign(kmax + 1, cplxd(0.0));
  for (int k = 0; k <= kmax; ++k) {
    cplxd tw = std::polar(1.0, -2.0 * pi * k / n);
    cplxd ph(1.0, 0.0);
    cplxd s(0.0);
    for (int j = 0; j < n; ++j) {
      s += samples[j] * ph;
      ph *= tw;
    }
    coeff_[k] = s / (double)n;
  }
}

double TrigSeries::operator()(double x) const {
  int kmax = (int)coeff_.size() - 1;
  double th = 2.0 * pi * (x - x0_) / period_;
  cplxd w = std::polar(1.0, th);
  cplxd ph = w;
  double s = coeff_[0].real();
  for (int k = 1; k <= kmax; ++k) {
    double wk = (2 * k == nsamples_) ? 1.0 : 2.0;  // Nyquist term counted once
    s += wk * (coeff_[k] * ph).real();
    ph *= w;
  }
  return s;
}

double TrigSeries::derivative(double x) const {
  int kmax = (int)coeff_.size() - 1;
  double th = 2.0 * pi * (x - x0_) / period_;
  double om = 2.0 * pi / period_;
  cplxd w = std::polar(1.0, th);
  cplxd ph = w;
  double s = 0.0;
  for (int k = 1; k <= kmax; ++k) {
    double wk = (2 * k == nsamples_) ? 1.0 : 2.0;
    s += wk * (cplxd(0.0, k * om) * coeff_[k] * ph).real();
    ph *= w;
  }
  return s;
}

double TrigSeries::second_derivative(double x) const {
  int kmax = (int)coeff_.size() - 1;
  double th = 2.0 * pi * (x - x0_) / period_;
  double om = 2.0 * pi / period_;
  cplxd w = std::polar(1.0, th);
  cplxd ph = w;
  double s = 0.0;
  for (int k = 1; k <= kmax; ++k) {
    double wk = (2 * k == nsamples_) ? 1.0 : 2.0;
    s += wk * (-(k * om) * (k * om) * coeff_[k] * ph).real();
    ph *= w;
  }
  return s;
}

double TrigSeries::antiderivative(double x) const {
  int kmax = (int)coeff_.size() - 1;
  double th = 2.0 * pi * (x - x0_) / period_;
  double om = 2.0 * pi / period_;
  cplxd w = std::polar(1.0, th);
  cplxd ph = w;
  double s = coeff_[0].real() * (x - x0_);
  for (int k = 1; k <= kmax; ++k) {
    double wk = (2 * k == nsamples_) ? 1.0 : 2.0;
    cplxd inv_ik(0.0, -1.0 / (k * om));
    s += wk * (coeff_[k] * inv_ik * (ph - 1.0)).real();
    ph *= w;
  }
  return s;
}

// ---------------------------------------------------------------------------
// BoundaryCurve factories

BoundaryCurve BoundaryCurve::circle(double R) {
  if (!(R > 0.0)) throw std::invalid_argument("circle: radius must be positive");
  BoundaryCurve c;
  c.kind = Kind::circle;
  c.radius = R;
  return c;
}

BoundaryCurve BoundaryCurve::ellipse(double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) throw std::invalid_argument("ellipse: axes must be positive");
  BoundaryCurve c;
  c.kind = Kind::ellipse;
  c.a = a;
  c.b = b;
  return c;
}

BoundaryCurve BoundaryCurve::parametric(std::vector<std::array<double, 2>> pts) {
  if (pts.size() < 9) throw std::invalid_argument("parametric: need at least 9 points");
  double scale = 0.0;
  for (auto& p : pts) scale = std::max({scale, std::abs(p[0]), std::abs(p[1])});
  double gap = std::hypot(pts.front()[0] - pts.back()[0], pts.front()[1] - pts.back()[1]);
  if (gap > 1e-9 * std::max(scale, 1.0))
    throw std::invalid_argument("parametric: curve is not closed (first and last samples differ)");
  pts.pop_back();  // drop the duplicated closing sample
  BoundaryCurve c;
  c.kind = Kind::parametric;
  c.points = std::move(pts);
  return c;
}

BoundaryCurve BoundaryCurve::from_preset(const std::string& id) {
  std::vector<std::string> parts;
  std::stringstream ss(id);
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(item);
  try {
    if (parts.size() == 2 && parts[0] == "circle") return circle(std::stod(parts[1]));
    if (parts.size() == 3 && parts[0] == "ellipse")
      return ellipse(std::stod(parts[1]), std::stod(parts[2]));
  } catch (const std::invalid_argument&) {
  }
  throw std::invalid_argument("unknown curve preset: " + id);
}

BoundaryCurve BoundaryCurve::from_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open curve file: " + path);
  std::vector<std::array<double, 2>> pts;
  std::string line;
  while (std::getline(in, line)) {
    for (auto& ch : line)
      if (ch == ',' || ch == ';' || ch == '\t') ch = ' ';
    std::stringstream ss(line);
    double x, y;
    if (ss >> x >> y) pts.push_back({x, y});
    // header and blank lines fall through
  }
  return parametric(std::move(pts));
}

// ---------------------------------------------------------------------------
// Reparametrization

namespace {

struct Parametric {
  std::function<std::array<double, 2>(double)> pos, d1, d2;
  double period;
};

Parametric make_parametric(const BoundaryCurve& curve) {
  Parametric p;
  p.period = 2.0 * pi;
  switch (curve.kind) {
    case BoundaryCurve::Kind::circle: {
      double R = curve.radius;
      p.pos = [R](double t) { return std::array<double, 2>{R * std::cos(t), R * std::sin(t)}; };
      p.d1 = [R](double t) { return std::array<double, 2>{-R * std::sin(t), R * std::cos(t)}; };
      p.d2 = [R](double t) { return std::array<double, 2>{-R * std::cos(t), -R * std::sin(t)}; };
      break;
    }
    case BoundaryCurve::Kind::ellipse: {
      double a = curve.a, b = curve.b;
      p.pos = [a, b](double t) { return std::array<double, 2>{a * std::cos(t), b * std::sin(t)}; };
      p.d1 = [a, b](double t) { return std::array<double, 2>{-a * std::sin(t), b * std::cos(t)}; };
      p.d2 = [a, b](double t) { return std::array<double, 2>{-a * std::cos(t), -b * std::sin(t)}; };
      break;
    }
    case BoundaryCurve::Kind::parametric: {
      auto pts = curve.points;
      // enforce counterclockwise orientation
      double a2 = 0.0;
      for (size_t i = 0; i < pts.size(); ++i) {
        auto& u = pts[i];
        auto& v = pts[(i + 1) % pts.size()];
        a2 += u[0] * v[1] - v[0] * u[1];
      }
      if (a2 < 0.0) std::reverse(pts.begin() + 1, pts.end());
      std::vector<double> xs(pts.size()), ys(pts.size());
      for (size_t i = 0; i < pts.size(); ++i) {
        xs[i] = pts[i][0];
        ys[i] = pts[i][1];
      }
      auto sx = std::make_shared<TrigSeries>(std::move(xs), 2.0 * pi, 0.0);
      auto sy = std::make_shared<TrigSeries>(std::move(ys), 2.0 * pi, 0.0);
      p.pos = [sx, sy](double t) { return std::array<double, 2>{(*sx)(t), (*sy)(t)}; };
      p.d1 = [sx, sy](double t) {
        return std::array<double, 2>{sx->derivative(t), sy->derivative(t)};
      };
      p.d2 = [sx, sy](double t) {
        return std::array<double, 2>{sx->second_derivative(t), sy->second_derivative(t)};
      };
      break;
    }
  }
  return p;
}

double curvature_of(const Parametric& p, double t) {
  auto d = p.d1(t);
  auto dd = p.d2(t);
  double sp = std::hypot(d[0], d[1]);
  return (d[0] * dd[1] - d[1] * dd[0]) / (sp * sp * sp);
}

void build_agmon_table(CurvatureProfile& prof);

CurvatureProfile finish_profile(double L, std::vector<double> samples, std::string provenance,
                                bool enforce_turning) {
  CurvatureProfile prof;
  prof.L = L;
  prof.samples = std::move(samples);
  prof.provenance = std::move(provenance);
  prof.interp = TrigSeries(prof.samples, 2.0 * L, -L);
  if (enforce_turning) {
    double turning = prof.interp.mean() * 2.0 * L;
    if (std::abs(turning - 2.0 * pi) > kTurningNumberTol * 2.0 * pi)
      throw std::runtime_error("curvature profile: total turning differs from 2*pi (rel " +
                               std::to_string(std::abs(turning - 2.0 * pi) / (2.0 * pi)) + ")");
  }
  prof.max_info = curvature_max(prof);
  build_agmon_table(prof);
  return prof;
}

}  // namespace

CurvatureProfile CurvatureProfile::from_samples(double L, std::vector<double> kappa,
                                                std::string provenance) {
  if (!(L > 0.0)) throw std::invalid_argument("from_samples: L must be positive");
  if (kappa.size() < 16) throw std::invalid_argument("from_samples: need at least 16 samples");
  return finish_profile(L, std::move(kappa), std::move(provenance), /*enforce_turning=*/false);
}

CurvatureProfile CurvatureProfile::rotated(int k) const {
  int n = size();
  k = ((k % n) + n) % n;
  std::vector<double> rot(n);
  for (int i = 0; i < n; ++i) rot[i] = samples[(i + k) % n];
  return finish_profile(L, std::move(rot), provenance + " (rotated)", false);
}

std::pair<CurvatureProfile, DomainMetrics> arc_length_reparametrize(const BoundaryCurve& curve,
                                                                    int n) {
  if (n < 64) throw std::invalid_argument("arc_length_reparametrize: need n >= 64");
  Parametric par = make_parametric(curve);
  const double P = par.period;
  const int nf = std::min(std::max(2 * n, 1024), 4096);

  // perimeter and area by spectral quadrature in the parameter
  std::vector<double> speeds(nf);
  double area2 = 0.0;
  for (int j = 0; j < nf; ++j) {
    double t = P * j / nf;
    auto d = par.d1(t);
    speeds[j] = std::hypot(d[0], d[1]);
    auto x = par.pos(t);
    area2 += x[0] * d[1] - x[1] * d[0];
  }
  area2 *= P / nf;
  double area = 0.5 * area2;
  if (area <= 0.0) throw std::runtime_error("curve orientation is not counterclockwise");
  double spmax = *std::max_element(speeds.begin(), speeds.end());
  double spmin = *std::min_element(speeds.begin(), speeds.end());
  if (!(spmax > 0.0) || spmin < 1e-12 * spmax)
    throw std::runtime_error("degenerate curve: parametrization speed vanishes");

  TrigSeries speed_series(speeds, P, 0.0);
  double perimeter = speed_series.mean() * P;
  double L = 0.5 * perimeter;

  // curvature maximum in the parameter; ties resolve to the smallest t >= 0
  int jbest = 0;
  double kbest = curvature_of(par, 0.0);
  for (int j = 1; j < nf; ++j) {
    double kv = curvature_of(par, P * j / nf);
    if (kv > kbest + 1e-14 * std::max(1.0, std::abs(kbest))) {
      kbest = kv;
      jbest = j;
    }
  }
  double lo = P * (jbest - 1) / nf, hi = P * (jbest + 1) / nf;
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = hi - gr * (hi - lo), d = lo + gr * (hi - lo);
  double fc = curvature_of(par, c), fd = curvature_of(par, d);
  for (int it = 0; it < 80; ++it) {
    if (fc > fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - gr * (hi - lo);
      fc = curvature_of(par, c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + gr * (hi - lo);
      fd = curvature_of(par, d);
    }
  }
  double tstar = 0.5 * (lo + hi);

  auto arc = [&](double t) { return speed_series.antiderivative(t); };
  double s_star_raw = arc(tstar);

  // invert s -> t by warm-started Newton along the grid
  std::vector<double> kappa_s(n), tvals(n);
  double dstep = 2.0 * L / n;
  auto solve_t = [&](double starget, double tg) {
    double t = tg;
    for (int it = 0; it < 60; ++it) {
      double f = arc(t) - s_star_raw - starget;
      double step = f / speed_series(t);
      t -= step;
      if (std::abs(step) < 1e-14 * std::max(1.0, std::abs(t))) break;
    }
    return t;
  };
  int k0 = n / 2;  // index of s = 0
  tvals[k0] = solve_t(0.0, tstar);
  for (int k = k0 + 1; k < n; ++k)
    tvals[k] = solve_t(-L + k * dstep, tvals[k - 1] + dstep / speed_series(tvals[k - 1]));
  for (int k = k0 - 1; k >= 0; --k)
    tvals[k] = solve_t(-L + k * dstep, tvals[k + 1] - dstep / speed_series(tvals[k + 1]));
  for (int k = 0; k < n; ++k) kappa_s[k] = curvature_of(par, tvals[k]);

  std::string prov;
  switch (curve.kind) {
    case BoundaryCurve::Kind::circle:
      prov = "circle:" + std::to_string(curve.radius);
      break;
    case BoundaryCurve::Kind::ellipse:
      prov = "ellipse:" + std::to_string(curve.a) + ":" + std::to_string(curve.b);
      break;
    case BoundaryCurve::Kind::parametric:
      prov = "parametric[" + std::to_string(curve.points.size()) + "]";
      break;
  }
  CurvatureProfile prof = finish_profile(L, std::move(kappa_s), prov, /*enforce_turning=*/true);

  DomainMetrics m;
  m.area = area;
  m.perimeter = perimeter;
  m.beta0 = area / perimeter;
  m.kappa_max = prof.max_info.kappa_max;
  m.s_star = prof.max_info.s_star;
  m.kappa_pp = prof.max_info.kappa_pp;
  m.assumption_a = prof.max_info.assumption_a;
  if (!(m.beta0 > 0.0)) throw std::runtime_error("metrics: beta0 must be positive");
  if (m.kappa_max < 2.0 * pi / perimeter - 1e-9)
    throw std::runtime_error("metrics: kappa_max below the mean-curvature bound");
  return {std::move(prof), m};
}

// ---------------------------------------------------------------------------
// Maximum of the profile

CurvatureMax curvature_max(const CurvatureProfile& profile) {
  const int n = profile.size();
  const double L = profile.L;
  const auto& f = profile.interp;

  // dense scan of the interpolant; ties prefer the smallest |s|
  int nf = 8 * n;
  double best = f(-L), sbest = -L;
  for (int j = 1; j < nf; ++j) {
    double s = -L + 2.0 * L * j / nf;
    double v = f(s);
    double tol = 1e-13 * std::max(1.0, std::abs(best));
    if (v > best + tol || (std::abs(v - best) <= tol && std::abs(s) < std::abs(sbest))) {
      best = v;
      sbest = s;
    }
  }
  double lo = sbest - 2.0 * L / nf, hi = sbest + 2.0 * L / nf;
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = hi - gr * (hi - lo), d = lo + gr * (hi - lo);
  double fc = f(c), fd = f(d);
  for (int it = 0; it < 80; ++it) {
    if (fc > fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - gr * (hi - lo);
      fc = f(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + gr * (hi - lo);
      fd = f(d);
    }
  }
  // polish on the derivative; golden section alone is sqrt(eps)-limited near
  // a flat quadratic maximum
  double sstar = 0.5 * (lo + hi);
  double cell = 2.0 * L / nf;
  for (int it = 0; it < 12; ++it) {
    double g1 = f.derivative(sstar);
    double g2 = f.second_derivative(sstar);
    if (!(g2 < 0.0)) break;  // flat or non-concave: keep the scan result
    double step = g1 / g2;
    if (std::abs(step) > cell) step = std::copysign(cell, step);
    sstar -= step;
    if (std::abs(step) < 1e-15 * std::max(1.0, std::abs(sstar))) break;
  }
  if (f(sstar) < best) sstar = sbest;

  CurvatureMax out;
  out.s_star = sstar;
  if (std::abs(out.s_star) < 1e-9 * L) out.s_star = 0.0;
  out.kappa_max = f(out.s_star);

  // Richardson-extrapolated central second difference on the interpolant
  double h = 2.0 * L / n;
  auto fd2 = [&](double dd) {
    return (f(out.s_star - dd) - 2.0 * out.kappa_max + f(out.s_star + dd)) / (dd * dd);
  };
  out.kappa_pp = (4.0 * fd2(0.5 * h) - fd2(h)) / 3.0;

  // uniqueness: another sample attaining the max level away from s_star
  double tie = kMaxTieTol * std::max(std::abs(out.kappa_max), 1e-30);
  double excl = L / 8.0;
  out.max_is_unique = true;
  for (int j = 0; j < n; ++j) {
    double s = -L + 2.0 * L * j / n;
    double dist = std::abs(s - out.s_star);
    dist = std::min(dist, 2.0 * L - dist);
    if (dist > excl && profile.samples[j] >= out.kappa_max - tie) {
      out.max_is_unique = false;
      break;
    }
  }
  out.max_nondegenerate = std::abs(out.kappa_pp) >= kDegenerateCurvatureTol && out.kappa_pp < 0.0;
  out.assumption_a = out.max_is_unique && out.max_nondegenerate;
  return out;
}

// ---------------------------------------------------------------------------
// Agmon distance

namespace {

double agmon_integrand(const CurvatureProfile& prof, double s) {
  double scale = std::max(1.0, std::abs(prof.max_info.kappa_max));
  double v = prof.max_info.kappa_max - prof.interp(s);
  if (v < -kAgmonRadicandTol * scale)
    throw std::runtime_error("agmon_distance: kappa exceeds kappa_max beyond tolerance");
  // rounding floor: sqrt would amplify O(eps) noise to O(1e-8)
  if (v <= 1024.0 * 2.220446049250313e-16 * scale) return 0.0;
  return std::sqrt(v);
}

void build_agmon_table(CurvatureProfile& prof) {
  // cumulative integral of sqrt(kappa_max - kappa) from -L, Simpson per cell
  int refine = 8;
  int m = refine * prof.size();
  prof.agmon_refine = refine;
  prof.agmon_cum.assign(m + 1, 0.0);
  double h = 2.0 * prof.L / m;
  double acc = 0.0;
  double left = agmon_integrand(prof, -prof.L);
  for (int j = 0; j < m; ++j) {
    double a = -prof.L + j * h;
    double mid = agmon_integrand(prof, a + 0.5 * h);
    double right = agmon_integrand(prof, a + h);
    acc += h / 6.0 * (left + 4.0 * mid + right);
    prof.agmon_cum[j + 1] = acc;
    left = right;
  }
}

// integral of the Agmon integrand from -L to s, s in [-L, L]
double agmon_F(const CurvatureProfile& prof, double s) {
  int m = (int)prof.agmon_cum.size() - 1;
  double h = 2.0 * prof.L / m;
  double x = (s + prof.L) / h;
  int j = std::clamp((int)std::floor(x), 0, m - 1);
  double a = -prof.L + j * h;
  double frac = s - a;
  double base = prof.agmon_cum[j];
  if (frac <= 0.0) return base;
  double f0 = agmon_integrand(prof, a);
  double fm = agmon_integrand(prof, a + 0.5 * frac);
  double f1 = agmon_integrand(prof, a + frac);
  return base + frac / 6.0 * (f0 + 4.0 * fm + f1);
}

}  // namespace

double agmon_distance(const CurvatureProfile& profile, double s) {
  const double L = profile.L;
  double sr = std::fmod(s + L, 2.0 * L);
  if (sr < 0.0) sr += 2.0 * L;
  sr -= L;
  double Fs = agmon_F(profile, sr) - agmon_F(profile, 0.0);
  double Fp = profile.agmon_cum.back();
  double direct = std::abs(Fs);
  return std::min(direct, Fp - direct);
}

std::vector<double> agmon_distance_table(const CurvatureProfile& profile,
                                         const std::vector<double>& s_values) {
  std::vector<double> out(s_values.size());
  for (size_t i = 0; i < s_values.size(); ++i) out[i] = agmon_distance(profile, s_values[i]);
  return out;
}

}  // namespace robin
