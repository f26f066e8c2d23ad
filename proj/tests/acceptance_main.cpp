// Acceptance runner: one verdict line per criterion, nonzero exit on failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "robin/asymptotics.hpp"
#include "robin/constants.hpp"
#include "robin/disc.hpp"
#include "robin/effective.hpp"
#include "robin/model1d.hpp"
#include "robin/tubular2d.hpp"

using namespace robin;
using std::numbers::pi;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::shared_ptr<const CurvatureProfile> g_disc;
std::shared_ptr<const CurvatureProfile> g_ellipse;
DomainMetrics g_disc_m, g_ellipse_m;

// 1. closed-form disc spectrum reproduced to 1e-10
Outcome criterion1() {
  Outcome out;
  double worst = 0.0;
  for (double h : {1e-2, 1e-3, 1e-4}) {
    for (double b : {0.0, 1.0, 2.0, 3.7}) {
      EffectiveSpec spec;
      spec.profile = g_disc;
      spec.h = h;
      spec.b = b;
      spec.beta0 = 0.5;
      spec.variant = EffectiveVariant::full;
      auto res = solve_effective(spec, 0, 1);
      double target = -1.0 - std::sqrt(h) + (magnetic_offset(b).value - 0.5) * h;
      worst = std::max(worst, std::abs(res.eigenvalues[0] - target));
    }
  }
  out.pass = worst <= 1e-10;
  std::ostringstream ss;
  ss << "max |lambda1 - closed form| = " << worst << " (tol 1e-10)";
  out.detail = ss.str();
  return out;
}

// 2. quadratic law of the weighted half-line model: log-log slope 2.0 +- 0.2
Outcome criterion2() {
  Outcome out;
  std::vector<double> xs, ys;
  std::string capped;
  for (double mag : {1e-3, 3e-3, 1e-2, 3e-2, 1e-1}) {
    for (double sgn : {-1.0, 1.0}) {
      HalfLineSpec spec;
      spec.B = sgn * mag;
      // the weight 1 - B tau must stay positive on (0, T); cap T where the
      // stated T = 40 would cross the degeneracy
      spec.T = (spec.B > 0.0) ? std::min(40.0, 0.8 / spec.B) : 40.0;
      if (spec.T < 40.0) {
        std::ostringstream c;
        c << " [B=" << spec.B << ": T->" << spec.T << "]";
        capped += c.str();
      }
      spec.n = 8000;
      double lf = solve_HBT(spec, 1, false).eigenvalues[0];
      spec.n = 4000;
      double lc = solve_HBT(spec, 1, false).eigenvalues[0];
      double lam = (4.0 * lf - lc) / 3.0;  // Richardson at the stated budget
      xs.push_back(mag);
      ys.push_back(std::abs(lam + 1.0 + spec.B));
    }
  }
  double slope = fit_loglog_slope(xs, ys);
  out.pass = slope > 1.8 && slope < 2.2;
  std::ostringstream ss;
  ss << "slope = " << slope << " (want 2.0 +- 0.2; Richardson n in {4000,8000})" << capped;
  out.detail = ss.str();
  return out;
}

// 3. three-term expansion residual trend on the ellipse
Outcome criterion3() {
  Outcome out;
  double kmax = g_ellipse->max_info.kappa_max;
  double kpp = g_ellipse->max_info.kappa_pp;
  double omega = std::sqrt(-kpp / 2.0);
  std::vector<double> hs = {1e-2, 1e-3, 1e-4, 1e-5};
  std::ostringstream ss;
  bool all_ok = true;
  for (double b : {0.0, 1.0}) {
    std::vector<std::vector<double>> lam(hs.size());
    for (size_t i = 0; i < hs.size(); ++i) {
      EffectiveSpec spec;
      spec.profile = g_ellipse;
      spec.h = hs[i];
      spec.b = b;
      spec.beta0 = g_ellipse_m.beta0;
      spec.variant = EffectiveVariant::semiclassical;
      lam[i] = solve_effective(spec, 0, 6).eigenvalues;
    }
    for (int n = 1; n <= 3; ++n) {
      std::vector<double> ratio(hs.size());
      for (size_t i = 0; i < hs.size(); ++i) {
        double expect = -1.0 - kmax * std::sqrt(hs[i]) +
                        (2.0 * n - 1.0) * omega * std::pow(hs[i], 0.75);
        ratio[i] = std::abs(lam[i][n - 1] - expect) / std::pow(hs[i], 0.75);
      }
      bool mono = true;
      int allowance = 1;  // one 5% non-monotone blip tolerated
      for (size_t i = 1; i < ratio.size(); ++i) {
        if (ratio[i] <= ratio[i - 1]) continue;
        if (ratio[i] <= 1.05 * ratio[i - 1] && allowance > 0) {
          --allowance;
          continue;
        }
        mono = false;
      }
      if (!mono) all_ok = false;
      ss << " b=" << b << ",n=" << n << ":";
      for (double r : ratio) ss << " " << r;
      ss << (mono ? " (dec)" : " (NOT dec)") << ";";
    }
    // informational: the ellipse has two equal-curvature vertices, so levels
    // pair up; the distinct clusters sit at lambda_1, lambda_3, lambda_5
    ss << " [clusters b=" << b << ":";
    for (int cl : {0, 2, 4}) {
      double expect = -1.0 - kmax * std::sqrt(hs.back()) +
                      (double)(cl + 1) * omega * std::pow(hs.back(), 0.75);
      ss << " " << std::abs(lam.back()[cl] - expect) / std::pow(hs.back(), 0.75);
    }
    ss << "]";
  }
  out.pass = all_ok;
  out.detail = ss.str();
  return out;
}

// 4. radial disc solver against the flux-offset law
Outcome criterion4() {
  Outcome out;
  std::ostringstream ss;
  bool ok = true;
  for (double b : {0.0, 1.0}) {
    double target = magnetic_offset(b).value - 0.5;
    double dev_prev = 0.0;
    for (double h : {1e-2, 1e-3}) {
      DiscParams p = DiscParams::from_h(h);
      p.b = b;
      p.n_r = 1024;
      auto coarse = solve_disc_full(p);
      p.n_r = 2048;
      auto fine = solve_disc_full(p);
      double mu = fine.mu1 + (fine.mu1 - coarse.mu1) / 3.0;
      double residual = (mu + h + std::pow(h, 1.5)) / (h * h);
      double dev = std::abs(residual - target);
      if (h == 1e-3) {
        if (dev > 0.1 * std::abs(target)) ok = false;
        if (dev >= dev_prev) ok = false;  // must decrease from h = 1e-2
        ss << " b=" << b << ": residual " << residual << " vs " << target << " (dev " << dev
           << ", at 1e-2: " << dev_prev << ");";
      }
      dev_prev = dev;
    }
  }
  out.pass = ok;
  out.detail = ss.str();
  return out;
}

// 5. flux periodicity of the effective spectra
Outcome criterion5() {
  Outcome out;
  EffectiveSpec spec;
  spec.profile = g_disc;
  spec.h = 1e-3;
  spec.b = 1.0;
  spec.beta0 = 0.5;
  spec.variant = EffectiveVariant::full;
  auto disc_rep = flux_shift_spectrum_check(spec, 0);
  EffectiveSpec el;
  el.profile = g_ellipse;
  el.h = 1e-3;
  el.b = 0.7;
  el.beta0 = g_ellipse_m.beta0;
  el.variant = EffectiveVariant::semiclassical;
  auto ell_rep = flux_shift_spectrum_check(el, 0);
  out.pass = disc_rep.equal && ell_rep.equal && std::abs(disc_rep.period_in_b - 2.0) < 1e-12;
  std::ostringstream ss;
  ss << "disc period " << disc_rep.period_in_b << ", deviations " << disc_rep.max_deviation
     << " / " << ell_rep.max_deviation << " (tol 1e-10)";
  out.detail = ss.str();
  return out;
}

// 6. bracket sandwich across the h sweep
Outcome criterion6() {
  Outcome out;
  std::ostringstream ss;
  bool ok = true;
  for (int which = 0; which < 2; ++which) {
    auto profile = which == 0 ? g_disc : g_ellipse;
    double beta0 = which == 0 ? 0.5 : g_ellipse_m.beta0;
    const char* name = which == 0 ? "disc" : "ellipse";
    for (double h : {1e-1, 1e-2, 1e-3}) {
      TubularSpec spec;
      spec.profile = profile;
      spec.h = h;
      spec.b = 1.0;
      spec.rho = 0.2;
      spec.beta0 = beta0;
      spec.force_iterative = true;
      double tmax = spec.tau_max();
      spec.n_tau = std::max(24, (int)std::ceil(tmax / 0.08));
      if (which == 0) {
        spec.n_s = 16;
      } else {
        double omega = std::sqrt(-profile->max_info.kappa_pp / 2.0);
        double sigma_s = std::pow(h, 0.25) / std::sqrt(omega);
        int ns = (int)std::ceil(2.0 * profile->L / (sigma_s / 3.0));
        ns += ns % 2;
        spec.n_s = std::min(256, std::max(32, ns));
      }
      try {
        spec.validate();
      } catch (const std::exception& e) {
        ss << " " << name << ",h=" << h << ": SKIP (" << e.what() << ");";
        continue;
      }
      auto rep = sandwich_report(spec, 1.0, 0.5, 2);
      double worst = 0.0;
      for (const auto& row : rep.rows)
        worst = std::max(worst, std::max(row.defect_lower, row.defect_upper));
      if (!rep.ordering_ok) ok = false;
      ss << " " << name << ",h=" << h << ": defect " << worst << " vs g " << rep.g
         << (rep.margin_ok ? "" : " [|B|T>=1/3]") << (rep.ordering_ok ? " ok;" : " VIOLATED;");
    }
  }
  out.pass = ok;
  out.detail = ss.str();
  return out;
}

// 7. harmonic spacing of the flux-free Dirichlet operator
Outcome criterion7() {
  Outcome out;
  double omega = std::sqrt(-g_ellipse->max_info.kappa_pp / 2.0);
  auto spacing = [&](double hb) {
    int n = std::max(4096, (int)std::ceil(2.0 * g_ellipse->L / (std::sqrt(hb / omega) / 18.0)));
    auto r = dirichlet_fluxfree(*g_ellipse, hb, n, 2);
    return (r.eigenvalues[1] - r.eigenvalues[0]) / (2.0 * hb * omega);
  };
  double s2 = spacing(1e-2);
  double s3 = spacing(1e-3);
  out.pass = s3 > 0.9 && s3 < 1.1 && std::abs(s3 - 1.0) < std::abs(s2 - 1.0);
  std::ostringstream ss;
  ss << "spacing ratio: " << s2 << " (hbar 1e-2) -> " << s3 << " (hbar 1e-3)";
  out.detail = ss.str();
  return out;
}

// 8. hbar^{3/2} law of the cut-off Hermite trial state
Outcome criterion8() {
  Outcome out;
  std::vector<double> hbars = {1e-1, 3e-2, 1e-2};
  std::vector<double> ratios;
  for (double hb : hbars) {
    auto rep = hermite_trial_residual(*g_ellipse, 1, hb);
    ratios.push_back(rep.residual / std::pow(hb, 1.5));
  }
  bool ok = true;
  for (double r : ratios)
    if (r > 3.0 * ratios[0]) ok = false;
  out.pass = ok;
  std::ostringstream ss;
  ss << "residual / hbar^{3/2}:";
  for (double r : ratios) ss << " " << r;
  out.detail = ss.str();
  return out;
}

// 9. Agmon weighted norms and tail mass of the ground state
Outcome criterion9() {
  Outcome out;
  double omega = std::sqrt(-g_ellipse->max_info.kappa_pp / 2.0);
  std::vector<double> hbars = {1e-1, 1e-2, 1e-3};
  std::vector<double> ratios, tails;
  for (double hb : hbars) {
    int n = std::max(4096, (int)std::ceil(2.0 * g_ellipse->L / (std::sqrt(hb / omega) / 15.0)));
    auto r = dirichlet_fluxfree(*g_ellipse, hb, n, 1, true);
    auto chk = agmon_weight_check(*g_ellipse, r.real_vectors[0], r.eigenvalues[0], hb, 0.5, 0.2);
    ratios.push_back(chk.ratio);
    tails.push_back(chk.tail_mass);
  }
  bool ok = true;
  for (double r : ratios)
    if (r > 2.0 * ratios[0]) ok = false;
  for (size_t i = 1; i < tails.size(); ++i)
    if (!(tails[i] < tails[i - 1])) ok = false;
  out.pass = ok;
  std::ostringstream ss;
  ss << "ratios:";
  for (double r : ratios) ss << " " << r;
  ss << "; tails:";
  for (double t : tails) ss << " " << t;
  out.detail = ss.str();
  return out;
}

// 10. property bundle: residuals, cross-path agreement, truncation monotonicity
Outcome criterion10() {
  Outcome out;
  std::ostringstream ss;
  bool ok = true;

  {
    HalfLineSpec hl;
    hl.T = std::pow(1e-3, -0.2);
    hl.B = std::sqrt(1e-3);
    hl.n = 2000;
    auto res = solve_HBT_weighted(hl, 3, true);
    bool rok = true;
    for (size_t j = 0; j < res.residuals.size(); ++j)
      if (res.residuals[j] > kResidualTol * (1.0 + std::abs(res.eigenvalues[j]))) rok = false;
    if (!rok) ok = false;
    ss << " residuals<=1e-8(1+|l|): " << (rok ? "yes" : "NO") << ";";
  }
  {
    double worst = 0.0;
    EffectiveSpec spec;
    spec.profile = g_disc;
    spec.h = 1e-2;
    spec.b = 3.7;
    spec.beta0 = 0.5;
    spec.variant = EffectiveVariant::full;
    auto fd = solve_effective_fd(spec, 4096, 3);
    auto fr = solve_effective(spec, 0, 3);
    for (int j = 0; j < 3; ++j)
      worst = std::max(worst, std::abs(fd.eigenvalues[j] - fr.eigenvalues[j]));
    EffectiveSpec el;
    el.profile = g_ellipse;
    el.h = 1e-2;
    el.b = 0.0;
    el.beta0 = g_ellipse_m.beta0;
    el.variant = EffectiveVariant::semiclassical;
    auto fd2 = solve_effective_fd(el, 4096, 3);
    auto fr2 = solve_effective(el, 0, 3);
    for (int j = 0; j < 3; ++j)
      worst = std::max(worst, std::abs(fd2.eigenvalues[j] - fr2.eigenvalues[j]));
    if (worst > kCrossPathTol) ok = false;
    ss << " fourier-vs-fd " << worst << ";";
  }
  {
    HalfLineSpec spec;
    spec.T = 15.0;
    spec.n = 8000;
    spec.B = 0.05;
    double a = solve_HBT(spec, 1, false).eigenvalues[0];
    double b = solve_HBT_weighted(spec, 1, false).eigenvalues[0];
    if (std::abs(a - b) > kCrossPathTol) ok = false;
    ss << " transformed-vs-weighted " << std::abs(a - b) << ";";
  }
  {
    DiscParams p;
    p.gamma = -10.0;
    p.b = 1.0;
    p.n_r = 1024;
    bool mono = true;
    for (int m : {0, 1}) {
      double full = solve_disc_radial(p, m);
      for (double delta : {0.2, 0.4}) {
        DiscParams w = p;
        w.inner_wall = delta;
        if (solve_disc_radial(w, m) < full - 1e-10) mono = false;
      }
    }
    TubularSpec tspec;
    tspec.profile = g_disc;
    tspec.h = 1e-2;
    tspec.b = 1.0;
    tspec.beta0 = 0.5;
    tspec.rho = 0.45;
    tspec.n_s = 8;
    tspec.n_tau = 96;
    tspec.force_iterative = true;
    double mu_full = solve_tubular(tspec, 1).eigenvalues[0];
    TubularSpec cut = tspec;
    cut.n_tau = 72;
    cut.rho = std::log(tspec.tau_max() * 72.0 / 96.0) / std::log(1.0 / tspec.h);
    if (solve_tubular(cut, 1).eigenvalues[0] < mu_full - 1e-10) mono = false;
    if (!mono) ok = false;
    ss << " truncation-monotonicity " << (mono ? "yes" : "NO") << ";";
  }
  out.pass = ok;
  out.detail = ss.str();
  return out;
}

}  // namespace

int main() {
  {
    auto [dp, dm] = arc_length_reparametrize(BoundaryCurve::circle(1.0), 256);
    g_disc = std::make_shared<const CurvatureProfile>(std::move(dp));
    g_disc_m = dm;
    auto [ep, em] = arc_length_reparametrize(BoundaryCurve::ellipse(2.0, 1.0), 512);
    g_ellipse = std::make_shared<const CurvatureProfile>(std::move(ep));
    g_ellipse_m = em;
  }

  struct Entry {
    int id;
    const char* name;
    Outcome (*fn)();
  };
  std::vector<Entry> entries = {
      {1, "disc effective exactness", criterion1},
      {2, "half-line model quadratic law", criterion2},
      {3, "three-term expansion trend", criterion3},
      {4, "disc radial solver vs flux offset", criterion4},
      {5, "flux periodicity", criterion5},
      {6, "bracket sandwich ordering", criterion6},
      {7, "harmonic spacing", criterion7},
      {8, "trial-state residual scaling", criterion8},
      {9, "Agmon localization", criterion9},
      {10, "property suites", criterion10},
  };

  int failures = 0;
  for (const auto& e : entries) {
    auto t0 = std::chrono::steady_clock::now();
    Outcome res;
    try {
      res = e.fn();
    } catch (const std::exception& ex) {
      res.pass = false;
      res.detail = std::string("exception: ") + ex.what();
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("[%s] %2d. %-34s (%5.1fs) %s\n", res.pass ? "PASS" : "FAIL", e.id, e.name, secs,
                res.detail.c_str());
    std::fflush(stdout);
    if (!res.pass) ++failures;
  }
  if (failures) std::printf("%d criterion(s) failed\n", failures);
  return failures == 0 ? 0 : 1;
}
