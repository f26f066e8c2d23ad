#include "robin/asymptotics.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "robin/disc.hpp"

namespace robin {

namespace {
using std::numbers::pi;

void require_gamma(double gamma) {
  if (!(gamma < 0.0)) throw std::invalid_argument("expansion: gamma must be negative");
}

void require_concave(double kappa_pp) {
  if (!(kappa_pp < 0.0))
    throw std::invalid_argument("expansion: kappa''(0) must be negative (assumption A)");
}

}  // namespace

double expansion_two_term(double gamma, double kappa_max) {
  require_gamma(gamma);
  return -gamma * gamma + kappa_max * gamma;
}

double expansion_three_term(double gamma, int n, double kappa_max, double kappa_pp) {
  require_gamma(gamma);
  require_concave(kappa_pp);
  if (n < 1) throw std::invalid_argument("expansion: n >= 1");
  return -gamma * gamma + kappa_max * gamma +
         (2.0 * n - 1.0) * std::sqrt(-kappa_pp / 2.0) * std::sqrt(-gamma);
}

double effective_expansion(double gamma, int n, double kappa_max, double kappa_pp) {
  require_gamma(gamma);
  require_concave(kappa_pp);
  if (n < 1) throw std::invalid_argument("expansion: n >= 1");
  double ag = -gamma;
  return -1.0 + kappa_max / gamma + (2.0 * n - 1.0) * std::sqrt(-kappa_pp / 2.0) / (ag * std::sqrt(ag));
}

DiscExpansion disc_expansion_gamma(double gamma, double b) {
  require_gamma(gamma);
  double inf = magnetic_offset(b).value;
  DiscExpansion out;
  out.p_form = -gamma * gamma + gamma + inf - 0.5;
  double h = 1.0 / (gamma * gamma);
  out.semiclassical = -h - std::pow(h, 1.5) + (inf - 0.5) * h * h;
  return out;
}

DiscExpansion disc_expansion_h(double h, double b) {
  if (!(h > 0.0 && h < 1.0)) throw std::invalid_argument("disc_expansion: h in (0,1)");
  return disc_expansion_gamma(-1.0 / std::sqrt(h), b);
}

double harmonic_eigenvalue(int n, double kappa_pp) {
  require_concave(kappa_pp);
  if (n < 1) throw std::invalid_argument("harmonic_eigenvalue: n >= 1");
  return (2.0 * n - 1.0) * std::sqrt(-kappa_pp / 2.0);
}

ChainValue chain_transform(double lambda, int stage_from, int stage_to, double h, double alpha,
                           double kappa_max) {
  if (stage_from < 0 || stage_from > 4 || stage_to < 0 || stage_to > 4)
    throw std::invalid_argument("chain_transform: stages are 0..4");
  if (!(h > 0.0 && h < 1.0)) throw std::invalid_argument("chain_transform: h in (0,1)");
  ChainValue out;
  out.value = lambda;
  int dir = (stage_to >= stage_from) ? 1 : -1;
  for (int s = stage_from; s != stage_to; s += dir) {
    int step = (dir > 0) ? s : s - 1;  // the edge being crossed, between step and step+1
    switch (step) {
      case 0:
        out.value += dir > 0 ? 1.0 : -1.0;
        break;
      case 1:
        out.value *= (dir > 0) ? 1.0 / std::sqrt(h) : std::sqrt(h);
        break;
      case 2:
        // kappa^2/2 drop: value unchanged, O(hbar^2) remainder
        out.remainder_exponent = std::min(out.remainder_exponent, 2.0);
        break;
      case 3:
        out.value += dir > 0 ? kappa_max : -kappa_max;
        // bracket-factor absorption, O(hbar^{min(4 alpha, 2)})
        out.remainder_exponent = std::min(out.remainder_exponent, std::min(4.0 * alpha, 2.0));
        break;
    }
  }
  return out;
}

namespace {

// smooth bump: 1 on [-1/4, 1/4], 0 outside (-1/2, 1/2)
double cutoff_chi(double u) {
  double a = std::abs(u);
  if (a <= 0.25) return 1.0;
  if (a >= 0.5) return 0.0;
  double t = 4.0 * (a - 0.25);
  auto g = [](double x) { return (x <= 0.0) ? 0.0 : std::exp(-1.0 / x); };
  return g(1.0 - t) / (g(1.0 - t) + g(t));
}

// normalized Hermite functions, -psi'' + x^2 psi = (2k+1) psi
double hermite_function(int k, double x) {
  double p0 = std::pow(pi, -0.25) * std::exp(-0.5 * x * x);
  if (k == 0) return p0;
  double p1 = std::sqrt(2.0) * x * p0;
  for (int j = 2; j <= k; ++j) {
    double p2 = std::sqrt(2.0 / j) * x * p1 - std::sqrt((j - 1.0) / j) * p0;
    p0 = p1;
    p1 = p2;
  }
  return p1;
}

}  // namespace

TrialStateReport hermite_trial_residual(const CurvatureProfile& profile, int n, double hbar,
                                        int grid) {
  if (n < 1 || n > 10) throw std::invalid_argument("hermite_trial_residual: n in 1..10");
  if (!(hbar > 0.0 && hbar < 1.0)) throw std::invalid_argument("hermite_trial_residual: hbar in (0,1)");
  if (!profile.max_info.max_nondegenerate)
    throw std::invalid_argument("hermite_trial_residual: curvature maximum is degenerate");
  const double L = profile.L;
  const double omega = std::sqrt(-profile.max_info.kappa_pp / 2.0);
  const double kmax = profile.max_info.kappa_max;

  int ng = grid;
  if (ng <= 0) {
    // keep the stencil truncation below the hbar^{3/2} residual scale
    double target = 0.05 * std::pow(hbar, 7.0 / 8.0);
    ng = (int)std::ceil(2.0 * L / target);
    ng = std::max(ng, 20000);
  }
  double ds = 2.0 * L / ng;
  double E = (2.0 * n - 1.0) * hbar * omega;

  // f_n(sigma) = omega^{1/4} psi_{n-1}(sqrt(omega) sigma) is L2-normalized in sigma
  std::vector<double> phi(ng + 1, 0.0);
  double rt_om = std::sqrt(omega);
  for (int i = 1; i < ng; ++i) {
    double s = -L + i * ds;
    double sigma = s / std::sqrt(hbar);
    phi[i] = std::pow(hbar, -0.25) * cutoff_chi(s / (2.0 * L)) * std::pow(omega, 0.25) *
             hermite_function(n - 1, rt_om * sigma);
  }
  double res2 = 0.0, nrm2 = 0.0;
  for (int i = 1; i < ng; ++i) {
    double s = -L + i * ds;
    double lap = (phi[i - 1] - 2.0 * phi[i] + phi[i + 1]) / (ds * ds);
    double r = -hbar * hbar * lap + (kmax - profile.kappa(s)) * phi[i] - E * phi[i];
    res2 += r * r * ds;
    nrm2 += phi[i] * phi[i] * ds;
  }
  TrialStateReport rep;
  rep.residual = std::sqrt(res2);
  rep.norm = std::sqrt(nrm2);
  rep.level = E;
  return rep;
}

AgmonCheck agmon_weight_check(const CurvatureProfile& profile, const std::vector<double>& psi,
                              double lambda, double hbar, double epsilon, double rho) {
  if (!(epsilon > 0.0 && epsilon < 1.0))
    throw std::invalid_argument("agmon_weight_check: epsilon in (0,1)");
  if (!(rho > 0.0 && rho < 0.5)) throw std::invalid_argument("agmon_weight_check: rho in (0,1/2)");
  AgmonCheck out;
  out.lambda_over_hbar = lambda / hbar;
  if (out.lambda_over_hbar > 10.0)
    throw std::invalid_argument("agmon_weight_check: eigenvalue is not O(hbar)");

  int n = (int)psi.size() + 1;  // interior nodes of the Dirichlet grid
  const double L = profile.L;
  double ds = 2.0 * L / n;
  std::vector<double> svals(psi.size());
  for (size_t i = 0; i < psi.size(); ++i) svals[i] = -L + (double)(i + 1) * ds;
  auto phi0 = agmon_distance_table(profile, svals);

  // Entries below the numerical noise floor of the eigenvector carry no
  // information; the exponential weight would amplify pure roundoff there,
  // while the true integrand exp((2 eps - 2) phi0 / hbar) is already
  // negligible at that amplitude.
  double vmax = 0.0;
  for (double v : psi) vmax = std::max(vmax, std::abs(v));
  double floor = 1e-13 * vmax;

  double num = 0.0, den = 0.0, tail = 0.0;
  double cut = std::pow(hbar, 0.5 - rho);
  for (size_t i = 0; i < psi.size(); ++i) {
    double p2 = psi[i] * psi[i];
    den += p2;
    if (std::abs(psi[i]) > floor)
      num += std::exp(2.0 * epsilon * phi0[i] / hbar + std::log(p2));
    if (std::abs(svals[i]) >= cut) tail += p2;
  }
  out.ratio = num / den;
  out.tail_mass = tail / den;
  return out;
}

ExpansionReport build_expansion_report(std::vector<double> sweep, std::vector<int> index,
                                       std::vector<double> computed, std::vector<double> expansion,
                                       std::vector<double> remainder_scale) {
  size_t n = sweep.size();
  if (index.size() != n || computed.size() != n || expansion.size() != n ||
      remainder_scale.size() != n)
    throw std::invalid_argument("build_expansion_report: column length mismatch");
  ExpansionReport rep;
  rep.sweep = std::move(sweep);
  rep.index = std::move(index);
  rep.computed = std::move(computed);
  rep.expansion = std::move(expansion);
  rep.residual.resize(n);
  rep.normalized_residual.resize(n);
  for (size_t i = 0; i < n; ++i) {
    rep.residual[i] = rep.computed[i] - rep.expansion[i];
    rep.normalized_residual[i] = rep.residual[i] / remainder_scale[i];
  }
  rep.slope = (n >= 4) ? fit_loglog_slope(rep.sweep, rep.residual)
                       : std::numeric_limits<double>::quiet_NaN();
  return rep;
}

double fit_loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("fit_loglog_slope: need matching arrays, >= 2 points");
  double mx = 0.0, my = 0.0;
  size_t n = x.size();
  std::vector<double> lx(n), ly(n);
  for (size_t i = 0; i < n; ++i) {
    lx[i] = std::log(std::abs(x[i]));
    ly[i] = std::log(std::max(std::abs(y[i]), 1e-300));
    mx += lx[i];
    my += ly[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (size_t i = 0; i < n; ++i) {
    sxy += (lx[i] - mx) * (ly[i] - my);
    sxx += (lx[i] - mx) * (lx[i] - mx);
  }
  return sxy / sxx;
}

}  // namespace robin
