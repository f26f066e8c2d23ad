#include "robin/model1d.hpp"

#include <cmath>
#include <stdexcept>

namespace robin {

HermitianSystem assemble_robin_dirichlet(double T, int n, double robin_coeff,
                                         const std::function<double(double)>& potential,
                                         const std::function<double(double)>& weight) {
  if (!(T > 0.0)) throw std::invalid_argument("assemble_robin_dirichlet: T must be positive");
  if (n < 16) throw std::invalid_argument("assemble_robin_dirichlet: need n >= 16");
  double dt = T / n;
  std::vector<double> d(n), e(n - 1), mass(n);
  for (int i = 0; i < n; ++i) {
    double tau = i * dt;
    double w_left = (i > 0) ? weight((i - 0.5) * dt) : 0.0;
    double w_right = weight((i + 0.5) * dt);
    double quad = (i == 0) ? 0.5 : 1.0;  // trapezoid weight
    double ai = weight(tau);
    d[i] = (w_left + w_right) / dt + potential(tau) * ai * quad * dt;
    if (i == 0) d[i] += robin_coeff * weight(0.0);
    mass[i] = ai * quad * dt;
    if (i + 1 < n) e[i] = -w_right / dt;
  }
  auto sys = HermitianSystem::make_tridiagonal(std::move(d), std::move(e));
  sys.mass = std::move(mass);
  return sys;
}

EigenResult solve_H00(double T, int n, int k, bool want_vectors) {
  auto sys = assemble_robin_dirichlet(
      T, n, -1.0, [](double) { return 0.0; }, [](double) { return 1.0; });
  auto res = eigh_tridiagonal(sys, k, want_vectors);
  res.step = T / n;
  res.n = n;
  if (T < 10.0) {
    res.warning = true;
    res.note = "T < 10: Dirichlet truncation visibly shifts the bound state";
  }
  return res;
}

namespace {

// Hard requirement: the weight 1 - B tau must stay positive with margin on
// (0, T), otherwise neither form of the operator exists. The stricter
// |B| T < 1/3 window (where the weight stays within [2/3, 4/3]) is reported
// as a warning flag instead; the uniform asymptotic bounds are only
// guaranteed inside it.
bool check_halfline(const HalfLineSpec& spec) {
  if (spec.B > 0.0 && 1.0 - spec.B * spec.T < 0.1)
    throw std::invalid_argument("half-line model: weight 1 - B tau degenerates before T");
  if (spec.n < 16) throw std::invalid_argument("half-line model: need n >= 16");
  return std::abs(spec.B) * spec.T < 1.0 / 3.0;
}

void flag_margin(EigenResult& res, bool margin_ok) {
  if (!margin_ok) {
    res.warning = true;
    res.note = "|B| T >= 1/3: outside the uniform-estimate window";
  }
}

}  // namespace

EigenResult solve_HBT(const HalfLineSpec& spec, int k, bool want_vectors) {
  bool margin_ok = check_halfline(spec);
  double B = spec.B;
  auto sys = assemble_robin_dirichlet(
      spec.T, spec.n, -(1.0 + 0.5 * B),
      [B](double tau) {
        double a = 1.0 - B * tau;
        return -B * B / (4.0 * a * a);
      },
      [](double) { return 1.0; });
  auto res = eigh_tridiagonal(sys, k, want_vectors);
  res.step = spec.T / spec.n;
  res.n = spec.n;
  flag_margin(res, margin_ok);
  return res;
}

EigenResult solve_HBT_weighted(const HalfLineSpec& spec, int k, bool want_vectors) {
  bool margin_ok = check_halfline(spec);
  double B = spec.B;
  auto sys = assemble_robin_dirichlet(
      spec.T, spec.n, -1.0, [](double) { return 0.0; },
      [B](double tau) { return 1.0 - B * tau; });
  auto res = eigh_tridiagonal(sys, k, want_vectors);
  res.step = spec.T / spec.n;
  res.n = spec.n;
  flag_margin(res, margin_ok);
  return res;
}

TransverseResult solve_transverse(const TransverseSpec& spec, int n) {
  if (!(spec.h > 0.0 && spec.h < 1.0)) throw std::invalid_argument("transverse: h in (0,1)");
  if (!(spec.rho > 0.0 && spec.rho < 0.5)) throw std::invalid_argument("transverse: rho in (0,1/2)");
  HalfLineSpec hl;
  hl.T = std::pow(spec.h, -spec.rho);
  hl.B = std::sqrt(spec.h) * spec.kappa_s;
  hl.n = (n > 0) ? n : HalfLineSpec::default_grid(hl.T);
  auto res = solve_HBT_weighted(hl, 2, true);

  TransverseResult out;
  out.lambda1 = res.eigenvalues[0];
  out.lambda2 = res.eigenvalues.size() > 1 ? res.eigenvalues[1] : res.eigenvalues[0];
  out.ground = res.real_vectors[0];
  out.T = hl.T;
  out.n = hl.n;
  out.dtau = hl.T / hl.n;
  out.B = hl.B;
  if (out.ground[0] < 0.0)
    for (auto& v : out.ground) v = -v;
  return out;
}

double transverse_moment(const TransverseResult& state, int order) {
  double s = 0.0;
  for (int i = 0; i < state.n; ++i) {
    double tau = i * state.dtau;
    double w = (i == 0) ? 0.5 : 1.0;
    s += std::pow(tau, order) * state.ground[i] * state.ground[i] * (1.0 - state.B * tau) * w *
         state.dtau;
  }
  return s;
}

BornOppenheimerReport born_oppenheimer_correction(const CurvatureProfile& profile, double h,
                                                  double rho, int n_s, int n_tau) {
  if (n_s < 8) throw std::invalid_argument("born_oppenheimer: need n_s >= 8");
  double T = std::pow(h, -rho);
  int n = (n_tau > 0) ? n_tau : HalfLineSpec::default_grid(T);
  double L = profile.L;
  double ds = 2.0 * L / n_s;

  std::vector<TransverseResult> states(n_s);
  for (int j = 0; j < n_s; ++j) {
    TransverseSpec ts;
    ts.kappa_s = profile.kappa(-L + j * ds);
    ts.h = h;
    ts.rho = rho;
    states[j] = solve_transverse(ts, n);
    if (states[j].lambda2 - states[j].lambda1 < 1e-8)
      throw std::runtime_error("born_oppenheimer: transverse gap collapsed, differencing invalid");
  }

  BornOppenheimerReport rep;
  rep.s.resize(n_s);
  rep.R.resize(n_s);
  for (int j = 0; j < n_s; ++j) {
    rep.s[j] = -L + j * ds;
    const auto& vm = states[(j + n_s - 1) % n_s].ground;
    const auto& vp = states[(j + 1) % n_s].ground;
    double B = states[j].B;
    double dtau = states[j].dtau;
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
      double dv = (vp[i] - vm[i]) / (2.0 * ds);
      double w = (i == 0) ? 0.5 : 1.0;
      acc += dv * dv * (1.0 - B * i * dtau) * w * dtau;
    }
    rep.R[j] = acc;
    rep.max_R = std::max(rep.max_R, acc);
  }
  return rep;
}

}  // namespace robin
