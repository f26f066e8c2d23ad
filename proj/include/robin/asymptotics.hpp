#pragma once

#include "robin/geometry.hpp"

#include <vector>

namespace robin {

// Strong-coupling expansions, gamma < 0.
double expansion_two_term(double gamma, double kappa_max);
// adds (2n-1) sqrt(-kappa''/2) |gamma|^{1/2}; requires kappa_pp < 0
double expansion_three_term(double gamma, int n, double kappa_max, double kappa_pp);
// same expansion in operator units (divide by gamma^2):
// gamma^2 * effective_expansion == expansion_three_term exactly
double effective_expansion(double gamma, int n, double kappa_max, double kappa_pp);

struct DiscExpansion {
  double p_form = 0.0;         // -gamma^2 + gamma + inf_m(...) - 1/2
  double semiclassical = 0.0;  // -h - h^{3/2} + (inf_m(...) - 1/2) h^2
};
DiscExpansion disc_expansion_gamma(double gamma, double b);
DiscExpansion disc_expansion_h(double h, double b);

// (2n-1) sqrt(-kappa''(0)/2)
double harmonic_eigenvalue(int n, double kappa_pp);

// Arithmetic between the stages of the operator chain
//   0: full boundary operator (values near -1)
//   1: stage 0 shifted by +1
//   2: stage 1 scaled by h^{-1/2}
//   3: stage 2 with the kappa^2/2 term dropped   (remainder hbar^2)
//   4: stage 3 shifted by +kappa_max, bracket factor absorbed
//      (remainder hbar^{min(4 alpha, 2)})
// The inexact steps are identities on the value; their remainder order in
// hbar = h^{1/4} is accumulated, never silently absorbed.
struct ChainValue {
  double value = 0.0;
  double remainder_exponent = 1e300;  // min hbar-power among crossed inexact steps
};
ChainValue chain_transform(double lambda, int stage_from, int stage_to, double h, double alpha,
                           double kappa_max);

struct TrialStateReport {
  double residual = 0.0;  // || (L - (2n-1) hbar omega) Phi_n ||
  double norm = 0.0;      // || Phi_n ||
  double level = 0.0;     // (2n-1) hbar omega
};
// Cut-off Hermite trial state applied to the discrete flux-free Dirichlet
// operator; grid = 0 picks a step fine enough that the stencil error stays
// below the hbar^{3/2} scale. Requires a locally non-degenerate maximum.
TrialStateReport hermite_trial_residual(const CurvatureProfile& profile, int n, double hbar,
                                        int grid = 0);

struct AgmonCheck {
  double ratio = 0.0;      // int exp(2 eps phi0 / hbar)|psi|^2 / int |psi|^2
  double tail_mass = 0.0;  // share of mass beyond |s| >= hbar^{1/2 - rho}
  double lambda_over_hbar = 0.0;
};
// psi lives on the dirichlet_fluxfree interior grid (n-1 nodes). Refuses
// states whose eigenvalue is not O(hbar) (lambda / hbar > 10).
AgmonCheck agmon_weight_check(const CurvatureProfile& profile, const std::vector<double>& psi,
                              double lambda, double hbar, double epsilon, double rho);

// least-squares slope of log|y| against log x
double fit_loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

// One sweep row group: computed eigenvalue vs closed-form expansion.
struct ExpansionReport {
  std::vector<double> sweep;  // |gamma| or h per row
  std::vector<int> index;     // eigenvalue label per row
  std::vector<double> computed;
  std::vector<double> expansion;
  std::vector<double> residual;
  std::vector<double> normalized_residual;  // residual / remainder scale
  double slope = 0.0;                       // log-log slope of |residual| (>= 4 points)
};

// Assemble the report rows; the slope is fitted only when the sweep carries
// at least four points, otherwise it stays NaN.
ExpansionReport build_expansion_report(std::vector<double> sweep, std::vector<int> index,
                                       std::vector<double> computed, std::vector<double> expansion,
                                       std::vector<double> remainder_scale);

}  // namespace robin
