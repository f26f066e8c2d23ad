#pragma once

#include <memory>

#include "robin/eigensolve.hpp"
#include "robin/geometry.hpp"

namespace robin {

// Periodic boundary operators -K (d/ds - i b beta0)^2 + V(s) on [-L, L).
// gamma_form and semiclassical are the same operator written in the two
// scalings (h = gamma^-2); full adds the -kappa^2 h / 2 term; bracket scales
// the kinetic coefficient by (1 +- c h^r), r = min(alpha, 1/2);
// disc_effective uses the constant disc potential -1 - sqrt(h) - h/2.
enum class EffectiveVariant { gamma_form, semiclassical, full, bracket, disc_effective };

struct EffectiveSpec {
  std::shared_ptr<const CurvatureProfile> profile;
  double h = 1e-2;
  double gamma = 0.0;  // optional; when set, h = gamma^-2 must hold
  double b = 0.0;
  double beta0 = 0.5;
  EffectiveVariant variant = EffectiveVariant::semiclassical;
  int bracket_sign = +1;
  double c = 1.0;
  double alpha = 0.5;

  double kinetic_coefficient() const;
  double potential(double s) const;
  void validate() const;
};

// heuristic resolution floor for the Fourier cutoff
int cutoff_floor(const EffectiveSpec& spec);
int default_cutoff(const EffectiveSpec& spec);

// Dense Hermitian matrix in the Fourier basis e^{i pi m s / L}, |m| <= M.
// Potential coefficients come from direct quadrature of the profile samples.
// The result carries a warning flag when M sits below the resolution floor.
HermitianSystem assemble_effective(const EffectiveSpec& spec, int M, bool* warning = nullptr);

EigenResult solve_effective(const EffectiveSpec& spec, int M, int k, bool want_vectors = false);

// Independent cross-validation path: second-order periodic finite differences
// with Peierls link phases exp(-i b beta0 ds).
EigenResult solve_effective_fd(const EffectiveSpec& spec, int n, int k);

struct FluxShiftReport {
  bool equal = false;
  double max_deviation = 0.0;
  double period_in_b = 0.0;  // pi / (L beta0)
};
// Spectra at b and b + pi/(L beta0) coincide (integer Fourier mode shift).
FluxShiftReport flux_shift_spectrum_check(const EffectiveSpec& spec, int M, int k = 8);

// Dirichlet operator -hbar^2 d^2/ds^2 + kappa_max - kappa(s) on (-L, L).
EigenResult dirichlet_fluxfree(const CurvatureProfile& profile, double hbar, int n, int k,
                               bool want_vectors = false);
// Fluxed variant with link phases and the same Dirichlet ends; the gauge is
// removable on an interval, so the spectrum must match dirichlet_fluxfree.
EigenResult dirichlet_fluxfree_fluxed(const CurvatureProfile& profile, double hbar, int n, int k,
                                      double b, double beta0);

struct SandwichRow {
  int index = 0;       // eigenvalue label, 1-based
  double lower = 0.0;  // lambda_n of the minus bracket
  double upper = 0.0;  // lambda_n of the plus bracket
  double mu = 0.0;     // reference eigenvalue (tubular)
  double defect_lower = 0.0;  // max(0, lower - mu)
  double defect_upper = 0.0;  // max(0, mu - upper)
};

// Ordering report lambda_n(-) <= mu_n <= lambda_n(+) for bracket pairs built
// from the same (h, b, profile); mu values are supplied by the caller.
std::vector<SandwichRow> bracket_sandwich(const EffectiveSpec& base, int M,
                                          const std::vector<double>& mu);

}  // namespace robin
