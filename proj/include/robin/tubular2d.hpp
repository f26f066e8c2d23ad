#pragma once

#include <memory>

#include "robin/effective.hpp"
#include "robin/eigensolve.hpp"
#include "robin/geometry.hpp"

namespace robin {

// Boundary-layer operator on [-L, L) x (0, h^{-rho}): periodic in s, Robin
// at tau = 0, Dirichlet at tau = h^{-rho}, weighted by 1 - sqrt(h) tau kappa(s),
// with the fixed tangential gauge A = (beta0 - t + t^2 kappa / 2, 0).
struct TubularSpec {
  std::shared_ptr<const CurvatureProfile> profile;
  double h = 1e-2;
  double b = 0.0;
  double rho = 0.2;
  double beta0 = 0.5;
  int n_s = 32;
  int n_tau = 32;
  bool force_iterative = false;

  double tau_max() const { return std::pow(h, -rho); }
  // Throws when the weight degenerates on the strip. margin_ok reports the
  // |B| T < 1/3 window of the uniform estimates; rho_window reports
  // rho < 1/4 (needed by the bracket comparison, not by the operator).
  void validate(bool* margin_ok = nullptr, bool* rho_window = nullptr) const;
};

// Per-s transverse 1D system on the tubular tau grid (shared stencil).
HermitianSystem tubular_transverse_1d(const TubularSpec& spec, double kappa_val);

// Banded assembly: tau-major indexing, half-bandwidth n_tau, s-wrap entries.
BandedHermitian assemble_tubular_banded(const TubularSpec& spec);

// Dense form with the diagonal weight mass; dimension capped.
HermitianSystem assemble_tubular(const TubularSpec& spec);

EigenResult solve_tubular(const TubularSpec& spec, int k, bool want_vectors = false);

struct SandwichReport {
  std::vector<SandwichRow> rows;
  double fd_estimate = 0.0;          // Richardson grid-error estimate on mu
  double truncation_estimate = 0.0;  // transverse Dirichlet-wall shift estimate
  double h_power = 0.0;              // h^{2 - alpha - eta}
  double g = 0.0;                    // max(h_power, fd + truncation)
  bool ordering_ok = false;
  bool margin_ok = true;
};

// mu_n against the two bracket operators sharing (h, b, profile); the gap
// allowance combines the asymptotic remainder scale h^{2-alpha-eta} with
// computable numerical-error estimates (grid Richardson + transverse
// truncation).
SandwichReport sandwich_report(const TubularSpec& spec, double c, double alpha, int k,
                               double eta = 0.0);

}  // namespace robin
