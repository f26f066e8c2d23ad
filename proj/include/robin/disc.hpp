#pragma once

#include <cmath>

#include "robin/eigensolve.hpp"

namespace robin {

// Unit-disc magnetic Robin problem, angular-mode decomposed. gamma <= 0 is
// the Robin parameter (gamma = 0 is the Neumann sanity limit); h = gamma^-2.
struct DiscParams {
  double gamma = -10.0;
  double b = 0.0;
  int n_r = 1024;
  double inner_wall = 0.0;  // delta > 0: artificial Dirichlet wall at r = 1 - delta
  int m_lo = 0, m_hi = 0;   // angular window override; both 0 = automatic

  static DiscParams from_h(double h) {
    DiscParams p;
    p.gamma = -1.0 / std::sqrt(h);
    return p;
  }
  double h() const { return 1.0 / (gamma * gamma); }
};

struct MagneticOffset {
  double value = 0.0;  // inf_m (m - b/2)^2
  int m = 0;           // minimizer, ties toward the smaller m
};
MagneticOffset magnetic_offset(double b);

// closed-form spectrum -1 - sqrt(h) - h/2 + h (m - b/2)^2, ascending
std::vector<double> disc_effective_lambda(double h, double b, int count);

// Lowest eigenvalue of the radial operator
//   -u'' - u'/r + (m/r - b r/2)^2 u,   u'(1) = -gamma u(1),
// in L^2(r dr), regular at r = 0 (half-cell offset grid). outside_window is
// set when |m| is so large that the mode cannot be minimal.
double solve_disc_radial(const DiscParams& p, int m, bool* outside_window = nullptr);

struct DiscModeTable {
  std::vector<int> modes;
  std::vector<double> lambda1;  // per-mode lowest eigenvalues (P normalization)
  int argmin_m = 0;
  double lambda_min = 0.0;  // min over modes, P normalization (~ -gamma^2)
  double mu1 = 0.0;         // h^2 * lambda_min, semiclassical normalization
  double residual = 0.0;    // (mu1 + h + h^{3/2}) / h^2, tends to inf_m(...) - 1/2
};
DiscModeTable solve_disc_full(const DiscParams& p);

}  // namespace robin
