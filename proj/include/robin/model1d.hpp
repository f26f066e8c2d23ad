#pragma once

#include <functional>

#include "robin/eigensolve.hpp"
#include "robin/geometry.hpp"

namespace robin {

// Half-line Robin model truncated to (0, T) with a Dirichlet wall at T.
// The weight 1 - B*tau stays within [2/3, 4/3] as long as |B| T < 1/3.
struct HalfLineSpec {
  double T = 20.0;
  int n = 2000;
  double B = 0.0;

  static int default_grid(double T) {
    double d = std::min(0.01, T / 2000.0);
    return (int)std::ceil(T / d);
  }
};

// Transverse operator at frozen curvature kappa_s: T = h^{-rho}, B = sqrt(h) kappa_s.
struct TransverseSpec {
  double kappa_s = 1.0;
  double h = 1e-3;
  double rho = 0.2;
};

struct TransverseResult {
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  std::vector<double> ground;  // weighted-measure normalized, ground[0] > 0
  double T = 0.0;
  double dtau = 0.0;
  int n = 0;
  double B = 0.0;
};

struct BornOppenheimerReport {
  std::vector<double> s;
  std::vector<double> R;  // ||d_s v||^2 in the local weighted measure
  double max_R = 0.0;
};

// Discrete quadratic form of -(1/a) d/dtau (a d/dtau) + V on (0,T) with
// u'(0) = robin_coeff * u(0) (ghost-point equivalent) and u(T) = 0, in the
// measure a dtau. Trapezoid mass with half weight at tau = 0.
HermitianSystem assemble_robin_dirichlet(double T, int n, double robin_coeff,
                                         const std::function<double(double)>& potential,
                                         const std::function<double(double)>& weight);

// Free half-line Robin Laplacian, u'(0) = -u(0). Lowest eigenvalue tends to
// -1 with the ground state sqrt(2) exp(-tau). Warns for T < 10 where the
// Dirichlet wall visibly contaminates the bound state.
EigenResult solve_H00(double T, int n, int k = 4, bool want_vectors = true);

// Transformed flat-measure form of the weighted operator: potential
// -B^2 / (4 (1 - B tau)^2), Robin coefficient -(1 + B/2), Dirichlet at T.
EigenResult solve_HBT(const HalfLineSpec& spec, int k = 4, bool want_vectors = true);

// The same operator solved as a generalized problem in the weighted measure
// (mass 1 - B tau_i); independent route used for cross-validation.
EigenResult solve_HBT_weighted(const HalfLineSpec& spec, int k = 4, bool want_vectors = true);

// Ground data of the transverse operator; n = 0 picks the default grid.
TransverseResult solve_transverse(const TransverseSpec& spec, int n = 0);

// integral of tau^order |v|^2 (1 - B tau) dtau by trapezoid on the grid
double transverse_moment(const TransverseResult& state, int order);

// R_h(s) = ||d_s v_{kappa(s),h}||^2 over a uniform s grid; central differences
// after fixing the phase by v(0) > 0. Throws if the transverse gap collapses.
BornOppenheimerReport born_oppenheimer_correction(const CurvatureProfile& profile, double h,
                                                  double rho, int n_s, int n_tau = 0);

}  // namespace robin
