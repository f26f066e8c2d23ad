#pragma once

#include <array>
#include <complex>
#include <string>
#include <utility>
#include <vector>

namespace robin {

// Trigonometric interpolant of a real periodic function given by N uniform
// samples on [x0, x0 + period). Evaluation, derivatives and the antiderivative
// are spectral.
class TrigSeries {
 public:
  TrigSeries() = default;
  TrigSeries(std::vector<double> samples, double period, double x0);

  double operator()(double x) const;
  double derivative(double x) const;
  double second_derivative(double x) const;
  double antiderivative(double x) const;  // integral from x0 to x
  double mean() const { return coeff_.empty() ? 0.0 : coeff_[0].real(); }
  int sample_count() const { return nsamples_; }
  double period() const { return period_; }

 private:
  std::vector<std::complex<double>> coeff_;  // k = 0..K, real symmetry implied
  double period_ = 0.0;
  double x0_ = 0.0;
  int nsamples_ = 0;
};

// Smooth closed planar boundary, counterclockwise.
struct BoundaryCurve {
  enum class Kind { circle, ellipse, parametric };
  Kind kind = Kind::circle;
  double radius = 1.0;
  double a = 1.0, b = 1.0;
  std::vector<std::array<double, 2>> points;  // parametric kind, closed

  static BoundaryCurve circle(double R);
  static BoundaryCurve ellipse(double a, double b);
  static BoundaryCurve parametric(std::vector<std::array<double, 2>> closed_points);
  // "circle:R" or "ellipse:a:b"
  static BoundaryCurve from_preset(const std::string& id);
  // CSV with columns x1,x2 (header optional), closed polyline samples
  static BoundaryCurve from_csv(const std::string& path);
};

struct CurvatureMax {
  double kappa_max = 0.0;
  double s_star = 0.0;
  double kappa_pp = 0.0;        // arc-length second derivative at s_star
  bool max_is_unique = false;   // no second sample attains the max away from s_star
  bool max_nondegenerate = false;  // |kappa''| above the degeneracy floor
  bool assumption_a = false;       // unique and non-degenerate
};

// Periodic curvature kappa(s) on [-L, L), sampled uniformly in arc length with
// s = 0 at the curvature maximum. Immutable after construction.
struct CurvatureProfile {
  double L = 0.0;
  std::vector<double> samples;  // kappa at s_k = -L + k * (2L/N)
  TrigSeries interp;
  std::string provenance;
  CurvatureMax max_info;

  // cumulative Agmon integrand table on a refined grid (internal)
  std::vector<double> agmon_cum;
  int agmon_refine = 0;

  double kappa(double s) const { return interp(s); }
  int size() const { return (int)samples.size(); }
  double step() const { return 2.0 * L / (double)samples.size(); }

  // Synthetic profiles for model studies; the closed-curve turning-number
  // check cannot apply and is skipped.
  static CurvatureProfile from_samples(double L, std::vector<double> kappa,
                                       std::string provenance = "synthetic");
  // Same sample data with the origin rotated by k grid steps.
  CurvatureProfile rotated(int k) const;
};

struct DomainMetrics {
  double area = 0.0;
  double perimeter = 0.0;
  double beta0 = 0.0;  // area / perimeter, the flux constant
  double kappa_max = 0.0;
  double s_star = 0.0;
  double kappa_pp = 0.0;
  bool assumption_a = false;
};

// Uniform arc-length sampling of the boundary curvature plus domain metrics.
// n >= 64 samples; the arc-length origin is placed at the curvature maximum.
std::pair<CurvatureProfile, DomainMetrics> arc_length_reparametrize(const BoundaryCurve& curve,
                                                                    int n);

// Maximum of the trigonometric interpolant, refined, with the degeneracy and
// uniqueness flags.
CurvatureMax curvature_max(const CurvatureProfile& profile);

// Agmon distance phi0(s) = min_k | int_0^{s+2kL} sqrt(kappa_max - kappa) |.
double agmon_distance(const CurvatureProfile& profile, double s);
std::vector<double> agmon_distance_table(const CurvatureProfile& profile,
                                         const std::vector<double>& s_values);

}  // namespace robin
