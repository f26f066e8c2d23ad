#pragma once

namespace robin {

// Shared numeric tolerances. Values reflect what double-precision spectral
// interpolation of smooth boundary data can actually deliver.
inline constexpr double kTurningNumberTol = 1e-8;     // relative, on  (integral kappa ds) / 2pi
inline constexpr double kMaxTieTol = 1e-9;            // relative, second maximum detection
inline constexpr double kDegenerateCurvatureTol = 1e-6;  // |kappa''| below this counts as degenerate
inline constexpr double kAgmonRadicandTol = 1e-12;    // allowed negative excursion of kappa_max - kappa
inline constexpr double kResidualTol = 1e-8;          // eigensolver residual, scaled by 1 + |lambda|
inline constexpr double kCrossPathTol = 1e-6;         // independent-discretization agreement
inline constexpr double kSpectralMatchTol = 1e-10;    // same-operator different-route agreement

}  // namespace robin
