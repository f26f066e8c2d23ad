#include <doctest.h>

#include <cmath>
#include <numbers>

#include "robin/disc.hpp"
#include "robin/effective.hpp"

using namespace robin;

TEST_CASE("magnetic offset: integer, half-integer and generic flux") {
  auto z = magnetic_offset(0.0);
  CHECK(z.value == 0.0);
  CHECK(z.m == 0);
  auto half = magnetic_offset(1.0);
  CHECK(half.value == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(half.m == 0);  // tie resolved toward the smaller m
  auto gen = magnetic_offset(3.7);
  CHECK(gen.value == doctest::Approx(0.0225).epsilon(1e-13));
  CHECK(gen.m == 2);
  CHECK_THROWS(magnetic_offset(-1.0));
}

TEST_CASE("disc effective closed form") {
  auto v = disc_effective_lambda(1e-2, 0.0, 3);
  CHECK(v[0] == doctest::Approx(-1.105).epsilon(1e-15));
  // integer flux shift leaves the spectrum unchanged
  auto v2 = disc_effective_lambda(1e-2, 2.0, 3);
  for (int j = 0; j < 3; ++j) CHECK(v[j] == doctest::Approx(v2[j]).epsilon(1e-14));
}

TEST_CASE("disc effective closed form equals the assembled effective operator") {
  auto [prof, m] = arc_length_reparametrize(BoundaryCurve::circle(1.0), 128);
  auto profile = std::make_shared<const CurvatureProfile>(std::move(prof));
  for (double h : {1e-2, 1e-3, 1e-4}) {
    for (double b : {0.0, 1.0, 2.0, 3.7}) {
      EffectiveSpec spec;
      spec.profile = profile;
      spec.h = h;
      spec.b = b;
      spec.beta0 = 0.5;
      spec.variant = EffectiveVariant::full;  // kappa = 1 makes it the disc form
      auto solver = solve_effective(spec, 0, 4);
      auto closed = disc_effective_lambda(h, b, 4);
      for (int j = 0; j < 4; ++j)
        CHECK(std::abs(solver.eigenvalues[j] - closed[j]) < 1e-12);
    }
  }
}

TEST_CASE("radial solver: Neumann limit has an exact zero mode") {
  DiscParams p;
  p.gamma = 0.0;
  p.b = 0.0;
  p.n_r = 512;
  double l1 = solve_disc_radial(p, 0);
  CHECK(std::abs(l1) < 1e-9);
}

TEST_CASE("radial solver: strong-coupling two-term value at gamma = -10") {
  // lambda1 = -gamma^2 + gamma kappa_max + o(gamma) = -110 + O(1)
  DiscParams p;
  p.gamma = -10.0;
  p.b = 0.0;
  p.n_r = 2048;
  double l1 = solve_disc_radial(p, 0);
  CHECK(l1 > -111.5);
  CHECK(l1 < -109.5);
}

TEST_CASE("radial solver: second-order grid convergence") {
  DiscParams p;
  p.gamma = -10.0;
  p.b = 1.0;
  double l1 = 0.0, l2 = 0.0, l4 = 0.0;
  p.n_r = 512;
  l1 = solve_disc_radial(p, 0);
  p.n_r = 1024;
  l2 = solve_disc_radial(p, 0);
  p.n_r = 2048;
  l4 = solve_disc_radial(p, 0);
  double ref = l4 + (l4 - l2) / 3.0;  // Richardson limit
  double ratio = std::abs(l1 - ref) / std::abs(l2 - ref);
  CHECK(ratio > 3.3);
  CHECK(ratio < 4.7);
}

TEST_CASE("radial solver: unimodal in m around the flux minimum") {
  DiscParams p = DiscParams::from_h(1e-3);
  p.b = 1.0;
  p.n_r = 512;
  std::vector<double> lam;
  for (int m = -3; m <= 4; ++m) lam.push_back(solve_disc_radial(p, m));
  int best = (int)(std::min_element(lam.begin(), lam.end()) - lam.begin());
  for (int j = 1; j <= best; ++j) CHECK(lam[j] <= lam[j - 1] + 1e-12);
  for (int j = best + 1; j < (int)lam.size(); ++j) CHECK(lam[j] >= lam[j - 1] - 1e-12);
}

TEST_CASE("radial solver: Neumann value approached from below as gamma -> 0-") {
  DiscParams p;
  p.b = 0.0;
  p.n_r = 512;
  double prev = -1e300;
  for (double g : {-0.5, -0.1, -0.01}) {
    p.gamma = g;
    double l1 = solve_disc_radial(p, 0);
    CHECK(l1 < 0.0);
    CHECK(l1 > prev);
    prev = l1;
  }
}

TEST_CASE("radial solver: inner Dirichlet wall never lowers the ground level") {
  DiscParams p;
  p.gamma = -10.0;
  p.b = 1.0;
  p.n_r = 1024;
  for (int m : {0, 1}) {
    double full = solve_disc_radial(p, m);
    for (double delta : {0.2, 0.4}) {
      DiscParams w = p;
      w.inner_wall = delta;
      CHECK(solve_disc_radial(w, m) >= full - 1e-10);
    }
  }
}

TEST_CASE("radial solver: b = 0 modes are even in m") {
  DiscParams p;
  p.gamma = -8.0;
  p.b = 0.0;
  p.n_r = 512;
  for (int m : {1, 2, 3})
    CHECK(solve_disc_radial(p, m) == doctest::Approx(solve_disc_radial(p, -m)).epsilon(1e-14));
}

TEST_CASE("full disc solve: residual approaches inf_m(m-b/2)^2 - 1/2") {
  for (double b : {0.0, 1.0}) {
    DiscParams p = DiscParams::from_h(1e-3);
    p.b = b;
    p.n_r = 1024;
    auto coarse = solve_disc_full(p);
    p.n_r = 2048;
    auto fine = solve_disc_full(p);
    double mu_rich = fine.mu1 + (fine.mu1 - coarse.mu1) / 3.0;
    double h = p.h();
    double residual = (mu_rich + h + std::pow(h, 1.5)) / (h * h);
    double target = magnetic_offset(b).value - 0.5;
    CHECK(std::abs(residual - target) < 0.1 * std::abs(target) + 0.02);
    CHECK(fine.argmin_m == magnetic_offset(b).m);
  }
}

TEST_CASE("full disc solve: per-mode table symmetric at b = 0") {
  DiscParams p = DiscParams::from_h(1e-2);
  p.b = 0.0;
  p.n_r = 512;
  auto table = solve_disc_full(p);
  for (size_t j = 0; j < table.modes.size(); ++j) {
    int m = table.modes[j];
    for (size_t i = 0; i < table.modes.size(); ++i)
      if (table.modes[i] == -m)
        CHECK(table.lambda1[j] == doctest::Approx(table.lambda1[i]).epsilon(1e-13));
  }
}

TEST_CASE("full disc solve: window edge raises an error") {
  DiscParams p = DiscParams::from_h(1e-2);
  p.b = 8.0;  // argmin at m = 4
  p.n_r = 512;
  p.m_lo = 0;
  p.m_hi = 2;
  CHECK_THROWS(solve_disc_full(p));
}

TEST_CASE("radial solver: window flag for absurd modes") {
  DiscParams p;
  p.gamma = -5.0;
  p.n_r = 512;
  bool outside = false;
  solve_disc_radial(p, 200, &outside);
  CHECK(outside);
  solve_disc_radial(p, 3, &outside);
  CHECK_FALSE(outside);
}
