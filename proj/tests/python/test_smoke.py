"""Smoke tests for the python module: import, core values, cross-route checks."""

import math
import sys

import robin_spectra as rs


def approx(a, b, tol):
    assert abs(a - b) <= tol, f"{a} vs {b} (tol {tol})"


def main():
    # geometry
    disc = rs.profile("circle:1", 256)
    approx(disc.beta0, 0.5, 1e-12)
    approx(disc.L, math.pi, 1e-12)
    ell = rs.profile("ellipse:2:1", 512)
    approx(ell.kappa_max, 2.0, 1e-8)
    approx(ell.kappa_pp, -18.0, 1e-4)
    assert not ell.assumption_a          # two equal-curvature vertices
    assert ell.max_nondegenerate
    assert rs.harmonic_eigenvalue(1, ell.kappa_pp) == math.sqrt(-ell.kappa_pp / 2)

    # disc closed form vs assembled operator
    for h in (1e-2, 1e-3):
        for b in (0.0, 1.0, 3.7):
            closed = rs.disc_effective(h, b, 3)
            solved = rs.effective_eigenvalues(disc, h, b, "full", 3)
            for c, s in zip(closed, solved):
                approx(c, s, 1e-11)

    val, m = rs.magnetic_offset(3.7)
    approx(val, 0.0225, 1e-12)
    assert m == 2

    # half-line model
    lam = rs.h00(20.0, 4000)
    approx(lam[0], -1.0, 1e-4)
    a = rs.hbt(0.05, 15.0, 8000)
    w = rs.hbt(0.05, 15.0, 8000, weighted=True)
    approx(a[0], w[0], 1e-6)

    # flux periodicity of the effective operator
    e0 = rs.effective_eigenvalues(disc, 1e-3, 0.4, "full", 3)
    e1 = rs.effective_eigenvalues(disc, 1e-3, 2.4, "full", 3)
    for x, y in zip(e0, e1):
        approx(x, y, 1e-10)

    # small strip solve against the transverse level
    mu = rs.tubular_eigenvalues(disc, 1e-2, 0.0, 0.45, 8, 64, 1)
    approx(mu[0], -1.0 - 0.1 - 0.005, 5e-3)

    # expansion arithmetic
    approx(rs.expansion_two_term(-10.0, 1.0), -110.0, 1e-12)
    p_form, semi = rs.disc_expansion(1e-2, 0.0)
    approx(semi, -1e-2 - 1e-3 - 0.5e-4, 1e-12)

    print("python smoke: ok")
    return 0


if __name__ == "__main__":
    sys.exit(main())
