#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace robin {

using cplx = std::complex<double>;

// Hermitian eigenproblem container. Either a dense complex Hermitian matrix
// or a real symmetric tridiagonal one, optionally with a positive diagonal
// mass (generalized problem A v = lambda M v).
struct HermitianSystem {
  int n = 0;
  std::vector<cplx> dense;      // row-major n*n; empty for tridiagonal kind
  std::vector<double> diag;     // tridiagonal kind
  std::vector<double> offdiag;  // size n-1
  std::vector<double> mass;     // empty means identity

  bool is_dense() const { return !dense.empty(); }

  static HermitianSystem make_dense(int n, std::vector<cplx> a);
  static HermitianSystem make_tridiagonal(std::vector<double> d, std::vector<double> e);
};

struct EigenResult {
  std::vector<double> eigenvalues;  // ascending
  // Eigenvectors when requested; M-orthonormal for generalized problems.
  // Tridiagonal solves fill real_vectors, dense solves fill complex_vectors.
  std::vector<std::vector<double>> real_vectors;
  std::vector<std::vector<cplx>> complex_vectors;
  std::vector<double> residuals;  // ||A v - lambda M v|| / ||v||

  // grid / assembly metadata, filled by operator modules
  int n = 0;
  double step = 0.0;
  int cutoff = 0;
  bool warning = false;
  std::string note;
};

inline constexpr int kDenseCap = 4096;

// Dense path: Householder tridiagonalization + implicit-shift QL.
// k < 0 returns the full spectrum.
EigenResult eigh_dense(const HermitianSystem& sys, int k = -1, bool want_vectors = false);

// Tridiagonal path: Sturm-sequence bisection for the k lowest eigenvalues,
// inverse iteration for the vectors. Zero off-diagonals split into blocks.
EigenResult eigh_tridiagonal(const HermitianSystem& sys, int k, bool want_vectors = false);

// D^{-1/2} A D^{-1/2} similarity removing a diagonal mass; spectrum preserved
// exactly. Throws on non-positive mass.
HermitianSystem symmetrize_mass(const HermitianSystem& sys);

// ---------------------------------------------------------------------------
// Banded Hermitian operators (periodic stencils) and the iterative path.

// Hermitian matrix with half-bandwidth w plus an optional set of far
// off-band entries (periodic wrap couplings). Lower bands are stored:
// band(o)[i] = A[i+o][i], o = 0..w. Wrap entries are given once with
// row < col; the conjugate transpose entry is implied.
struct BandedHermitian {
  int dim = 0;
  int w = 0;
  std::vector<std::vector<cplx>> bands;  // bands[o] has dim - o entries
  struct Wrap {
    int row, col;
    cplx value;
  };
  std::vector<Wrap> wraps;
  std::vector<double> mass;  // empty means identity

  void matvec(const cplx* x, cplx* y) const;  // y = A x (no mass)
  BandedHermitian symmetrized() const;        // fold mass into the matrix
};

struct IterativeOptions {
  int max_iterations = 400;
  double tol = 1e-10;              // Ritz value stabilization
  double residual_tol = 1e-8;      // certification threshold on ||Av-lv||/(1+|l|)
  double shift = 0.0;              // spectral shift; 0 = auto from lower bound
  bool have_shift = false;
};

// Lowest k eigenpairs of a banded Hermitian (mass already folded in) by
// shift-invert Lanczos with full reorthogonalization. Two deterministic
// starts (all-ones and a fixed pseudo-random pattern) are merged so that
// symmetry-orthogonal states are not missed. Residual-certified; throws
// with diagnostics on non-convergence.
EigenResult lowest_eigenpairs_banded(const BandedHermitian& a, int k,
                                     const IterativeOptions& opts = {},
                                     bool want_vectors = false);

}  // namespace robin
