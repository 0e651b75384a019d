#pragma once

#include <cstddef>

// Hot inner loops, provided as scalar reference implementations plus an
// AVX2+FMA variant picked at runtime. Complex data is split re/im so the
// SIMD lanes stay dense. Every kernel is pure elementwise/streaming work;
// reductions happen in the callers so both backends produce near-identical
// results (tested to 1e-13).
//
// Backend selection: auto-detect at first use, overridable with the
// ROTSIM_SIMD environment variable (auto | scalar | avx2) or
// force_backend() from tests.

namespace rotsim::kernels {

enum class Backend { scalar, avx2 };

struct Ops {
  // (re,im) *= (c + i s), elementwise
  void (*phase_rotate)(std::size_t n, const double* c, const double* s,
                       double* re, double* im);

  // y = A x for Hermitian tridiagonal A with real diagonal d and
  // superdiagonal off = off_re + i off_im (length n-1)
  void (*tridiag_matvec)(std::size_t n, const double* d, const double* off_re,
                         const double* off_im, const double* xr,
                         const double* xi, double* yr, double* yi);

  // out += sum_j c_j * row_j for nj rows of length nth (row-major table)
  void (*basis_synthesis)(std::size_t nj, std::size_t nth, const double* table,
                          const double* cr, const double* ci, double* out_re,
                          double* out_im);

  // acc[i] += w * (re[i]^2 + im[i]^2)
  void (*weighted_modsq)(std::size_t n, const double* re, const double* im,
                         double w, double* acc);

  // y += h6 * (k1 + 2 k2 + 2 k3 + k4), applied to re and im planes
  void (*rk4_combine)(std::size_t n, double* yr, double* yi, const double* k1r,
                      const double* k1i, const double* k2r, const double* k2i,
                      const double* k3r, const double* k3i, const double* k4r,
                      const double* k4i, double h6);
};

const Ops& ops();                 // active backend
const Ops& ops(Backend backend);  // specific backend (tests)

Backend active_backend();
const char* backend_name(Backend backend);
bool avx2_supported();

/// Test hook; overrides auto-detection and ROTSIM_SIMD.
void force_backend(Backend backend);

}  // namespace rotsim::kernels
