#include "kernels_impl.hpp"

// Reference kernels. The tridiagonal matvec is written as three passes so
// the vector variant can use the same dataflow.

namespace rotsim::kernels {
namespace {

void phase_rotate(std::size_t n, const double* c, const double* s, double* re,
                  double* im) {
  for (std::size_t i = 0; i < n; ++i) {
    const double r = re[i], q = im[i];
    re[i] = r * c[i] - q * s[i];
    im[i] = r * s[i] + q * c[i];
  }
}

void tridiag_matvec(std::size_t n, const double* d, const double* off_re,
                    const double* off_im, const double* xr, const double* xi,
                    double* yr, double* yi) {
  for (std::size_t k = 0; k < n; ++k) {
    yr[k] = d[k] * xr[k];
    yi[k] = d[k] * xi[k];
  }
  for (std::size_t k = 0; k + 1 < n; ++k) {  // y_k += off_k x_{k+1}
    yr[k] += off_re[k] * xr[k + 1] - off_im[k] * xi[k + 1];
    yi[k] += off_re[k] * xi[k + 1] + off_im[k] * xr[k + 1];
  }
  for (std::size_t k = 0; k + 1 < n; ++k) {  // y_{k+1} += conj(off_k) x_k
    yr[k + 1] += off_re[k] * xr[k] + off_im[k] * xi[k];
    yi[k + 1] += off_re[k] * xi[k] - off_im[k] * xr[k];
  }
}

void basis_synthesis(std::size_t nj, std::size_t nth, const double* table,
                     const double* cr, const double* ci, double* out_re,
                     double* out_im) {
  for (std::size_t j = 0; j < nj; ++j) {
    const double* row = table + j * nth;
    const double a = cr[j], b = ci[j];
    for (std::size_t t = 0; t < nth; ++t) {
      out_re[t] += a * row[t];
      out_im[t] += b * row[t];
    }
  }
}

void weighted_modsq(std::size_t n, const double* re, const double* im,
                    double w, double* acc) {
  for (std::size_t i = 0; i < n; ++i)
    acc[i] += w * (re[i] * re[i] + im[i] * im[i]);
}

void rk4_combine(std::size_t n, double* yr, double* yi, const double* k1r,
                 const double* k1i, const double* k2r, const double* k2i,
                 const double* k3r, const double* k3i, const double* k4r,
                 const double* k4i, double h6) {
  for (std::size_t i = 0; i < n; ++i) {
    yr[i] += h6 * (k1r[i] + 2.0 * k2r[i] + 2.0 * k3r[i] + k4r[i]);
    yi[i] += h6 * (k1i[i] + 2.0 * k2i[i] + 2.0 * k3i[i] + k4i[i]);
  }
}

}  // namespace

const Ops& scalar_ops() {
  static const Ops ops{phase_rotate, tridiag_matvec, basis_synthesis,
                       weighted_modsq, rk4_combine};
  return ops;
}

}  // namespace rotsim::kernels
