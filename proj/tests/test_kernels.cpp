#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "rotsim/kernels.hpp"

using namespace rotsim;
namespace kn = rotsim::kernels;

namespace {

struct RandomData {
  std::mt19937 rng{987654};
  std::uniform_real_distribution<double> dist{-1.0, 1.0};
  std::vector<double> vec(std::size_t n) {
    std::vector<double> v(n);
    for (auto& x : v) x = dist(rng);
    return v;
  }
};

const std::vector<std::size_t> sizes = {1, 2, 3, 4, 5, 7, 8, 15, 16, 17, 33,
                                        64, 67};

void check_close(const std::vector<double>& a, const std::vector<double>& b,
                 double tol) {
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    CHECK(a[i] == doctest::Approx(b[i]).epsilon(tol));
}

}  // namespace

TEST_CASE("backend dispatch") {
  const kn::Backend original = kn::active_backend();
  kn::force_backend(kn::Backend::scalar);
  CHECK(kn::active_backend() == kn::Backend::scalar);
  CHECK(std::string(kn::backend_name(kn::active_backend())) == "scalar");
  if (kn::avx2_supported()) {
    kn::force_backend(kn::Backend::avx2);
    CHECK(kn::active_backend() == kn::Backend::avx2);
  }
  kn::force_backend(original);
}

TEST_CASE("phase rotate: backends agree and invert") {
  RandomData rd;
  for (std::size_t n : sizes) {
    const auto re0 = rd.vec(n), im0 = rd.vec(n);
    std::vector<double> phi = rd.vec(n), c(n), s(n), cm(n), sm(n);
    for (std::size_t i = 0; i < n; ++i) {
      c[i] = std::cos(phi[i]);
      s[i] = std::sin(phi[i]);
      cm[i] = std::cos(phi[i]);
      sm[i] = -std::sin(phi[i]);
    }
    auto re_s = re0, im_s = im0;
    kn::ops(kn::Backend::scalar)
        .phase_rotate(n, c.data(), s.data(), re_s.data(), im_s.data());
    // against std::complex
    for (std::size_t i = 0; i < n; ++i) {
      const auto z = std::complex<double>(re0[i], im0[i]) *
                     std::exp(std::complex<double>(0.0, phi[i]));
      CHECK(re_s[i] == doctest::Approx(z.real()).epsilon(1e-14));
      CHECK(im_s[i] == doctest::Approx(z.imag()).epsilon(1e-14));
    }
    if (kn::avx2_supported()) {
      auto re_v = re0, im_v = im0;
      kn::ops(kn::Backend::avx2)
          .phase_rotate(n, c.data(), s.data(), re_v.data(), im_v.data());
      check_close(re_s, re_v, 1e-13);
      check_close(im_s, im_v, 1e-13);
    }
    // rotating back restores the input
    kn::ops(kn::Backend::scalar)
        .phase_rotate(n, cm.data(), sm.data(), re_s.data(), im_s.data());
    check_close(re_s, re0, 1e-13);
    check_close(im_s, im0, 1e-13);
  }
}

TEST_CASE("tridiagonal matvec: reference, hermiticity, backends") {
  RandomData rd;
  for (std::size_t n : sizes) {
    const auto d = rd.vec(n);
    const auto or_ = rd.vec(n > 0 ? n - 1 : 0), oi = rd.vec(n > 0 ? n - 1 : 0);
    const auto xr = rd.vec(n), xi = rd.vec(n);
    std::vector<double> yr(n), yi(n);
    kn::ops(kn::Backend::scalar)
        .tridiag_matvec(n, d.data(), or_.data(), oi.data(), xr.data(),
                        xi.data(), yr.data(), yi.data());

    // dense complex reference
    std::vector<std::complex<double>> x(n), y_ref(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) x[i] = {xr[i], xi[i]};
    for (std::size_t i = 0; i < n; ++i) {
      y_ref[i] += d[i] * x[i];
      if (i + 1 < n) {
        const std::complex<double> off{or_[i], oi[i]};
        y_ref[i] += off * x[i + 1];
        y_ref[i + 1] += std::conj(off) * x[i];
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(yr[i] == doctest::Approx(y_ref[i].real()).epsilon(1e-13));
      CHECK(yi[i] == doctest::Approx(y_ref[i].imag()).epsilon(1e-13));
    }

    if (kn::avx2_supported()) {
      std::vector<double> vr(n), vi(n);
      kn::ops(kn::Backend::avx2)
          .tridiag_matvec(n, d.data(), or_.data(), oi.data(), xr.data(),
                          xi.data(), vr.data(), vi.data());
      check_close(yr, vr, 1e-13);
      check_close(yi, vi, 1e-13);
    }
  }

  // <u, A v> = conj(<v, A u>) for Hermitian A
  const std::size_t n = 24;
  const auto d = rd.vec(n), or_ = rd.vec(n - 1), oi = rd.vec(n - 1);
  const auto ur = rd.vec(n), ui = rd.vec(n), vr = rd.vec(n), vi = rd.vec(n);
  std::vector<double> avr(n), avi(n), aur(n), aui(n);
  kn::ops(kn::Backend::scalar)
      .tridiag_matvec(n, d.data(), or_.data(), oi.data(), vr.data(), vi.data(),
                      avr.data(), avi.data());
  kn::ops(kn::Backend::scalar)
      .tridiag_matvec(n, d.data(), or_.data(), oi.data(), ur.data(), ui.data(),
                      aur.data(), aui.data());
  std::complex<double> uav = 0.0, vau = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    uav += std::conj(std::complex<double>(ur[i], ui[i])) *
           std::complex<double>(avr[i], avi[i]);
    vau += std::conj(std::complex<double>(vr[i], vi[i])) *
           std::complex<double>(aur[i], aui[i]);
  }
  CHECK(uav.real() == doctest::Approx(vau.real()).epsilon(1e-12));
  CHECK(uav.imag() == doctest::Approx(-vau.imag()).epsilon(1e-12));
}

TEST_CASE("basis synthesis matches naive accumulation") {
  RandomData rd;
  for (std::size_t nj : {1u, 3u, 8u, 13u}) {
    for (std::size_t nth : {1u, 4u, 63u, 64u, 65u}) {
      const auto table = rd.vec(nj * nth);
      const auto cr = rd.vec(nj), ci = rd.vec(nj);
      std::vector<double> fr(nth, 0.0), fi(nth, 0.0);
      kn::ops(kn::Backend::scalar)
          .basis_synthesis(nj, nth, table.data(), cr.data(), ci.data(),
                           fr.data(), fi.data());
      std::vector<double> fr_ref(nth, 0.0), fi_ref(nth, 0.0);
      for (std::size_t j = 0; j < nj; ++j)
        for (std::size_t t = 0; t < nth; ++t) {
          fr_ref[t] += cr[j] * table[j * nth + t];
          fi_ref[t] += ci[j] * table[j * nth + t];
        }
      check_close(fr, fr_ref, 1e-13);
      check_close(fi, fi_ref, 1e-13);
      if (kn::avx2_supported()) {
        std::vector<double> gr(nth, 0.0), gi(nth, 0.0);
        kn::ops(kn::Backend::avx2)
            .basis_synthesis(nj, nth, table.data(), cr.data(), ci.data(),
                             gr.data(), gi.data());
        check_close(fr, gr, 1e-13);
        check_close(fi, gi, 1e-13);
      }
    }
  }
}

TEST_CASE("weighted modulus-squared accumulation") {
  RandomData rd;
  for (std::size_t n : sizes) {
    const auto re = rd.vec(n), im = rd.vec(n);
    const auto base = rd.vec(n);
    const double w = 0.37;
    auto acc_s = base;
    kn::ops(kn::Backend::scalar)
        .weighted_modsq(n, re.data(), im.data(), w, acc_s.data());
    for (std::size_t i = 0; i < n; ++i)
      CHECK(acc_s[i] == doctest::Approx(base[i] + w * (re[i] * re[i] +
                                                       im[i] * im[i]))
                            .epsilon(1e-13));
    if (kn::avx2_supported()) {
      auto acc_v = base;
      kn::ops(kn::Backend::avx2)
          .weighted_modsq(n, re.data(), im.data(), w, acc_v.data());
      check_close(acc_s, acc_v, 1e-13);
    }
  }
}

TEST_CASE("rk4 combine") {
  RandomData rd;
  for (std::size_t n : sizes) {
    const auto y0r = rd.vec(n), y0i = rd.vec(n);
    const auto k1r = rd.vec(n), k1i = rd.vec(n), k2r = rd.vec(n),
               k2i = rd.vec(n), k3r = rd.vec(n), k3i = rd.vec(n),
               k4r = rd.vec(n), k4i = rd.vec(n);
    const double h6 = 0.01 / 6.0;
    auto yr = y0r, yi = y0i;
    kn::ops(kn::Backend::scalar)
        .rk4_combine(n, yr.data(), yi.data(), k1r.data(), k1i.data(),
                     k2r.data(), k2i.data(), k3r.data(), k3i.data(),
                     k4r.data(), k4i.data(), h6);
    for (std::size_t i = 0; i < n; ++i)
      CHECK(yr[i] ==
            doctest::Approx(y0r[i] + h6 * (k1r[i] + 2 * k2r[i] + 2 * k3r[i] +
                                           k4r[i]))
                .epsilon(1e-13));
    if (kn::avx2_supported()) {
      auto vr = y0r, vi = y0i;
      kn::ops(kn::Backend::avx2)
          .rk4_combine(n, vr.data(), vi.data(), k1r.data(), k1i.data(),
                       k2r.data(), k2i.data(), k3r.data(), k3i.data(),
                       k4r.data(), k4i.data(), h6);
      check_close(yr, vr, 1e-13);
      check_close(yi, vi, 1e-13);
    }
  }
}
