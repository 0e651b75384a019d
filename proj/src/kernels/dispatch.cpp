#include <cstdlib>
#include <stdexcept>
#include <string>

#include "kernels_impl.hpp"

namespace rotsim::kernels {

bool avx2_supported() {
#ifdef ROTSIM_HAVE_AVX2
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

namespace {

Backend select_backend() {
  const char* env = std::getenv("ROTSIM_SIMD");
  const std::string mode = env ? env : "auto";
  if (mode == "scalar") return Backend::scalar;
  if (mode == "avx2") {
    if (!avx2_supported())
      throw std::runtime_error("ROTSIM_SIMD=avx2: not supported on this CPU");
    return Backend::avx2;
  }
  if (mode != "auto")
    throw std::runtime_error("ROTSIM_SIMD: expected auto|scalar|avx2, got '" +
                             mode + "'");
  return avx2_supported() ? Backend::avx2 : Backend::scalar;
}

Backend& backend_slot() {
  static Backend backend = select_backend();
  return backend;
}

}  // namespace

Backend active_backend() { return backend_slot(); }

void force_backend(Backend backend) {
  if (backend == Backend::avx2 && !avx2_supported())
    throw std::runtime_error("force_backend: avx2 not supported on this CPU");
  backend_slot() = backend;
}

const char* backend_name(Backend backend) {
  return backend == Backend::avx2 ? "avx2" : "scalar";
}

const Ops& ops(Backend backend) {
#ifdef ROTSIM_HAVE_AVX2
  if (backend == Backend::avx2) return avx2_ops();
#else
  (void)backend;
#endif
  return scalar_ops();
}

const Ops& ops() { return ops(active_backend()); }

}  // namespace rotsim::kernels
