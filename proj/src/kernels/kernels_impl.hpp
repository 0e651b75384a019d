#pragma once

#include "rotsim/kernels.hpp"

namespace rotsim::kernels {

const Ops& scalar_ops();
#ifdef ROTSIM_HAVE_AVX2
const Ops& avx2_ops();
#endif

}  // namespace rotsim::kernels
