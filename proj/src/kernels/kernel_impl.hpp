#pragma once

#include "nhscat/kernels.hpp"

namespace nhscat::kernels::detail {

const KernelTable& scalar_table();
#if defined(NHSCAT_WITH_AVX2)
const KernelTable& avx2_table();
#endif

}  // namespace nhscat::kernels::detail
