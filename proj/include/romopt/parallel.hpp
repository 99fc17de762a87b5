// SPDX-License-Identifier: Apache-2.0
#pragma once

#ifdef _OPENMP
#include <omp.h>
#endif

namespace romopt {

/// Execution policy for the data-parallel kernels. Every parallel kernel has a
/// serial twin used as the reference in tests; results are bit-identical.
enum class Execution { seq, par };

inline void set_worker_count(int n) {
#ifdef _OPENMP
    if (n > 0) omp_set_num_threads(n);
#else
    (void)n;
#endif
}

inline int worker_count() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

}  // namespace romopt
