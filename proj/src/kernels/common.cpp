#include <omp.h>

#include "helmfc/kernels.hpp"

namespace helmfc::kernels {

int resolve_jobs(int jobs) { return jobs > 0 ? jobs : omp_get_max_threads(); }

}  // namespace helmfc::kernels
