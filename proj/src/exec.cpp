#include "reiqc/exec.hpp"

#include <omp.h>

namespace reiqc {

int max_threads() { return omp_get_max_threads(); }

}  // namespace reiqc
