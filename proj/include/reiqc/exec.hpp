#pragma once

namespace reiqc {

/// Kernel selection. `serial` runs the straightforward reference loops kept
/// for testing; `parallel` runs the OpenMP kernels.
enum class Exec { serial, parallel };

/// Number of OpenMP threads the parallel kernels will use.
int max_threads();

}  // namespace reiqc
