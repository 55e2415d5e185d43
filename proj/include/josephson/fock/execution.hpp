#pragma once

namespace josephson {

// Selects the OpenMP kernel or the single-threaded reference kernel. The
// serial path is kept so tests and the benchmark can compare the two.
enum class Execution { serial, parallel };

// Number of threads the parallel kernels will use (1 without OpenMP).
int worker_count();

}  // namespace josephson
