#pragma once

namespace harvest {

// Selects between the OpenMP kernels and the serial reference loops.
// Both produce bit-identical results; the serial path exists for testing
// and for benchmarking the parallel one against.
enum class Execution { serial, parallel };

// Number of OpenMP threads available to a parallel region (1 without OpenMP).
int max_threads() noexcept;

}  // namespace harvest
