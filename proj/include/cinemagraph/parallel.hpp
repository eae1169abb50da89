#pragma once

namespace cinemagraph {

/// Selects between the OpenMP kernels and their serial reference paths.
/// Both paths produce bit-identical results; the serial one exists for
/// testing and benchmarking.
enum class Execution { serial, parallel };

/// Caps the number of OpenMP threads used by parallel kernels. Values <= 0
/// leave the OpenMP runtime default in place.
void set_thread_budget(int threads);
int thread_budget();

}  // namespace cinemagraph
