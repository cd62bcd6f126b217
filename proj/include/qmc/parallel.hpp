#pragma once

namespace qmc {

// Execution policy for the data-parallel kernels. Exec::serial is the
// reference path; Exec::parallel runs the same loop under OpenMP. Reductions
// store per-item partials and combine them in a fixed order, so both paths
// return bit-identical results and tests can compare them exactly.
enum class Exec { serial, parallel };

} // namespace qmc
