#pragma once

// Data-parallel inner loops of policy evaluation and optimization.
//
// Every kernel has a scalar reference version and, where the target supports
// it, an AVX2 version. The active table is chosen once at startup from CPU
// features; LTSCM_ISA=scalar in the environment forces the reference path.
//
// Vertical kernels (sum_rows, add_to_rows, step_clamp) accumulate in the same
// order per lane as the scalar code and therefore give bit-identical results.
// Reductions (dot, sq_dist) reassociate and agree only to rounding.

#include <cstddef>
#include <string_view>

namespace ltscm::kernels {

enum class Isa { scalar, avx2 };

struct KernelTable {
  // out[a] = sum over non-null rows[r] of rows[r][a], rows visited in order.
  void (*sum_rows)(const double* const* rows, std::size_t n_rows, std::size_t width,
                   double* out);
  // rows[r][a] += delta[a] for every non-null row.
  void (*add_to_rows)(double* const* rows, std::size_t n_rows, const double* delta,
                      std::size_t width);
  // x[i] = clamp(x[i] + step * dir[i], lo, hi).
  void (*step_clamp)(double* x, const double* dir, double step, double lo, double hi,
                     std::size_t n);
  // sum_i x[i] * y[i]
  double (*dot)(const double* x, const double* y, std::size_t n);
  // sum_i (x[i] - center)^2
  double (*sq_dist)(const double* x, double center, std::size_t n);
};

bool supported(Isa isa);
const KernelTable& table(Isa isa);

// Table selected for this process.
const KernelTable& active();
Isa active_isa();
std::string_view isa_name(Isa isa);

namespace scalar {
extern const KernelTable kTable;
}
namespace avx2 {
// Null function pointers when the build has no AVX2 support.
extern const KernelTable kTable;
}

}  // namespace ltscm::kernels
