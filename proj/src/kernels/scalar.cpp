#include <algorithm>

#include "ltscm/kernels.hpp"

namespace ltscm::kernels::scalar {
namespace {

void sum_rows(const double* const* rows, std::size_t n_rows, std::size_t width, double* out) {
  std::fill(out, out + width, 0.0);
  for (std::size_t r = 0; r < n_rows; ++r) {
    const double* row = rows[r];
    if (row == nullptr) continue;
    for (std::size_t a = 0; a < width; ++a) out[a] += row[a];
  }
}

void add_to_rows(double* const* rows, std::size_t n_rows, const double* delta,
                 std::size_t width) {
  for (std::size_t r = 0; r < n_rows; ++r) {
    double* row = rows[r];
    if (row == nullptr) continue;
    for (std::size_t a = 0; a < width; ++a) row[a] += delta[a];
  }
}

void step_clamp(double* x, const double* dir, double step, double lo, double hi,
                std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    double v = x[i] + step * dir[i];
    x[i] = std::min(std::max(v, lo), hi);
  }
}

double dot(const double* x, const double* y, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += x[i] * y[i];
  return s;
}

double sq_dist(const double* x, double center, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double d = x[i] - center;
    s += d * d;
  }
  return s;
}

}  // namespace

const KernelTable kTable{&sum_rows, &add_to_rows, &step_clamp, &dot, &sq_dist};

}  // namespace ltscm::kernels::scalar
