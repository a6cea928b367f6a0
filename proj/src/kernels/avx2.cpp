#include "ltscm/kernels.hpp"

#if defined(__AVX2__)
#include <immintrin.h>

#include <algorithm>

namespace ltscm::kernels::avx2 {
namespace {

void sum_rows(const double* const* rows, std::size_t n_rows, std::size_t width, double* out) {
  std::size_t a = 0;
  for (; a + 8 <= width; a += 8) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    for (std::size_t r = 0; r < n_rows; ++r) {
      const double* row = rows[r];
      if (row == nullptr) continue;
      acc0 = _mm256_add_pd(acc0, _mm256_loadu_pd(row + a));
      acc1 = _mm256_add_pd(acc1, _mm256_loadu_pd(row + a + 4));
    }
    _mm256_storeu_pd(out + a, acc0);
    _mm256_storeu_pd(out + a + 4, acc1);
  }
  for (; a + 4 <= width; a += 4) {
    __m256d acc = _mm256_setzero_pd();
    for (std::size_t r = 0; r < n_rows; ++r) {
      const double* row = rows[r];
      if (row == nullptr) continue;
      acc = _mm256_add_pd(acc, _mm256_loadu_pd(row + a));
    }
    _mm256_storeu_pd(out + a, acc);
  }
  for (; a < width; ++a) {
    double s = 0.0;
    for (std::size_t r = 0; r < n_rows; ++r)
      if (rows[r] != nullptr) s += rows[r][a];
    out[a] = s;
  }
}

void add_to_rows(double* const* rows, std::size_t n_rows, const double* delta,
                 std::size_t width) {
  const std::size_t vec_end = width & ~std::size_t{3};
  for (std::size_t r = 0; r < n_rows; ++r) {
    double* row = rows[r];
    if (row == nullptr) continue;
    std::size_t a = 0;
    for (; a < vec_end; a += 4) {
      __m256d v = _mm256_add_pd(_mm256_loadu_pd(row + a), _mm256_loadu_pd(delta + a));
      _mm256_storeu_pd(row + a, v);
    }
    for (; a < width; ++a) row[a] += delta[a];
  }
}

void step_clamp(double* x, const double* dir, double step, double lo, double hi,
                std::size_t n) {
  const __m256d vstep = _mm256_set1_pd(step);
  const __m256d vlo = _mm256_set1_pd(lo);
  const __m256d vhi = _mm256_set1_pd(hi);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d v = _mm256_add_pd(_mm256_loadu_pd(x + i),
                              _mm256_mul_pd(vstep, _mm256_loadu_pd(dir + i)));
    v = _mm256_min_pd(_mm256_max_pd(v, vlo), vhi);
    _mm256_storeu_pd(x + i, v);
  }
  for (; i < n; ++i) {
    double v = x[i] + step * dir[i];
    x[i] = std::min(std::max(v, lo), hi);
  }
}

double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d swapped = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, swapped));
}

double dot(const double* x, const double* y, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  double s = hsum(acc);
  for (; i < n; ++i) s += x[i] * y[i];
  return s;
}

double sq_dist(const double* x, double center, std::size_t n) {
  const __m256d c = _mm256_set1_pd(center);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d d = _mm256_sub_pd(_mm256_loadu_pd(x + i), c);
    acc = _mm256_add_pd(acc, _mm256_mul_pd(d, d));
  }
  double s = hsum(acc);
  for (; i < n; ++i) {
    double d = x[i] - center;
    s += d * d;
  }
  return s;
}

}  // namespace

const KernelTable kTable{&sum_rows, &add_to_rows, &step_clamp, &dot, &sq_dist};

}  // namespace ltscm::kernels::avx2

#else

namespace ltscm::kernels::avx2 {
const KernelTable kTable{nullptr, nullptr, nullptr, nullptr, nullptr};
}

#endif
