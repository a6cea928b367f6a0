#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "ltscm/kernels.hpp"

using namespace ltscm::kernels;

namespace {

std::vector<double> random_vec(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(-9.5, 0.5);
  std::vector<double> v(n);
  for (auto& x : v) x = u(rng);
  return v;
}

// Widths cover the AVX2 main loop, the tail, and both at once.
constexpr std::size_t kWidths[] = {1, 3, 4, 5, 8, 12, 13, 31, 32};

}  // namespace

TEST_CASE("kernels: scalar table is always available") {
  CHECK(supported(Isa::scalar));
  CHECK(table(Isa::scalar).sum_rows != nullptr);
  CHECK(isa_name(active_isa()).size() > 0);
}

TEST_CASE("kernels: avx2 vertical kernels are bit-identical to scalar") {
  if (!supported(Isa::avx2)) {
    MESSAGE("AVX2 not available on this CPU; skipping");
    return;
  }
  const auto& s = table(Isa::scalar);
  const auto& v = table(Isa::avx2);
  std::mt19937_64 rng(7);
  for (std::size_t w : kWidths) {
    for (std::size_t n_rows : {0u, 1u, 2u, 7u, 191u}) {
      std::vector<std::vector<double>> data;
      std::vector<const double*> rows;
      for (std::size_t r = 0; r < n_rows; ++r) {
        data.push_back(random_vec(rng, w));
        rows.push_back(r % 5 == 3 ? nullptr : data.back().data());
      }
      std::vector<double> a(w, 1.0), b(w, 2.0);
      s.sum_rows(rows.data(), rows.size(), w, a.data());
      v.sum_rows(rows.data(), rows.size(), w, b.data());
      CHECK(a == b);

      auto data2 = data;
      std::vector<double*> mrows, mrows2;
      for (std::size_t r = 0; r < n_rows; ++r) {
        mrows.push_back(r % 4 == 1 ? nullptr : data[r].data());
        mrows2.push_back(r % 4 == 1 ? nullptr : data2[r].data());
      }
      auto delta = random_vec(rng, w);
      s.add_to_rows(mrows.data(), mrows.size(), delta.data(), w);
      v.add_to_rows(mrows2.data(), mrows2.size(), delta.data(), w);
      CHECK(data == data2);
    }
    auto x = random_vec(rng, w), dir = random_vec(rng, w);
    auto y = x;
    s.step_clamp(x.data(), dir.data(), 0.37, -9.21, 0.0, w);
    v.step_clamp(y.data(), dir.data(), 0.37, -9.21, 0.0, w);
    CHECK(x == y);
    for (double e : x) CHECK((e >= -9.21 && e <= 0.0));
  }
}

TEST_CASE("kernels: avx2 reductions agree with scalar to rounding") {
  if (!supported(Isa::avx2)) return;
  const auto& s = table(Isa::scalar);
  const auto& v = table(Isa::avx2);
  std::mt19937_64 rng(11);
  for (std::size_t w : {1u, 4u, 7u, 12u, 100u, 1001u}) {
    auto x = random_vec(rng, w), y = random_vec(rng, w);
    const double d1 = s.dot(x.data(), y.data(), w), d2 = v.dot(x.data(), y.data(), w);
    CHECK(std::fabs(d1 - d2) <= 1e-12 * std::max(1.0, std::fabs(d1)));
    const double q1 = s.sq_dist(x.data(), -6.9, w), q2 = v.sq_dist(x.data(), -6.9, w);
    CHECK(std::fabs(q1 - q2) <= 1e-12 * std::max(1.0, std::fabs(q1)));
  }
}

TEST_CASE("kernels: scalar reference values") {
  const auto& s = table(Isa::scalar);
  double a[] = {1, 2, 3}, b[] = {10, 20, 30};
  const double* rows[] = {a, nullptr, b};
  double out[3];
  s.sum_rows(rows, 3, 3, out);
  CHECK(out[0] == 11);
  CHECK(out[2] == 33);
  s.sum_rows(rows, 0, 3, out);
  CHECK(out[1] == 0);
  CHECK(s.dot(a, b, 3) == 140);
  CHECK(s.sq_dist(a, 1.0, 3) == 5);
  double x[] = {-1, -1}, d[] = {5, -5};
  s.step_clamp(x, d, 1.0, -3.0, 0.0, 2);
  CHECK(x[0] == 0.0);
  CHECK(x[1] == -3.0);
}
