#include "sisearch/kernels.hpp"

#include <immintrin.h>

#include <cassert>

namespace sisearch::kernels::avx2 {

bool available() {
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
}

namespace {

inline double power(double base, unsigned exponent) {
  double result = 1.0;
  while (exponent != 0) {
    if (exponent & 1u) result *= base;
    exponent >>= 1;
    if (exponent != 0) base *= base;
  }
  return result;
}

inline double horizontal_sum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d pair = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(pair, _mm_unpackhi_pd(pair, pair)));
}

}  // namespace

void complement_power(std::span<const double> x, unsigned exponent, std::span<double> out) {
  assert(x.size() == out.size());
  const __m256d one = _mm256_set1_pd(1.0);
  std::size_t i = 0;
  for (; i + 4 <= x.size(); i += 4) {
    __m256d base = _mm256_sub_pd(one, _mm256_loadu_pd(x.data() + i));
    __m256d result = one;
    unsigned e = exponent;
    while (e != 0) {
      if (e & 1u) result = _mm256_mul_pd(result, base);
      e >>= 1;
      if (e != 0) base = _mm256_mul_pd(base, base);
    }
    _mm256_storeu_pd(out.data() + i, result);
  }
  for (; i < x.size(); ++i) out[i] = power(1.0 - x[i], exponent);
}

double dot(std::span<const double> a, std::span<const double> b) {
  assert(a.size() == b.size());
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= a.size(); i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a.data() + i), _mm256_loadu_pd(b.data() + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a.data() + i + 4), _mm256_loadu_pd(b.data() + i + 4), acc1);
  }
  for (; i + 4 <= a.size(); i += 4)
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a.data() + i), _mm256_loadu_pd(b.data() + i), acc0);
  double sum = horizontal_sum(_mm256_add_pd(acc0, acc1));
  for (; i < a.size(); ++i) sum += a[i] * b[i];
  return sum;
}

void matvec(std::span<const double> matrix, std::span<const double> v, std::span<double> out) {
  const std::size_t cols = v.size();
  assert(matrix.size() == out.size() * cols);
  for (std::size_t r = 0; r < out.size(); ++r) out[r] = dot(matrix.subspan(r * cols, cols), v);
}

}  // namespace sisearch::kernels::avx2
