#include "sisearch/kernels.hpp"

#include <cassert>

namespace sisearch::kernels::scalar {

namespace {

// Right-to-left binary exponentiation. The AVX2 variant performs the same
// multiplications in the same order, so both paths agree bit for bit.
inline double power(double base, unsigned exponent) {
  double result = 1.0;
  while (exponent != 0) {
    if (exponent & 1u) result *= base;
    exponent >>= 1;
    if (exponent != 0) base *= base;
  }
  return result;
}

}  // namespace

void complement_power(std::span<const double> x, unsigned exponent, std::span<double> out) {
  assert(x.size() == out.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = power(1.0 - x[i], exponent);
}

double dot(std::span<const double> a, std::span<const double> b) {
  assert(a.size() == b.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += a[i] * b[i];
  return sum;
}

void matvec(std::span<const double> matrix, std::span<const double> v, std::span<double> out) {
  const std::size_t cols = v.size();
  assert(matrix.size() == out.size() * cols);
  for (std::size_t r = 0; r < out.size(); ++r) out[r] = dot(matrix.subspan(r * cols, cols), v);
}

}  // namespace sisearch::kernels::scalar
