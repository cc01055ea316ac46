#include <cstdlib>
#include <string_view>

#include "sisearch/kernels.hpp"

namespace sisearch::kernels {

#ifndef SISEARCH_HAVE_AVX2
namespace avx2 {
bool available() { return false; }
void complement_power(std::span<const double> x, unsigned exponent, std::span<double> out) {
  scalar::complement_power(x, exponent, out);
}
double dot(std::span<const double> a, std::span<const double> b) { return scalar::dot(a, b); }
void matvec(std::span<const double> matrix, std::span<const double> v, std::span<double> out) {
  scalar::matvec(matrix, v, out);
}
}  // namespace avx2
#endif

namespace {

struct Table {
  Isa isa;
  void (*complement_power)(std::span<const double>, unsigned, std::span<double>);
  double (*dot)(std::span<const double>, std::span<const double>);
  void (*matvec)(std::span<const double>, std::span<const double>, std::span<double>);
};

Table select() {
  const char* forced = std::getenv("SISEARCH_KERNELS");
  const bool want_scalar = forced != nullptr && std::string_view(forced) == "scalar";
  if (!want_scalar && avx2::available())
    return {Isa::avx2, &avx2::complement_power, &avx2::dot, &avx2::matvec};
  return {Isa::scalar, &scalar::complement_power, &scalar::dot, &scalar::matvec};
}

const Table& table() {
  static const Table t = select();
  return t;
}

}  // namespace

std::string_view isa_name(Isa isa) { return isa == Isa::avx2 ? "avx2" : "scalar"; }

Isa active_isa() { return table().isa; }

void complement_power(std::span<const double> x, unsigned exponent, std::span<double> out) {
  table().complement_power(x, exponent, out);
}

double dot(std::span<const double> a, std::span<const double> b) { return table().dot(a, b); }

void matvec(std::span<const double> matrix, std::span<const double> v, std::span<double> out) {
  table().matvec(matrix, v, out);
}

}  // namespace sisearch::kernels
