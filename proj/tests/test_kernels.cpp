#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <random>
#include <string_view>
#include <vector>

#include "sisearch/kernels.hpp"

namespace k = sisearch::kernels;

TEST_SUITE("kernels") {

TEST_CASE("environment override selects the reference path") {
  const char* forced = std::getenv("SISEARCH_KERNELS");
  if (forced && std::string_view(forced) == "scalar") CHECK(k::active_isa() == k::Isa::scalar);
  if (!forced && k::avx2::available()) CHECK(k::active_isa() == k::Isa::avx2);
}

TEST_CASE("complement power matches repeated multiplication") {
  const std::vector<double> x = {0.0, 0.1, 0.5, 0.9, 1.0};
  for (unsigned e : {0u, 1u, 3u, 8u, 13u}) {
    std::vector<double> out(x.size());
    k::complement_power(x, e, out);
    for (std::size_t i = 0; i < x.size(); ++i) {
      double ref = 1.0;
      for (unsigned j = 0; j < e; ++j) ref *= 1.0 - x[i];
      CHECK(out[i] == doctest::Approx(ref).epsilon(1e-15));
    }
  }
}

TEST_CASE("vector variant agrees with the scalar reference on every length and tail") {
  if (!k::avx2::available()) return;
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (std::size_t len = 0; len <= 67; ++len) {
    std::vector<double> x(len), y(len), a(len), b(len);
    for (std::size_t i = 0; i < len; ++i) {
      x[i] = unit(rng);
      y[i] = unit(rng) - 0.5;
    }
    for (unsigned e : {0u, 1u, 2u, 9u, 64u, 499u}) {
      k::scalar::complement_power(x, e, a);
      k::avx2::complement_power(x, e, b);
      for (std::size_t i = 0; i < len; ++i) CHECK(b[i] == doctest::Approx(a[i]).epsilon(1e-14));
    }
    CHECK(k::avx2::dot(x, y) == doctest::Approx(k::scalar::dot(x, y)).epsilon(1e-14));
    std::vector<double> m(len * 16), ra(16), rb(16);
    for (double& v : m) v = unit(rng) - 0.5;
    k::scalar::matvec(m, x, ra);
    k::avx2::matvec(m, x, rb);
    for (std::size_t i = 0; i < 16; ++i) CHECK(std::abs(rb[i] - ra[i]) <= 1e-14 * std::max(1.0, std::abs(ra[i])));
  }
}

TEST_CASE("empty inputs") {
  std::vector<double> none;
  CHECK(k::dot(none, none) == 0.0);
  k::complement_power(none, 3, none);
}

}
