#include <doctest.h>

#include <cmath>
#include <random>

#include "sisearch/distribution.hpp"
#include "sisearch/errors.hpp"
#include "sisearch/quadrature.hpp"

using namespace sisearch;

namespace {

std::vector<TypeDistribution> priors() {
  return {TypeDistribution::uniform(), TypeDistribution::beta(2, 2), TypeDistribution::beta(0.5, 3),
          TypeDistribution::beta(3, 0.7),
          TypeDistribution::piecewise({{0.0, 0.0}, {0.3, 0.1}, {0.7, 0.6}, {1.0, 1.0}})};
}

}  // namespace

TEST_SUITE("dist") {

TEST_CASE("cdf values") {
  const auto u = TypeDistribution::uniform();
  CHECK(u.cdf(0.5) == 0.5);
  for (const auto& d : priors()) CHECK(d.cdf(1.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(TypeDistribution::beta(2, 2).cdf(0.5) == doctest::Approx(0.5).epsilon(1e-15));
  // 6x(1-x) integrated independently.
  const double by_quad = integrate([](double x) { return 6 * x * (1 - x); }, 0.0, 0.3, 1);
  CHECK(TypeDistribution::beta(2, 2).cdf(0.3) == doctest::Approx(by_quad).epsilon(1e-14));
}

TEST_CASE("partial moment values") {
  const auto u = TypeDistribution::uniform();
  CHECK(u.partial_moment(0.0) == doctest::Approx(0.5));
  CHECK(u.partial_moment(1.0) == 0.0);
  CHECK(u.partial_moment(0.5) == doctest::Approx(0.375).epsilon(1e-15));
  CHECK(u.partial_moment(0.25) == doctest::Approx(0.46875).epsilon(1e-15));
}

TEST_CASE("closed form partial moment agrees with the quadrature route") {
  for (const auto& d : priors()) {
    for (double t : {0.0, 0.01, 0.2, 0.5, 0.77, 0.99, 1.0}) {
      INFO(d.name() << " t=" << t);
      CHECK(std::abs(d.partial_moment(t) - d.partial_moment_quadrature(t)) <= 1e-10);
    }
  }
}

TEST_CASE("truncated mean") {
  const auto u = TypeDistribution::uniform();
  CHECK(u.truncated_mean(0.0) == doctest::Approx(0.5));
  CHECK(u.truncated_mean(0.5) == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(u.truncated_mean(1.0 - 1e-9) == doctest::Approx(1.0).epsilon(1e-8));
  CHECK_THROWS_AS(u.truncated_mean(1.0), DegenerateTruncation);
}

TEST_CASE("quantile inverts the cdf") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (const auto& d : priors()) {
    for (int i = 0; i < 50; ++i) {
      const double q = unit(rng);
      CHECK(d.cdf(d.quantile(q)) == doctest::Approx(q).epsilon(1e-10));
    }
  }
}

TEST_CASE("quantile far in a singular lower tail") {
  const auto d = TypeDistribution::beta(0.5, 3);
  for (int k : {32, 40, 52, 60}) {
    const double v = std::ldexp(1.0, -k);
    CHECK(d.cdf(d.quantile(v)) == doctest::Approx(v).epsilon(1e-9));
  }
  CHECK(std::isinf(d.density(0.0)));
  CHECK(std::isinf(TypeDistribution::beta(3, 0.7).density(1.0)));
}

TEST_CASE("virtual value") {
  const auto u = TypeDistribution::uniform();
  for (double t : {0.1, 0.5, 0.9}) CHECK(u.virtual_value(t) == doctest::Approx(2 * t - 1));
  // Piecewise slope is constant on each segment; the kink shows in breakpoints.
  const auto pw = priors().back();
  CHECK(pw.breakpoints() == std::vector<double>{0.3, 0.7});
  CHECK(pw.density(0.5) == doctest::Approx(0.5 / 0.4));
}

TEST_CASE("rejected inputs") {
  const auto u = TypeDistribution::uniform();
  CHECK_THROWS_AS(u.cdf(-0.1), DomainError);
  CHECK_THROWS_AS(u.partial_moment(1.5), DomainError);
  CHECK_THROWS_AS(u.cdf(std::nan("")), DomainError);
  CHECK_THROWS_AS(TypeDistribution::beta(0, 1), InvalidParams);
  CHECK_THROWS_AS(TypeDistribution::piecewise({{0, 0}, {0.5, 0.5}, {0.5, 0.7}, {1, 1}}), InvalidParams);
  CHECK_THROWS_AS(TypeDistribution::piecewise({{0, 0}, {0.5, 0.5}, {0.8, 0.5}, {1, 1}}), InvalidParams);
  CHECK_THROWS_AS(TypeDistribution::piecewise({{0, 0}, {1, 0.9}}), InvalidParams);
}

}
