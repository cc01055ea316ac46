#pragma once

// Fixed-order Gauss-Legendre machinery shared by the prior, the separating
// branch and the welfare integrals.

#include <array>
#include <cstddef>
#include <functional>
#include <span>

namespace sisearch {

inline constexpr std::size_t kGaussOrder = 16;

struct GaussLegendreRule {
  std::array<double, kGaussOrder> nodes{};    ///< on [-1, 1], ascending
  std::array<double, kGaussOrder> weights{};
  /// Row k holds the weights w_kj with sum_j w_kj g(x_j) = integral of g over
  /// [-1, x_k], exact for polynomials of degree < kGaussOrder.
  std::array<double, kGaussOrder * kGaussOrder> running{};
};

const GaussLegendreRule& gauss_legendre();

/// Nodes and weights of the rule mapped onto [lo, hi].
struct MappedRule {
  std::array<double, kGaussOrder> nodes{};
  std::array<double, kGaussOrder> weights{};
};

MappedRule map_rule(double lo, double hi);

/// Composite Gauss-Legendre over `panels` equal pieces of [lo, hi].
double integrate(const std::function<double(double)>& f, double lo, double hi, std::size_t panels = 8);

/// Composite rule over [lo, hi] with extra panel edges at `breaks` (those inside (lo, hi)).
double integrate_with_breaks(const std::function<double(double)>& f, double lo, double hi,
                             std::span<const double> breaks, std::size_t panels = 8);

}  // namespace sisearch
