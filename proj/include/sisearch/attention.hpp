#pragma once

#include <compare>
#include <span>

#include "sisearch/distribution.hpp"
#include "sisearch/market.hpp"

namespace sisearch {

/// Probability that a separating firm of type t is inspected when types in
/// [t0, 1] reveal themselves: (1 - PM(t))^(n-1) above t0, zero below.
double q_sep(double t, double t0, const MarketParams& params, const TypeDistribution& d);

/// Batch form of q_sep over sorted or unsorted points, through the SIMD kernels.
void q_sep_batch(std::span<const double> t, double t0, const MarketParams& params, const TypeDistribution& d,
                 std::span<double> out);

/// (1 - (1 - tau)^m) / (m tau): chance a pooled firm is reached when it sits in a
/// uniformly shuffled pool of m members that each match with probability tau.
double pooled_reach(double tau, int m);

/// Inspection probability of a firm pooling at the cap with all types above x.
double q_pool(double x, const MarketParams& params, const TypeDistribution& d);

/// Weitzman index u - kappa / tau; tau = 0 gives a tagged minus infinity.
class ReservationIndex {
 public:
  static ReservationIndex finite(double value) { return ReservationIndex(value, false); }
  static ReservationIndex minus_infinity() { return ReservationIndex(0.0, true); }

  bool is_minus_infinity() const { return minus_infinity_; }
  /// Finite value; minus infinity maps to -HUGE_VAL for display only.
  double value() const;
  /// Strictly worth inspecting (an index of exactly zero ties with the outside option and stops).
  bool beats_outside_option() const { return !minus_infinity_ && value_ > 0.0; }

  friend bool operator==(const ReservationIndex& a, const ReservationIndex& b) {
    return a.minus_infinity_ == b.minus_infinity_ && (a.minus_infinity_ || a.value_ == b.value_);
  }
  friend std::strong_ordering operator<=>(const ReservationIndex& a, const ReservationIndex& b);

 private:
  ReservationIndex(double v, bool neg_inf) : value_(v), minus_infinity_(neg_inf) {}
  double value_;
  bool minus_infinity_;
};

ReservationIndex reservation_index(double tau, double kappa, double u);

}  // namespace sisearch
