#pragma once

namespace sisearch {

/// Primitives of the subsidized-inspection game for a fixed token price.
struct MarketParams {
  int n = 10;        ///< number of firms
  double c = 0.5;    ///< inspection cost
  double p = 1.0;    ///< price of one unit of subsidy
  double u = 1.0;    ///< consumer's benefit from a match

  /// Throws InvalidParams unless n in [1, kMaxFirms], c > 0, u > 0, p >= 0 and,
  /// for p > 0, c < (1 + p u) / p (equivalently the participation cutoff is below 1).
  void validate() const;

  MarketParams with_price(double price) const {
    MarketParams copy = *this;
    copy.p = price;
    return copy;
  }

  static constexpr int kMaxFirms = 500;
};

}  // namespace sisearch
