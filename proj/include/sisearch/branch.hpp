#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "sisearch/distribution.hpp"
#include "sisearch/market.hpp"
#include "sisearch/quadrature.hpp"

namespace sisearch {

/// One Gauss-Legendre panel of the separating branch with attention and
/// running attention integral cached at its nodes.
struct PanelSample {
  double lo = 0.0;
  double hi = 0.0;
  double base = 0.0;  ///< integral of q_sep from t0 to lo
  std::array<double, kGaussOrder> t{};
  std::array<double, kGaussOrder> w{};
  std::array<double, kGaussOrder> q{};
  std::array<double, kGaussOrder> cum{};  ///< integral of q_sep from t0 to t[i]
};

/// Separating attention on [t0, 1] and its integral I(t) = int_{t0}^t q_sep,
/// tabulated once so the subsidy, welfare and revenue integrals share it.
class SeparatingBranch {
 public:
  static constexpr std::size_t kDefaultPanels = 2048;

  SeparatingBranch(double t0, const MarketParams& params, const TypeDistribution& d,
                   std::size_t panels = kDefaultPanels);

  double t0() const { return t0_; }
  const MarketParams& params() const { return params_; }
  const TypeDistribution& distribution() const { return dist_; }

  double attention(double t) const;
  /// d q_sep / dt = (n - 1) (1 - PM(t))^(n-2) t f(t).
  double attention_slope(double t) const;
  double cumulative(double t) const;
  /// t/p - I(t)/(p q(t)); requires p > 0.
  double subsidy(double t) const;
  /// From p (sigma q)' = t q': sigma' = q' (t - p sigma) / (p q).
  double subsidy_slope(double t, double sigma) const;

  /// Panels covering [t0, upper]; the last one is re-ruled to end exactly at upper.
  std::vector<PanelSample> samples(double upper) const;

 private:
  std::size_t panel_index(double t) const;
  PanelSample build_panel(double lo, double hi, double base) const;

  double t0_;
  MarketParams params_;
  TypeDistribution dist_;
  std::vector<PanelSample> panels_;
};

}  // namespace sisearch
