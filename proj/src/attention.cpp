#include "sisearch/attention.hpp"

#include <cmath>
#include <vector>

#include "sisearch/errors.hpp"
#include "sisearch/kernels.hpp"

namespace sisearch {

double q_sep(double t, double t0, const MarketParams& params, const TypeDistribution& d) {
  if (t < t0) return 0.0;
  if (params.n == 1) return 1.0;
  // Same kernel as the batch path so point and panel evaluations agree bitwise.
  const double pm = d.partial_moment(t);
  double out = 0.0;
  kernels::complement_power({&pm, 1}, static_cast<unsigned>(params.n - 1), {&out, 1});
  return out;
}

void q_sep_batch(std::span<const double> t, double t0, const MarketParams& params, const TypeDistribution& d,
                 std::span<double> out) {
  std::vector<double> pm(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) pm[i] = d.partial_moment(t[i]);
  kernels::complement_power(pm, static_cast<unsigned>(params.n - 1), out);
  for (std::size_t i = 0; i < t.size(); ++i)
    if (t[i] < t0) out[i] = 0.0;
}

double pooled_reach(double tau, int m) {
  if (m <= 1) return 1.0;
  if (tau < 1e-8) return 1.0 - (m - 1) * tau * (0.5 - (m - 2) * tau / 6.0);
  if (tau >= 1.0) return 1.0 / m;
  return -std::expm1(m * std::log1p(-tau)) / (m * tau);
}

double q_pool(double x, const MarketParams& params, const TypeDistribution& d) {
  const int rivals = params.n - 1;
  const double above = 1.0 - d.cdf(x);
  if (above < TypeDistribution::kTruncationFloor)
    throw DegenerateTruncation("q_pool: no prior mass above the pooling cutoff");
  if (rivals == 0) return 1.0;
  const double tau = d.truncated_mean(x);
  const double below = 1.0 - above;

  // K ~ Bin(rivals, above) counts rivals sharing the pool; pmf in log space so
  // that large n with extreme probabilities neither underflows nor loses terms.
  if (below <= 0.0) return pooled_reach(tau, rivals + 1);
  const double la = std::log(above);
  const double lb = std::log(below);
  const double lg = std::lgamma(rivals + 1.0);
  double total = 0.0;
  for (int k = 0; k <= rivals; ++k) {
    const double log_pmf = lg - std::lgamma(k + 1.0) - std::lgamma(rivals - k + 1.0) + k * la + (rivals - k) * lb;
    total += std::exp(log_pmf) * pooled_reach(tau, k + 1);
  }
  return total;
}

double ReservationIndex::value() const { return minus_infinity_ ? -HUGE_VAL : value_; }

std::strong_ordering operator<=>(const ReservationIndex& a, const ReservationIndex& b) {
  if (a.minus_infinity_ || b.minus_infinity_) return b.minus_infinity_ <=> a.minus_infinity_;
  if (a.value_ < b.value_) return std::strong_ordering::less;
  if (a.value_ > b.value_) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

ReservationIndex reservation_index(double tau, double kappa, double u) {
  if (tau <= 0.0) return ReservationIndex::minus_infinity();
  return ReservationIndex::finite(u - kappa / tau);
}

}  // namespace sisearch
