#include "sisearch/market.hpp"

#include <cmath>
#include <string>

#include "sisearch/errors.hpp"

namespace sisearch {

void MarketParams::validate() const {
  if (n < 1 || n > kMaxFirms)
    throw InvalidParams("n must lie in [1, " + std::to_string(kMaxFirms) + "], got " + std::to_string(n));
  if (!(c > 0.0) || !std::isfinite(c)) throw InvalidParams("inspection cost c must be positive and finite");
  if (!(u > 0.0) || !std::isfinite(u)) throw InvalidParams("match benefit u must be positive and finite");
  if (!(p >= 0.0) || !std::isfinite(p)) throw InvalidParams("price p must be nonnegative and finite");
  if (p > 0.0 && !(p * c < 1.0 + p * u))
    throw InvalidParams("no type can profitably subsidize: need c < (1 + p u) / p");
}

}  // namespace sisearch
