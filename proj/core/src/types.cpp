#include "fairbasis/types.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace fb {

namespace {

void require_finite(double x, const char* key) {
    if (!std::isfinite(x))
        throw std::invalid_argument(std::string(key) + " must be finite");
}

}  // namespace

void MarketEnv::validate() const {
    for (auto [v, k] : {std::pair{r, "market.r"}, {r_L, "market.r_L"},
                        {r_p, "market.r_p"}, {r_1, "market.r_1"},
                        {r_b, "market.r_b"}, {r_k, "market.r_k"},
                        {z, "market.z"}})
        require_finite(v, k);
    if (!(h >= 0.0 && h < 1.0))
        throw std::invalid_argument("market.h must lie in [0, 1)");
    if (!(epsilon >= 0.0 && epsilon <= 1.0))
        throw std::invalid_argument("market.epsilon must lie in [0, 1]");
    if (r_L != r)
        throw std::invalid_argument("market.r_L must equal market.r");
}

void BondSpec::validate() const {
    if (!(maturity > 0.0))
        throw std::invalid_argument("bond.maturity must be positive");
    if (!(recovery >= 0.0 && recovery <= 1.0))
        throw std::invalid_argument("bond.recovery must lie in [0, 1]");
    if (!(coupon >= 0.0) || !std::isfinite(coupon))
        throw std::invalid_argument("bond.coupon must be nonnegative");
}

void CdsSpec::validate() const {
    if (!(maturity > 0.0))
        throw std::invalid_argument("cds.maturity must be positive");
    if (!(recovery >= 0.0 && recovery <= 1.0))
        throw std::invalid_argument("cds.recovery must lie in [0, 1]");
    if (!(premium >= 0.0) || !std::isfinite(premium))
        throw std::invalid_argument("cds.premium must be nonnegative");
}

}  // namespace fb
