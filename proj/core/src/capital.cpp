#include "fairbasis/capital.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fairbasis/normal.hpp"

namespace fb {

void CapitalSpec::validate() const {
    if (!(lgd >= 0.0 && lgd <= 1.0))
        throw std::invalid_argument("capital.lgd must lie in [0, 1]");
    if (avc != 1.0 && avc != 1.25)
        throw std::invalid_argument("capital.avc must be 1 or 1.25");
    if (!(fixed_exposure >= 0.0) || !std::isfinite(fixed_exposure))
        throw std::invalid_argument("capital.fixed_exposure must be nonnegative");
    if (!(confidence > 0.5 && confidence < 1.0))
        throw std::invalid_argument("capital.confidence must lie in (0.5, 1)");
    if (!(maturity_M >= 0.0) || !std::isfinite(maturity_M))
        throw std::invalid_argument("capital.maturity_M must be nonnegative");
}

double CapitalSpec::basel_maturity(double remaining) const {
    if (maturity_M > 0.0) return maturity_M;
    return std::clamp(remaining, 1.0, 5.0);
}

double correlation(double pd, double avc) {
    if (!(pd > 0.0 && pd <= 1.0)) throw std::domain_error("correlation: pd must lie in (0, 1]");
    double w = -std::expm1(-50.0 * pd) / -std::expm1(-50.0);
    return avc * (0.12 * w + 0.24 * (1.0 - w));
}

double maturity_b(double pd) {
    if (!(pd > 0.0 && pd <= 1.0)) throw std::domain_error("maturity_b: pd must lie in (0, 1]");
    double x = 0.11852 - 0.05478 * std::log(std::max(pd, 1e-6));
    return x * x;
}

double maturity_adjustment(double pd, double M) {
    if (!(M > 0.0)) throw std::domain_error("maturity_adjustment: M must be positive");
    double b = maturity_b(pd);
    return (1.0 + (M - 2.5) * b) / (1.0 - 1.5 * b);
}

double capital_ratio(double pd, double lgd, double M, double avc) {
    if (!(pd > 0.0 && pd <= 1.0)) throw std::domain_error("capital_ratio: pd must lie in (0, 1]");
    if (!(lgd >= 0.0 && lgd <= 1.0)) throw std::domain_error("capital_ratio: lgd must lie in [0, 1]");
    if (pd >= 1.0) return 0.0;  // conditional PD equals pd, no unexpected loss
    double rho = correlation(pd, avc);
    double cond = norm_cdf((norm_ppf(pd) + std::sqrt(rho) * norm_ppf(0.999))
                           / std::sqrt(1.0 - rho));
    double k = lgd * (cond - pd) * maturity_adjustment(pd, M);
    return std::max(k, 0.0);
}

double local_pd(const IntensityModel& m, double t, double lam, double T) {
    double horizon = std::min(1.0, T - t);
    if (horizon <= 0.0) return 0.0;
    return 1.0 - survival_from_level(m, t, lam, horizon);
}

double capital_balance(const CapitalSpec& spec, double pd, double exposure,
                       double remaining_maturity) {
    if (exposure <= 0.0) return 0.0;
    if (spec.mode == CapitalMode::mc_var) return exposure;
    if (pd <= 0.0) return 0.0;
    double K = capital_ratio(pd, spec.lgd, spec.basel_maturity(remaining_maturity), spec.avc);
    return K * exposure;
}

}  // namespace fb
