#pragma once

#include "fairbasis/intensity.hpp"

namespace fb {

enum class CapitalMode { fixed_exposure, variable_exposure, mc_var };

struct CapitalSpec {
    CapitalMode mode = CapitalMode::fixed_exposure;
    double fixed_exposure = 0.0;  // fraction of notional, FixedExposure mode
    double lgd = 0.45;
    double avc = 1.0;             // asset value correlation multiplier, 1 or 1.25
    double confidence = 0.999;
    double maturity_M = 0.0;      // Basel effective maturity; 0 derives it from time left

    void validate() const;
    // maturity_M when set, otherwise remaining maturity clamped to [1, 5].
    double basel_maturity(double remaining) const;
};

// Asset correlation of the IRB formula.
double correlation(double pd, double avc);

// b(pd) = (0.11852 - 0.05478 ln pd)^2, pd floored at 1e-6 inside the log.
double maturity_b(double pd);

double maturity_adjustment(double pd, double M);

// Unexpected-loss capital per unit exposure, clamped at 0 (the raw expression
// dips microscopically negative below the pd floor).
double capital_ratio(double pd, double lgd, double M, double avc);

// One-year default probability with the model re-rooted at lam; the horizon is
// truncated at T - t when less than a year remains.
double local_pd(const IntensityModel& m, double t, double lam, double T);

// Reserve balance: K * exposure in the Basel modes; in mc_var mode the caller
// passes the simulated VaR as the exposure and it is returned unscaled.
double capital_balance(const CapitalSpec& spec, double pd, double exposure,
                       double remaining_maturity);

}  // namespace fb
