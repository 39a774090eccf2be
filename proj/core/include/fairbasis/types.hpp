#pragma once

namespace fb {

// Flat market environment. All rates are continuously compounded, per annum.
// The collateral rate r_L is carried for completeness but the engine assumes
// r_L = r throughout (validated at config level).
struct MarketEnv {
    double r = 0.0;        // riskfree (OIS) short rate
    double r_L = 0.0;      // collateral rate, = r by assumption
    double r_p = 0.0;      // bond repo rate
    double r_1 = 0.0;      // haircut debt rate
    double r_b = 0.0;      // senior unsecured rate
    double r_k = 0.0;      // return on capital
    double z = 0.0;        // floating reference rate used to quote the basis
    double h = 0.0;        // repo haircut, fraction of bond value
    double epsilon = 0.0;  // equity fraction of residual funding (inverse leverage)

    // Blended rate on the residual funding account.
    double r2() const { return epsilon * r_k + (1.0 - epsilon) * r_b; }
    // Effective bond financing rate: repo on (1-h), unsecured debt on h.
    double rbar_p() const { return (1.0 - h) * r_p + h * r_1; }
    // Excess return on capital.
    double rbar_k() const { return r_k - r; }

    void validate() const;
};

struct BondSpec {
    double coupon = 0.0;    // continuously paid coupon rate r_c
    double maturity = 0.0;  // years
    double recovery = 0.0;  // fraction of notional

    void validate() const;
};

struct CdsSpec {
    double premium = 0.0;   // continuously paid premium S
    double maturity = 0.0;  // years
    double recovery = 0.0;  // fraction of notional

    void validate() const;
};

}  // namespace fb
