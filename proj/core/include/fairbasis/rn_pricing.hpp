#pragma once

#include <vector>

#include "fairbasis/cn.hpp"
#include "fairbasis/grid.hpp"
#include "fairbasis/intensity.hpp"
#include "fairbasis/types.hpp"

namespace fb {

struct PricingResult {
    double value = 0.0;
    double delta = 0.0;  // d value / d lambda
    double gamma = 0.0;  // d2 value / d lambda2
    std::vector<double> grid_values;  // t = 0 slice on the lambda grid
};

// Survival probability q(t, T) by backward FD; matches the closed forms where
// those exist.
PricingResult survival_fd(const IntensityModel& m, double t, double T,
                          const GridSpec& gs = {});

// Present value at (t, lambda0) of a unit continuous premium to default or T.
double annuity_pv(const IntensityModel& m, const MarketEnv& env, double t, double T,
                  const GridSpec& gs = {});

// Present value of the (1 - R) default leg.
double default_pv(const IntensityModel& m, const MarketEnv& env, double R, double t,
                  double T, const GridSpec& gs = {});

// Long-protection CDS value, premium S paid continuously.
PricingResult cds_value(const IntensityModel& m, const MarketEnv& env,
                        const CdsSpec& cds, double t, const GridSpec& gs = {});

// OIS-discounted risk-neutral price of the fixed-coupon bond.
PricingResult bond_value_rn(const IntensityModel& m, const MarketEnv& env,
                            const BondSpec& bond, double t, const GridSpec& gs = {});

// Par-style floater: 1 - dpv + S_b * apv.
double floating_bond_value(const IntensityModel& m, const MarketEnv& env,
                           double spread, double recovery, double T,
                           const GridSpec& gs = {});

// Bond and CDS surfaces on one shared grid, for hedge simulation and the
// funding-adjusted solver.
struct RnSurfaceSet {
    LambdaGrid grid;
    TimeGrid tgrid;
    Surface bond;
    Surface cds;
};

RnSurfaceSet rn_surfaces(const IntensityModel& m, const MarketEnv& env,
                         const BondSpec& bond, const CdsSpec& cds,
                         const GridSpec& gs = {});

}  // namespace fb
