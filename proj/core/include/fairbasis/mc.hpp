#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "fairbasis/capital.hpp"
#include "fairbasis/intensity.hpp"
#include "fairbasis/rn_pricing.hpp"
#include "fairbasis/types.hpp"

namespace fb {

struct McConfig {
    std::size_t n_paths = 80000;
    std::size_t n_steps_per_year = 250;
    std::uint64_t seed = 1;
    bool antithetic = false;

    void validate() const;
};

// One simulated intensity path. The state may go negative for the arithmetic
// family; hazard integration clamps at zero. tau exceeds maturity when the
// path survives.
struct PathBundle {
    std::vector<double> times, lambda;
    double maturity = 0.0;
    double tau = 0.0;
    bool defaulted = false;
};

// Path streams are keyed by (seed, path index), so results are independent of
// execution order and thread count. FAIRBASIS_THREADS caps the worker count
// (0 or unset: hardware concurrency).
PathBundle simulate_path(const IntensityModel& m, double T, const McConfig& cfg,
                         std::size_t index);

// Default times for the whole ensemble; +infinity marks survival.
std::vector<double> simulate_paths(const IntensityModel& m, double T, const McConfig& cfg);

struct McEstimate {
    double value = 0.0;
    double std_error = 0.0;
};

McEstimate price_bond_mc(const IntensityModel& m, const MarketEnv& env,
                         const BondSpec& bond, const McConfig& cfg);
McEstimate price_cds_mc(const IntensityModel& m, const MarketEnv& env,
                        const CdsSpec& cds, const McConfig& cfg);

enum class HedgeMode { cds_only_unhedged, deterministic_jtd, diffusion_hedge };

struct WealthStats {
    double mean = 0.0;       // of discounted terminal wealth
    double std_error = 0.0;
    std::vector<double> losses;  // pi_hat = -beta_T pi_T, one entry per path
    double drift_slope = 0.0;    // realized d(beta pi) regressed on beta lambda l dt
    std::size_t n_defaults = 0;
};

// Simulates the self-financing economy: unhedged CDS carry, the
// deterministic JtD-nulling hedge, or the diffusion hedge off risk-neutral FD
// surfaces. nc is a constant capital reserve (0 for the riskfree-financing
// verification runs).
WealthStats simulate_hedged_economy(const IntensityModel& m, const MarketEnv& env,
                                    const BondSpec& bond, const CdsSpec& cds,
                                    HedgeMode mode, const McConfig& cfg,
                                    double nc = 0.0, const GridSpec& gs = {});

struct VarEstimate {
    double value = 0.0;
    bool small_sample = false;  // fewer than 5 tail points at this confidence
};

// Empirical upper quantile of the loss sample per the inf-definition, order
// statistic with higher-index tie-breaking.
VarEstimate var_estimate(const WealthStats& stats, double q);

}  // namespace fb
