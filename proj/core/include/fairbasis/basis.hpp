#pragma once

#include <cstddef>
#include <vector>

#include "fairbasis/capital.hpp"
#include "fairbasis/cn.hpp"
#include "fairbasis/grid.hpp"
#include "fairbasis/intensity.hpp"
#include "fairbasis/rn_pricing.hpp"
#include "fairbasis/types.hpp"

namespace fb {

// Jump-to-default exposure of a hedged long-bond long-protection package.
double jtd_loss(double bond_val, double cds_val, double delta, double recovery);

// Delta that zeroes the JtD loss when the intensity is deterministic.
double hedge_ratio_deterministic(double bond_val, double cds_val, double recovery);

// Diffusion hedge -dB/dlam / dV/dlam read off FD surfaces, clamped to [0, 10].
// Near expiry both derivatives vanish; the ratio limits to 1 and is returned
// as such when both are negligible.
double hedge_ratio_diffusion(const Surface& bond, const Surface& cds, double t, double lam);

struct Profile {
    std::vector<double> lambda, value;
};

// l(0, lambda) for the unit-notional package (delta = 1) across a lambda
// range; bond and protection legs are priced risk-neutrally per node.
Profile jtd_profile(const IntensityModel& m, const MarketEnv& env, const BondSpec& bond,
                    double cds_premium, double lam_lo = 0.001, double lam_hi = 0.25,
                    const GridSpec& gs = {});

// Backward tables of the deterministic-intensity bond (financing-adjusted) and
// CDS values on an arbitrary increasing time grid; nc is a constant reserve
// balance. Used by the deterministic solver and by the hedge simulator.
struct DetTables {
    std::vector<double> times, bond, cds;
};

DetTables solve_deterministic_tables(const IntensityModel& m, const MarketEnv& env,
                                     const BondSpec& bond, const CdsSpec& cds, double nc,
                                     const std::vector<double>& times);

struct BasisReport {
    double b_star = 0.0;        // risk-neutral bond value
    double b_fair = 0.0;        // funding/capital-adjusted value
    double xva = 0.0;           // b_star - b_fair
    double apv = 0.0;           // risky annuity
    double fair_basis_bp = 0.0; // 1e4 * xva / apv
    double package_value = 0.0; // v = b_fair + cds - 1
    Profile hedge_ratio_profile;  // delta(lambda) at t = 0
    Profile jtd_profile;          // l(0, lambda)
    Profile capital_profile;      // N_c(0, lambda)
    Profile mbar_slice;           // B(0, lambda0, mbar) against mbar
};

// Coupled bond/CDS ODEs of the deterministic special case, delta chosen to
// null the JtD loss. Capital: fixed reserve overload, or a CapitalSpec whose
// balance is evaluated along the integration.
BasisReport solve_deterministic(const IntensityModel& m, const MarketEnv& env,
                                const BondSpec& bond, const CdsSpec& cds, double nc,
                                const GridSpec& gs = {});
BasisReport solve_deterministic(const IntensityModel& m, const MarketEnv& env,
                                const BondSpec& bond, const CdsSpec& cds,
                                const CapitalSpec& capital, const GridSpec& gs = {});

// Break-even basis (r_c - S - z) = (rbar_p - z) + rbar_k * N_c.
double fair_basis_formula(const MarketEnv& env, double nc);

// Accumulated funding balance along a path: beta_t^{-1} int_0^t lambda l beta.
std::vector<double> mbar_path(const std::vector<double>& times,
                              const std::vector<double>& lambda,
                              const std::vector<double>& loss, double r);

struct MbarGrid {
    double lo = -0.5, hi = 0.5;
    std::size_t n = 41;
};

// Funding- and capital-adjusted bond on the (lambda, mbar) grid: implicit CN
// sweeps in lambda, explicit advection in mbar, Picard iteration on the
// nonlinear JtD drift. Reported at (0, lambda0, 0). In mc_var mode the reserve
// is the caller-supplied mc_var_nc (a simulated VaR).
BasisReport solve_basis_pde(const IntensityModel& m, const MarketEnv& env,
                            const BondSpec& bond, const CdsSpec& cds,
                            const CapitalSpec& capital, const GridSpec& gs = {},
                            const MbarGrid& mg = {}, double mc_var_nc = 0.0);

}  // namespace fb
