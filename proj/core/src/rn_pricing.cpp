#include "fairbasis/rn_pricing.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fb {

namespace {

// Every leg shares the pattern c = r_eff + hazard, f = alpha + beta * hazard.
// The hazard at a node is the clamped state, except for the deterministic
// curve where it follows the term structure regardless of node.
CoefficientFn leg_coefficients(const IntensityModel& m, const LambdaGrid& g,
                               double r_eff, double alpha, double beta) {
    return [&m, &g, r_eff, alpha, beta](double t, GeneratorCoefficients& cf) {
        std::size_t n = g.size();
        double curve_level = m.kind == ModelKind::curve ? m.level(t) : 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double lam = g.nodes[i];
            double hazard = m.kind == ModelKind::curve ? curve_level : std::max(lam, 0.0);
            cf.a[i] = drift(m, t, lam);
            double b = vol(m, t, std::max(lam, 0.0));
            cf.half_b2[i] = 0.5 * b * b;
            cf.c[i] = r_eff + hazard;
            cf.f[i] = alpha + beta * hazard;
        }
    };
}

struct LegSolve {
    LambdaGrid grid;
    TimeGrid tgrid;
    MarchResult res;
};

LegSolve solve_leg(const IntensityModel& m, double T, const GridSpec& gs,
                   double r_eff, double alpha, double beta, double terminal,
                   bool store_surface) {
    m.validate();
    LegSolve s;
    s.grid = build_lambda_grid(m, T, gs);
    s.tgrid = build_time_grid(T, gs);
    auto coeffs = leg_coefficients(m, s.grid, r_eff, alpha, beta);
    std::vector<double> tv(s.grid.size(), terminal);
    s.res = march_backward(s.grid, s.tgrid, std::move(tv), coeffs, store_surface);
    for (double v : s.res.initial)
        if (!std::isfinite(v)) throw std::runtime_error("pricing solve produced non-finite values");
    return s;
}

PricingResult extract(const LegSolve& s, double t) {
    const LambdaGrid& g = s.grid;
    std::size_t i0 = g.i0, n = g.size();
    auto from_row = [&](const double* r, PricingResult& out) {
        out.value = r[i0];
        if (i0 > 0 && i0 + 1 < n) {
            out.delta = (r[i0 + 1] - r[i0 - 1]) / (2.0 * g.dlam);
            out.gamma = (r[i0 + 1] - 2.0 * r[i0] + r[i0 - 1]) / (g.dlam * g.dlam);
        } else {
            std::size_t j = i0 == 0 ? 0 : n - 3;
            out.delta = (r[j + 1] - r[j]) / g.dlam;
            out.gamma = (r[j + 2] - 2.0 * r[j + 1] + r[j]) / (g.dlam * g.dlam);
        }
    };

    PricingResult out;
    out.grid_values = s.res.initial;
    if (t <= 0.0) {
        from_row(s.res.initial.data(), out);
        return out;
    }
    const Surface& surf = s.res.surface;
    const auto& times = surf.times();
    auto it = std::upper_bound(times.begin(), times.end(), t);
    std::size_t k = it == times.begin() ? 0 : static_cast<std::size_t>(it - times.begin()) - 1;
    k = std::min(k, times.size() - 2);
    double w = std::clamp((t - times[k]) / (times[k + 1] - times[k]), 0.0, 1.0);
    PricingResult lo, hi;
    from_row(surf.row(k), lo);
    from_row(surf.row(k + 1), hi);
    out.value = (1.0 - w) * lo.value + w * hi.value;
    out.delta = (1.0 - w) * lo.delta + w * hi.delta;
    out.gamma = (1.0 - w) * lo.gamma + w * hi.gamma;
    return out;
}

void check_eval_time(double t, double T) {
    if (t < 0.0 || t > T) throw std::invalid_argument("evaluation time must lie in [0, T]");
}

}  // namespace

PricingResult survival_fd(const IntensityModel& m, double t, double T, const GridSpec& gs) {
    check_eval_time(t, T);
    LegSolve s = solve_leg(m, T, gs, 0.0, 0.0, 0.0, 1.0, t > 0.0);
    return extract(s, t);
}

double annuity_pv(const IntensityModel& m, const MarketEnv& env, double t, double T,
                  const GridSpec& gs) {
    check_eval_time(t, T);
    LegSolve s = solve_leg(m, T, gs, env.r, 1.0, 0.0, 0.0, t > 0.0);
    return extract(s, t).value;
}

double default_pv(const IntensityModel& m, const MarketEnv& env, double R, double t,
                  double T, const GridSpec& gs) {
    check_eval_time(t, T);
    if (!(R >= 0.0 && R <= 1.0)) throw std::invalid_argument("recovery must lie in [0, 1]");
    LegSolve s = solve_leg(m, T, gs, env.r, 0.0, 1.0 - R, 0.0, t > 0.0);
    return extract(s, t).value;
}

PricingResult cds_value(const IntensityModel& m, const MarketEnv& env, const CdsSpec& cds,
                        double t, const GridSpec& gs) {
    cds.validate();
    check_eval_time(t, cds.maturity);
    LegSolve s = solve_leg(m, cds.maturity, gs, env.r, -cds.premium,
                           1.0 - cds.recovery, 0.0, t > 0.0);
    return extract(s, t);
}

PricingResult bond_value_rn(const IntensityModel& m, const MarketEnv& env,
                            const BondSpec& bond, double t, const GridSpec& gs) {
    bond.validate();
    check_eval_time(t, bond.maturity);
    LegSolve s = solve_leg(m, bond.maturity, gs, env.r, bond.coupon,
                           bond.recovery, 1.0, t > 0.0);
    return extract(s, t);
}

double floating_bond_value(const IntensityModel& m, const MarketEnv& env, double spread,
                           double recovery, double T, const GridSpec& gs) {
    if (spread < 0.0) throw std::invalid_argument("floating spread must be nonnegative");
    return 1.0 - default_pv(m, env, recovery, 0.0, T, gs)
           + spread * annuity_pv(m, env, 0.0, T, gs);
}

RnSurfaceSet rn_surfaces(const IntensityModel& m, const MarketEnv& env,
                         const BondSpec& bond, const CdsSpec& cds, const GridSpec& gs) {
    if (bond.maturity != cds.maturity)
        throw std::invalid_argument("bond and cds maturities must match for the hedged economy");
    LegSolve b = solve_leg(m, bond.maturity, gs, env.r, bond.coupon, bond.recovery, 1.0, true);
    RnSurfaceSet out;
    out.grid = b.grid;
    out.tgrid = b.tgrid;
    out.bond = std::move(b.res.surface);

    auto coeffs = leg_coefficients(m, out.grid, env.r, -cds.premium, 1.0 - cds.recovery);
    std::vector<double> tv(out.grid.size(), 0.0);
    MarchResult v = march_backward(out.grid, out.tgrid, std::move(tv), coeffs, true);
    out.cds = std::move(v.surface);
    return out;
}

}  // namespace fb
