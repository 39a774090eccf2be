#include "fairbasis/basis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace fb {

double jtd_loss(double bond_val, double cds_val, double delta, double recovery) {
    return bond_val - recovery + delta * (cds_val - (1.0 - recovery));
}

double hedge_ratio_deterministic(double bond_val, double cds_val, double recovery) {
    double denom = 1.0 - recovery - cds_val;
    if (std::abs(denom) < 1e-12)
        throw std::runtime_error("hedge ratio undefined: protection leg worth the full default loss");
    return (bond_val - recovery) / denom;
}

namespace {

// Ratio -db/dv with the expiry limit: both sensitivities fade to zero near
// maturity (and for state-independent hazards) where the ratio tends to 1.
double guarded_delta(double db, double dv) {
    if (std::abs(db) < 1e-10 && std::abs(dv) < 1e-10) return 1.0;
    if (std::abs(dv) < 1e-12)
        throw std::runtime_error("hedge ratio undefined: cds lambda-sensitivity vanished");
    return std::min(std::max(-db / dv, 0.0), 10.0);
}

double hazard_at(const IntensityModel& m, double t, double lam) {
    return m.kind == ModelKind::curve ? std::max(m.level(t), 0.0) : std::max(lam, 0.0);
}

CoefficientFn leg_fn(const IntensityModel& m, const LambdaGrid& grid, double r,
                     double alpha, double beta) {
    return [&m, &grid, r, alpha, beta](double t, GeneratorCoefficients& g) {
        for (std::size_t i = 0; i < grid.size(); ++i) {
            double lam = grid.nodes[i];
            double v = vol(m, t, lam);
            double haz = hazard_at(m, t, lam);
            g.a[i] = drift(m, t, lam);
            g.half_b2[i] = 0.5 * v * v;
            g.c[i] = r + haz;
            g.f[i] = alpha + beta * haz;
        }
    };
}

}  // namespace

double hedge_ratio_diffusion(const Surface& bond, const Surface& cds, double t, double lam) {
    return guarded_delta(bond.dlam(t, lam), cds.dlam(t, lam));
}

Profile jtd_profile(const IntensityModel& m, const MarketEnv& env, const BondSpec& bond,
                    double cds_premium, double lam_lo, double lam_hi, const GridSpec& gs) {
    m.validate();
    env.validate();
    bond.validate();
    if (!(lam_hi > lam_lo)) throw std::invalid_argument("jtd profile range must be increasing");
    if (gs.n_lambda < 3) throw std::invalid_argument("jtd profile needs at least 3 nodes");

    LambdaGrid grid;
    grid.nodes.resize(gs.n_lambda);
    grid.dlam = (lam_hi - lam_lo) / static_cast<double>(gs.n_lambda - 1);
    for (std::size_t i = 0; i < gs.n_lambda; ++i)
        grid.nodes[i] = lam_lo + grid.dlam * static_cast<double>(i);
    TimeGrid tgrid = build_time_grid(bond.maturity, gs);

    double R = bond.recovery;
    MarchResult bleg = march_backward(grid, tgrid, std::vector<double>(gs.n_lambda, 1.0),
                                      leg_fn(m, grid, env.r, bond.coupon, R));
    MarchResult vleg = march_backward(grid, tgrid, std::vector<double>(gs.n_lambda, 0.0),
                                      leg_fn(m, grid, env.r, -cds_premium, 1.0 - R));

    Profile p;
    p.lambda = grid.nodes;
    p.value.resize(gs.n_lambda);
    for (std::size_t i = 0; i < gs.n_lambda; ++i)
        p.value[i] = jtd_loss(bleg.initial[i], vleg.initial[i], 1.0, R);
    return p;
}

namespace {

// Backward RK4 for the scalar linear equations of the deterministic case,
// lambda and the reserve sampled at the shared stage times.
struct DetCurves {
    std::vector<double> b_fair, cds, b_star, apv;
};

template <class NcFn>
DetCurves integrate_deterministic(const IntensityModel& m, const MarketEnv& env,
                                  const BondSpec& bond, const CdsSpec& cds,
                                  const NcFn& nc_at, const std::vector<double>& times) {
    std::size_t n = times.size();
    DetCurves out;
    out.b_fair.assign(n, 0.0);
    out.cds.assign(n, 0.0);
    out.b_star.assign(n, 0.0);
    out.apv.assign(n, 0.0);
    out.b_fair[n - 1] = 1.0;
    out.b_star[n - 1] = 1.0;

    double r = env.r, rbar_p = env.rbar_p(), rbar_k = env.rbar_k();
    double rc = bond.coupon, R = bond.recovery;
    double S = cds.premium, Rc = cds.recovery;

    auto step = [](double y, double h, double a0, double am, double a1, double b0,
                   double bm, double b1) {
        double k1 = a0 * y + b0;
        double k2 = am * (y + 0.5 * h * k1) + bm;
        double k3 = am * (y + 0.5 * h * k2) + bm;
        double k4 = a1 * (y + h * k3) + b1;
        return y + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    };

    for (std::size_t k = n - 1; k > 0; --k) {
        double t0 = times[k], t1 = times[k - 1];
        double h = t1 - t0;
        double tm = t0 + 0.5 * h;
        double l0 = std::max(m.level(t0), 0.0);
        double lm = std::max(m.level(tm), 0.0);
        double l1 = std::max(m.level(t1), 0.0);
        double n0 = nc_at(t0), nm = nc_at(tm), n1 = nc_at(t1);

        out.b_fair[k - 1] = step(out.b_fair[k], h, rbar_p + l0, rbar_p + lm, rbar_p + l1,
                                 -rc - l0 * R + rbar_k * n0, -rc - lm * R + rbar_k * nm,
                                 -rc - l1 * R + rbar_k * n1);
        out.cds[k - 1] = step(out.cds[k], h, r + l0, r + lm, r + l1, S - l0 * (1.0 - Rc),
                              S - lm * (1.0 - Rc), S - l1 * (1.0 - Rc));
        out.b_star[k - 1] = step(out.b_star[k], h, r + l0, r + lm, r + l1, -rc - l0 * R,
                                 -rc - lm * R, -rc - l1 * R);
        out.apv[k - 1] = step(out.apv[k], h, r + l0, r + lm, r + l1, -1.0, -1.0, -1.0);
    }
    return out;
}

void check_deterministic_inputs(const IntensityModel& m, const MarketEnv& env,
                                const BondSpec& bond, const CdsSpec& cds,
                                const std::vector<double>& times) {
    m.validate();
    env.validate();
    bond.validate();
    cds.validate();
    if (!m.deterministic())
        throw std::invalid_argument("deterministic solver requires a constant or curve intensity");
    if (bond.maturity != cds.maturity)
        throw std::invalid_argument("bond and cds maturities must match");
    if (times.size() < 2) throw std::invalid_argument("time grid needs at least 2 points");
    for (std::size_t k = 1; k < times.size(); ++k)
        if (!(times[k] > times[k - 1]))
            throw std::invalid_argument("time grid must be strictly increasing");
    if (std::abs(times.back() - bond.maturity) > 1e-9 * std::max(1.0, bond.maturity))
        throw std::invalid_argument("time grid must end at the maturity");
}

std::vector<double> uniform_times(double T, std::size_t n_steps) {
    std::vector<double> t(n_steps + 1);
    for (std::size_t k = 0; k <= n_steps; ++k)
        t[k] = T * static_cast<double>(k) / static_cast<double>(n_steps);
    return t;
}

template <class NcFn>
BasisReport deterministic_report(const IntensityModel& m, const MarketEnv& env,
                                 const BondSpec& bond, const CdsSpec& cds,
                                 const NcFn& nc_at, const GridSpec& gs) {
    std::vector<double> times = uniform_times(bond.maturity, gs.n_steps != 0
                                                                 ? gs.n_steps
                                                                 : gs.steps_for(bond.maturity));
    check_deterministic_inputs(m, env, bond, cds, times);
    DetCurves c = integrate_deterministic(m, env, bond, cds, nc_at, times);

    BasisReport rep;
    rep.b_star = c.b_star.front();
    rep.b_fair = c.b_fair.front();
    rep.xva = rep.b_star - rep.b_fair;
    rep.apv = c.apv.front();
    rep.fair_basis_bp = 1e4 * rep.xva / rep.apv;
    rep.package_value = rep.b_fair + c.cds.front() - 1.0;
    return rep;
}

}  // namespace

DetTables solve_deterministic_tables(const IntensityModel& m, const MarketEnv& env,
                                     const BondSpec& bond, const CdsSpec& cds, double nc,
                                     const std::vector<double>& times) {
    check_deterministic_inputs(m, env, bond, cds, times);
    DetCurves c = integrate_deterministic(m, env, bond, cds, [nc](double) { return nc; }, times);
    DetTables tab;
    tab.times = times;
    tab.bond = std::move(c.b_fair);
    tab.cds = std::move(c.cds);
    return tab;
}

BasisReport solve_deterministic(const IntensityModel& m, const MarketEnv& env,
                                const BondSpec& bond, const CdsSpec& cds, double nc,
                                const GridSpec& gs) {
    return deterministic_report(m, env, bond, cds, [nc](double) { return nc; }, gs);
}

BasisReport solve_deterministic(const IntensityModel& m, const MarketEnv& env,
                                const BondSpec& bond, const CdsSpec& cds,
                                const CapitalSpec& capital, const GridSpec& gs) {
    capital.validate();
    if (capital.mode == CapitalMode::mc_var)
        throw std::invalid_argument(
            "mc_var capital needs a simulated reserve; pass it as a fixed balance");
    double T = bond.maturity;
    auto nc_at = [&](double t) {
        double exposure = capital.mode == CapitalMode::fixed_exposure ? capital.fixed_exposure
                                                                      : 0.0;
        if (exposure <= 0.0) return 0.0;
        double pd = local_pd(m, t, m.level(t), T);
        return capital_balance(capital, pd, exposure, T - t);
    };
    return deterministic_report(m, env, bond, cds, nc_at, gs);
}

double fair_basis_formula(const MarketEnv& env, double nc) {
    return (env.rbar_p() - env.z) + env.rbar_k() * nc;
}

std::vector<double> mbar_path(const std::vector<double>& times,
                              const std::vector<double>& lambda,
                              const std::vector<double>& loss, double r) {
    if (times.empty() || times.size() != lambda.size() || times.size() != loss.size())
        throw std::invalid_argument("mbar_path requires equal-length nonempty inputs");
    std::vector<double> out(times.size());
    double acc = 0.0;
    double g_prev = std::exp(-r * times[0]) * std::max(lambda[0], 0.0) * loss[0];
    out[0] = 0.0;
    for (std::size_t k = 1; k < times.size(); ++k) {
        double dt = times[k] - times[k - 1];
        if (!(dt > 0.0)) throw std::invalid_argument("mbar_path times must be increasing");
        double g = std::exp(-r * times[k]) * std::max(lambda[k], 0.0) * loss[k];
        acc += 0.5 * (g_prev + g) * dt;
        out[k] = std::exp(r * times[k]) * acc;
        g_prev = g;
    }
    return out;
}

namespace {

// Linear interpolation over a uniform abscissa with linear extrapolation
// beyond the ends.
double interp_extrap(const double* y, const std::vector<double>& x, double xq) {
    std::size_t n = x.size();
    double dx = x[1] - x[0];
    double pos = (xq - x[0]) / dx;
    if (pos <= 0.0) return y[0] + (y[1] - y[0]) * pos;
    if (pos >= static_cast<double>(n - 1)) {
        double over = pos - static_cast<double>(n - 2);
        return y[n - 2] + (y[n - 1] - y[n - 2]) * over;
    }
    std::size_t j = static_cast<std::size_t>(pos);
    double w = pos - static_cast<double>(j);
    return y[j] + (y[j + 1] - y[j]) * w;
}

double interp_clamped(const double* y, const std::vector<double>& x, double xq) {
    std::size_t n = x.size();
    double dx = x[1] - x[0];
    double pos = (xq - x[0]) / dx;
    if (pos <= 0.0) return y[0];
    if (pos >= static_cast<double>(n - 1)) return y[n - 1];
    std::size_t j = static_cast<std::size_t>(pos);
    double w = pos - static_cast<double>(j);
    return y[j] + (y[j + 1] - y[j]) * w;
}

}  // namespace

BasisReport solve_basis_pde(const IntensityModel& m, const MarketEnv& env,
                            const BondSpec& bond, const CdsSpec& cds,
                            const CapitalSpec& capital, const GridSpec& gs,
                            const MbarGrid& mg, double mc_var_nc) {
    m.validate();
    env.validate();
    bond.validate();
    cds.validate();
    capital.validate();
    if (bond.maturity != cds.maturity)
        throw std::invalid_argument("bond and cds maturities must match");
    if (mg.n < 3) throw std::invalid_argument("mbar grid needs at least 3 nodes");
    if (!(mg.hi > mg.lo)) throw std::invalid_argument("mbar grid range must be increasing");
    if (!(mg.lo <= 0.0 && mg.hi >= 0.0))
        throw std::invalid_argument("mbar grid must bracket 0");
    if (capital.mode == CapitalMode::mc_var && !(mc_var_nc >= 0.0))
        throw std::invalid_argument("mc_var reserve must be nonnegative");

    double T = bond.maturity;
    RnSurfaceSet rn = rn_surfaces(m, env, bond, cds, gs);
    const LambdaGrid& grid = rn.grid;
    const TimeGrid& tgrid = rn.tgrid;
    std::size_t nl = grid.size(), nm = mg.n;
    double dt = tgrid.dt();
    double dm = (mg.hi - mg.lo) / static_cast<double>(nm - 1);
    std::vector<double> mnodes(nm);
    for (std::size_t j = 0; j < nm; ++j) mnodes[j] = mg.lo + dm * static_cast<double>(j);

    double r = env.r, rbar_p = env.rbar_p(), rbar_k = env.rbar_k(), r2 = env.r2();
    double rc = bond.coupon, R = bond.recovery;

    bool variable = capital.mode == CapitalMode::variable_exposure;

    std::vector<double> B(nl * nm, 1.0), Bhalf(nl * nm), Bnew(nl * nm), Bcand(nl * nm);
    std::vector<double> nc_flat(nl, 0.0), nc_var(variable ? nl * nm : 0, 0.0);
    std::vector<double> lrow(nl * nm), u(nl);
    std::vector<double> vrow(nl), dvrow(nl), haz_to(nl), haz_from(nl);
    GeneratorCoefficients cfrom(nl, grid.dlam), cto(nl, grid.dlam);
    CnWorkspace ws(nl);

    auto dlam_column = [&](const std::vector<double>& src, std::size_t i, std::size_t j) {
        if (i == 0) return (src[nm + j] - src[j]) / grid.dlam;
        if (i == nl - 1)
            return (src[(nl - 1) * nm + j] - src[(nl - 2) * nm + j]) / grid.dlam;
        return (src[(i + 1) * nm + j] - src[(i - 1) * nm + j]) / (2.0 * grid.dlam);
    };

    // Deterministic kinds hedge the default loss to zero; their slope ratio
    // would be 0/0 on the width-floored grid.
    bool det = m.deterministic();

    auto fill_losses = [&](const std::vector<double>& src) {
        for (std::size_t i = 0; i < nl; ++i)
            for (std::size_t j = 0; j < nm; ++j) {
                double delta = det ? hedge_ratio_deterministic(src[i * nm + j], vrow[i], R)
                                   : guarded_delta(dlam_column(src, i, j), dvrow[i]);
                lrow[i * nm + j] = jtd_loss(src[i * nm + j], vrow[i], delta, R);
            }
    };

    auto fill_capital = [&](double t) {
        double rem = T - t;
        for (std::size_t i = 0; i < nl; ++i) {
            double pd = local_pd(m, t, grid.nodes[i], T);
            if (capital.mode == CapitalMode::fixed_exposure) {
                nc_flat[i] = capital_balance(capital, pd, capital.fixed_exposure, rem);
            } else if (capital.mode == CapitalMode::mc_var) {
                nc_flat[i] = capital_balance(capital, pd, mc_var_nc, rem);
            } else {
                for (std::size_t j = 0; j < nm; ++j)
                    nc_var[i * nm + j] =
                        capital_balance(capital, pd, std::max(lrow[i * nm + j], 0.0), rem);
            }
        }
    };

    for (std::size_t k = tgrid.n_steps; k > 0; --k) {
        double t_from = tgrid.time(k), t_to = tgrid.time(k - 1);

        for (std::size_t i = 0; i < nl; ++i) {
            vrow[i] = rn.cds.value(t_from, grid.nodes[i]);
            dvrow[i] = rn.cds.dlam(t_from, grid.nodes[i]);
            haz_from[i] = hazard_at(m, t_from, grid.nodes[i]);
            haz_to[i] = hazard_at(m, t_to, grid.nodes[i]);
        }
        if (variable) fill_losses(B);
        fill_capital(t_from);

        for (std::size_t i = 0; i < nl; ++i) {
            double lam = grid.nodes[i];
            double vf = vol(m, t_from, lam), vt = vol(m, t_to, lam);
            cfrom.a[i] = drift(m, t_from, lam);
            cto.a[i] = drift(m, t_to, lam);
            cfrom.half_b2[i] = 0.5 * vf * vf;
            cto.half_b2[i] = 0.5 * vt * vt;
            cfrom.c[i] = rbar_p + haz_from[i];
            cto.c[i] = rbar_p + haz_to[i];
        }

        for (std::size_t j = 0; j < nm; ++j) {
            double pen = (r2 - r) * std::max(-mnodes[j], 0.0);
            for (std::size_t i = 0; i < nl; ++i) {
                double nc_ij = variable ? nc_var[i * nm + j] : nc_flat[i];
                cfrom.f[i] = rc + haz_from[i] * R - rbar_k * nc_ij - pen;
                cto.f[i] = rc + haz_to[i] * R - rbar_k * nc_ij - pen;
                u[i] = B[i * nm + j];
            }
            cn_step(cto, cfrom, dt, 0.5, u, ws);
            for (std::size_t i = 0; i < nl; ++i) Bhalf[i * nm + j] = u[i];
        }

        for (std::size_t i = 0; i < nl; ++i) {
            vrow[i] = rn.cds.value(t_to, grid.nodes[i]);
            dvrow[i] = rn.cds.dlam(t_to, grid.nodes[i]);
        }

        Bnew = Bhalf;
        bool converged = false;
        for (int it = 0; it < 20 && !converged; ++it) {
            fill_losses(Bnew);
            double vmax = 0.0;
            for (std::size_t i = 0; i < nl; ++i)
                for (std::size_t j = 0; j < nm; ++j)
                    vmax = std::max(vmax, std::abs(r * mnodes[j] + haz_to[i] * lrow[i * nm + j]));
            std::size_t nsub =
                std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(vmax * dt / dm)));
            if (nsub > 10000)
                throw std::runtime_error("basis pde advection unstable: excessive drift at t = " +
                                         std::to_string(t_to));
            double h = dt / static_cast<double>(nsub);

            double change = 0.0;
            for (std::size_t i = 0; i < nl; ++i) {
                const double* lr = lrow.data() + i * nm;
                const double* bh = Bhalf.data() + i * nm;
                for (std::size_t j = 0; j < nm; ++j) {
                    double x = mnodes[j];
                    for (std::size_t s = 0; s < nsub; ++s)
                        x += h * (r * x + haz_to[i] * interp_clamped(lr, mnodes, x));
                    double bnew = interp_extrap(bh, mnodes, x);
                    change = std::max(change, std::abs(bnew - Bnew[i * nm + j]));
                    Bcand[i * nm + j] = bnew;
                }
            }
            Bnew.swap(Bcand);
            converged = change < 1e-8;
        }
        if (!converged)
            throw std::runtime_error("basis pde drift iteration failed to converge at t = " +
                                     std::to_string(t_to));
        B.swap(Bnew);
    }

    double lam0 = grid.nodes[grid.i0];
    std::vector<double> b0(nl);
    for (std::size_t i = 0; i < nl; ++i)
        b0[i] = interp_clamped(B.data() + i * nm, mnodes, 0.0);

    BasisReport rep;
    rep.b_star = rn.bond.value(0.0, lam0);
    rep.b_fair = b0[grid.i0];
    rep.xva = rep.b_star - rep.b_fair;
    rep.apv = annuity_pv(m, env, 0.0, T, gs);
    rep.fair_basis_bp = 1e4 * rep.xva / rep.apv;
    rep.package_value = rep.b_fair + rn.cds.value(0.0, lam0) - 1.0;

    rep.hedge_ratio_profile.lambda = grid.nodes;
    rep.jtd_profile.lambda = grid.nodes;
    rep.capital_profile.lambda = grid.nodes;
    rep.hedge_ratio_profile.value.resize(nl);
    rep.jtd_profile.value.resize(nl);
    rep.capital_profile.value.resize(nl);
    for (std::size_t i = 0; i < nl; ++i) {
        double db;
        if (i == 0)
            db = (b0[1] - b0[0]) / grid.dlam;
        else if (i == nl - 1)
            db = (b0[nl - 1] - b0[nl - 2]) / grid.dlam;
        else
            db = (b0[i + 1] - b0[i - 1]) / (2.0 * grid.dlam);
        double dv = rn.cds.dlam(0.0, grid.nodes[i]);
        double v0 = rn.cds.value(0.0, grid.nodes[i]);
        double delta = det ? hedge_ratio_deterministic(b0[i], v0, R) : guarded_delta(db, dv);
        double l = jtd_loss(b0[i], v0, delta, R);
        rep.hedge_ratio_profile.value[i] = delta;
        rep.jtd_profile.value[i] = l;
        double pd = local_pd(m, 0.0, grid.nodes[i], T);
        double exposure = capital.mode == CapitalMode::fixed_exposure ? capital.fixed_exposure
                          : capital.mode == CapitalMode::mc_var      ? mc_var_nc
                                                                     : std::max(l, 0.0);
        rep.capital_profile.value[i] = capital_balance(capital, pd, exposure, T);
    }

    rep.mbar_slice.lambda = mnodes;
    rep.mbar_slice.value.resize(nm);
    for (std::size_t j = 0; j < nm; ++j)
        rep.mbar_slice.value[j] = B[grid.i0 * nm + j];

    return rep;
}

}  // namespace fb
