#include "fairbasis/mc.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <stdexcept>
#include <thread>

#include "fairbasis/basis.hpp"

namespace fb {

void McConfig::validate() const {
    if (n_paths < 100) throw std::invalid_argument("mc.n_paths must be at least 100");
    if (n_steps_per_year == 0) throw std::invalid_argument("mc.n_steps_per_year must be positive");
}

namespace {

// splitmix64 keyed by (seed, stream): scheduling-independent per-path draws.
// The stream index is scrambled through the output mixer first; a plain
// affine seed would make neighbouring streams shifted copies of one sequence.
class PathRng {
  public:
    PathRng(std::uint64_t seed, std::uint64_t stream) : state_(seed ^ mix(stream)) {
        next_raw();
        next_raw();
    }

    double next_uniform() {  // strictly inside (0, 1)
        return (static_cast<double>(next_raw() >> 11) + 0.5) * 0x1.0p-53;
    }

    double next_gaussian() {
        if (have_cached_) {
            have_cached_ = false;
            return cached_;
        }
        double u1 = next_uniform(), u2 = next_uniform();
        double rad = std::sqrt(-2.0 * std::log(u1));
        double ang = 2.0 * M_PI * u2;
        cached_ = rad * std::sin(ang);
        have_cached_ = true;
        return rad * std::cos(ang);
    }

  private:
    static std::uint64_t mix(std::uint64_t z) {
        z += 0x9E3779B97F4A7C15ULL;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    std::uint64_t next_raw() {
        state_ += 0x9E3779B97F4A7C15ULL;
        return mix(state_);
    }

    std::uint64_t state_;
    double cached_ = 0.0;
    bool have_cached_ = false;
};

std::size_t worker_count() {
    if (const char* env = std::getenv("FAIRBASIS_THREADS")) {
        char* end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end != env && v > 0) return static_cast<std::size_t>(v);
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

// f(i) for i in [0, n), chunked across workers. f writes only to slot i of
// preallocated output, so the reduction order stays serial and deterministic.
template <class F>
void parallel_for(std::size_t n, const F& f) {
    std::size_t workers = std::min(worker_count(), std::max<std::size_t>(n / 256, 1));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) f(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    std::size_t chunk = (n + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
        std::size_t lo = w * chunk, hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &f] {
            for (std::size_t i = lo; i < hi; ++i) f(i);
        });
    }
    for (auto& t : pool) t.join();
}

struct PathLayout {
    std::size_t n_steps = 0;
    double dt = 0.0;
};

PathLayout layout_for(double T, const McConfig& cfg) {
    PathLayout pl;
    pl.n_steps = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::ceil(T * static_cast<double>(cfg.n_steps_per_year))));
    pl.dt = T / static_cast<double>(pl.n_steps);
    return pl;
}

// Full-truncation Euler trajectory plus Cox default time. traj, when given,
// receives the state at every grid point. Returns tau (> T on survival).
double simulate_core(const IntensityModel& m, double T, const McConfig& cfg,
                     std::size_t index, const PathLayout& pl, std::vector<double>* traj) {
    std::uint64_t stream = cfg.antithetic ? index / 2 : index;
    bool mirror = cfg.antithetic && (index % 2 == 1);
    PathRng rng(cfg.seed, stream);

    double u = rng.next_uniform();
    double threshold = mirror ? -std::log1p(-u) : -std::log(u);

    bool diffusive = m.kind == ModelKind::arithmetic || m.kind == ModelKind::square_root;
    double lam = diffusive ? m.lambda0 : m.level(0.0);
    if (traj) (*traj)[0] = lam;

    double hazard_acc = 0.0;
    double tau = std::numeric_limits<double>::infinity();
    double sqrt_dt = std::sqrt(pl.dt);
    for (std::size_t k = 0; k < pl.n_steps; ++k) {
        double lam_prev = lam;
        if (diffusive) {
            double pos = std::max(lam, 0.0);
            double z = rng.next_gaussian();
            if (mirror) z = -z;
            if (m.kind == ModelKind::square_root)
                lam += m.kappa * (m.theta - pos) * pl.dt + m.sigma * std::sqrt(pos) * sqrt_dt * z;
            else
                lam += m.a * pl.dt + m.b * sqrt_dt * z;
        } else {
            lam = m.level(pl.dt * static_cast<double>(k + 1));
        }
        if (traj) (*traj)[k + 1] = lam;

        double inc = 0.5 * pl.dt * (std::max(lam_prev, 0.0) + std::max(lam, 0.0));
        if (tau > T && hazard_acc + inc >= threshold && inc > 0.0) {
            double frac = (threshold - hazard_acc) / inc;
            tau = pl.dt * (static_cast<double>(k) + std::min(std::max(frac, 0.0), 1.0));
        }
        hazard_acc += inc;
    }
    return tau;
}

double annuity_factor(double r, double u) {
    return r == 0.0 ? u : -std::expm1(-r * u) / r;
}

double bond_path_payoff(double r, const BondSpec& b, double tau) {
    if (tau > b.maturity)
        return std::exp(-r * b.maturity) + b.coupon * annuity_factor(r, b.maturity);
    return b.recovery * std::exp(-r * tau) + b.coupon * annuity_factor(r, tau);
}

double cds_path_payoff(double r, const CdsSpec& c, double tau) {
    if (tau > c.maturity) return -c.premium * annuity_factor(r, c.maturity);
    return (1.0 - c.recovery) * std::exp(-r * tau) - c.premium * annuity_factor(r, tau);
}

// Mean and standard error; with antithetic pairing the estimator sample is
// the per-pair average.
McEstimate reduce_samples(const std::vector<double>& per_path, bool antithetic) {
    std::vector<double> samples;
    if (antithetic) {
        samples.reserve((per_path.size() + 1) / 2);
        for (std::size_t j = 0; j < per_path.size(); j += 2) {
            double s = per_path[j];
            if (j + 1 < per_path.size()) s = 0.5 * (s + per_path[j + 1]);
            samples.push_back(s);
        }
    } else {
        samples = per_path;
    }
    double n = static_cast<double>(samples.size());
    double mean = 0.0;
    for (double s : samples) mean += s;
    mean /= n;
    double ss = 0.0;
    for (double s : samples) ss += (s - mean) * (s - mean);
    McEstimate out;
    out.value = mean;
    out.std_error = samples.size() > 1 ? std::sqrt(ss / (n - 1.0) / n) : 0.0;
    return out;
}

template <class Payoff>
McEstimate mc_price(const IntensityModel& m, double T, const McConfig& cfg,
                    const Payoff& payoff) {
    m.validate();
    cfg.validate();
    PathLayout pl = layout_for(T, cfg);
    std::vector<double> results(cfg.n_paths);
    parallel_for(cfg.n_paths, [&](std::size_t i) {
        results[i] = payoff(simulate_core(m, T, cfg, i, pl, nullptr));
    });
    return reduce_samples(results, cfg.antithetic);
}

}  // namespace

PathBundle simulate_path(const IntensityModel& m, double T, const McConfig& cfg,
                         std::size_t index) {
    m.validate();
    cfg.validate();
    PathLayout pl = layout_for(T, cfg);
    PathBundle pb;
    pb.maturity = T;
    pb.times.resize(pl.n_steps + 1);
    for (std::size_t k = 0; k <= pl.n_steps; ++k)
        pb.times[k] = pl.dt * static_cast<double>(k);
    pb.lambda.resize(pl.n_steps + 1);
    pb.tau = simulate_core(m, T, cfg, index, pl, &pb.lambda);
    pb.defaulted = pb.tau <= T;
    return pb;
}

std::vector<double> simulate_paths(const IntensityModel& m, double T, const McConfig& cfg) {
    m.validate();
    cfg.validate();
    PathLayout pl = layout_for(T, cfg);
    std::vector<double> taus(cfg.n_paths);
    parallel_for(cfg.n_paths, [&](std::size_t i) {
        taus[i] = simulate_core(m, T, cfg, i, pl, nullptr);
    });
    return taus;
}

McEstimate price_bond_mc(const IntensityModel& m, const MarketEnv& env,
                         const BondSpec& bond, const McConfig& cfg) {
    bond.validate();
    return mc_price(m, bond.maturity, cfg,
                    [&](double tau) { return bond_path_payoff(env.r, bond, tau); });
}

McEstimate price_cds_mc(const IntensityModel& m, const MarketEnv& env,
                        const CdsSpec& cds, const McConfig& cfg) {
    cds.validate();
    return mc_price(m, cds.maturity, cfg,
                    [&](double tau) { return cds_path_payoff(env.r, cds, tau); });
}

namespace {

struct EconSetup {
    double T = 0.0;
    PathLayout pl;
    double v0 = 0.0;            // cds_only
    RnSurfaceSet surfaces;      // diffusion_hedge
    DetTables tables;           // deterministic_jtd
};

struct PathOutcome {
    double wealth = 0.0;  // discounted terminal wealth
    double sxy = 0.0, sxx = 0.0;
    bool defaulted = false;
};

PathOutcome run_economy_path(const MarketEnv& env, const BondSpec& bond,
                             const CdsSpec& cds, HedgeMode mode, double nc,
                             const EconSetup& es, const std::vector<double>& traj,
                             double tau) {
    PathOutcome out;
    double dt = es.pl.dt;
    double r = env.r, rbar_p = env.rbar_p(), rbar_k = env.rbar_k(), r2 = env.r2();
    double R = bond.recovery, S = cds.premium;

    auto bond_at = [&](double t, double lam, std::size_t k) {
        if (mode == HedgeMode::diffusion_hedge) return es.surfaces.bond.value(t, lam);
        (void)lam;
        double w = (t - es.tables.times[k]) / dt;
        return es.tables.bond[k] + w * (es.tables.bond[k + 1] - es.tables.bond[k]);
    };
    auto cds_at = [&](double t, double lam, std::size_t k) {
        if (mode == HedgeMode::diffusion_hedge) return es.surfaces.cds.value(t, lam);
        (void)lam;
        double w = (t - es.tables.times[k]) / dt;
        return es.tables.cds[k] + w * (es.tables.cds[k + 1] - es.tables.cds[k]);
    };
    auto delta_at = [&](double t, double lam, double bv, double vv) {
        if (mode == HedgeMode::diffusion_hedge)
            return hedge_ratio_diffusion(es.surfaces.bond, es.surfaces.cds, t, lam);
        return hedge_ratio_deterministic(bv, vv, R);
    };

    double pi = 0.0;
    out.defaulted = tau <= es.T;
    for (std::size_t k = 0; k < es.pl.n_steps; ++k) {
        double t0 = dt * static_cast<double>(k);
        double t1 = t0 + dt;
        double lam0 = traj[k], lam1 = traj[k + 1];
        double b0 = bond_at(t0, lam0, k), v0 = cds_at(t0, lam0, k);
        double d0 = delta_at(t0, lam0, b0, v0);

        if (tau <= t1) {
            double s = std::max(tau - t0, 0.0);
            double w = s / dt;
            double lam_tau = lam0 + w * (lam1 - lam0);
            double b_tau = bond_at(tau, lam_tau, k), v_tau = cds_at(tau, lam_tau, k);
            pi += s * (r * pi + bond.coupon - rbar_p * b0 - (r2 - r) * std::max(-pi, 0.0)
                       - rbar_k * nc)
                  + (b_tau - b0) + d0 * ((v_tau - v0) - s * (r * v0 + S));
            double d_tau = delta_at(tau, lam_tau, b_tau, v_tau);
            pi -= jtd_loss(b_tau, v_tau, d_tau, R);
            out.wealth = std::exp(-r * tau) * pi;
            return out;
        }

        double b1 = bond_at(t1, lam1, k), v1 = cds_at(t1, lam1, k);
        double pi_new = pi
                        + dt * (r * pi + bond.coupon - rbar_p * b0
                                - (r2 - r) * std::max(-pi, 0.0) - rbar_k * nc)
                        + (b1 - b0) + d0 * ((v1 - v0) - dt * (r * v0 + S));
        if (mode == HedgeMode::diffusion_hedge) {
            double beta0 = std::exp(-r * t0), beta1 = std::exp(-r * t1);
            double y = beta1 * pi_new - beta0 * pi;
            double x = beta0 * std::max(lam0, 0.0) * jtd_loss(b0, v0, d0, R) * dt;
            out.sxy += x * y;
            out.sxx += x * x;
        }
        pi = pi_new;
    }
    out.wealth = std::exp(-r * es.T) * pi;
    return out;
}

}  // namespace

WealthStats simulate_hedged_economy(const IntensityModel& m, const MarketEnv& env,
                                    const BondSpec& bond, const CdsSpec& cds,
                                    HedgeMode mode, const McConfig& cfg, double nc,
                                    const GridSpec& gs) {
    m.validate();
    env.validate();
    bond.validate();
    cds.validate();
    cfg.validate();
    if (bond.maturity != cds.maturity)
        throw std::invalid_argument("hedged economy requires matching bond and cds maturities");

    EconSetup es;
    es.T = bond.maturity;
    es.pl = layout_for(es.T, cfg);
    if (mode == HedgeMode::cds_only_unhedged) {
        es.v0 = cds_value(m, env, cds, 0.0, gs).value;
    } else if (mode == HedgeMode::diffusion_hedge) {
        es.surfaces = rn_surfaces(m, env, bond, cds, gs);
    } else {
        if (!m.deterministic())
            throw std::invalid_argument("deterministic_jtd requires a deterministic intensity model");
        std::vector<double> times(es.pl.n_steps + 1);
        for (std::size_t k = 0; k <= es.pl.n_steps; ++k)
            times[k] = es.pl.dt * static_cast<double>(k);
        es.tables = solve_deterministic_tables(m, env, bond, cds, nc, times);
    }

    std::vector<double> wealth(cfg.n_paths), sxy(cfg.n_paths, 0.0), sxx(cfg.n_paths, 0.0);
    std::vector<char> defaulted(cfg.n_paths, 0);

    if (mode == HedgeMode::cds_only_unhedged) {
        parallel_for(cfg.n_paths, [&](std::size_t i) {
            double tau = simulate_core(m, es.T, cfg, i, es.pl, nullptr);
            wealth[i] = cds_path_payoff(env.r, cds, tau) - es.v0;
            defaulted[i] = tau <= es.T;
        });
    } else {
        thread_local std::vector<double> traj;
        parallel_for(cfg.n_paths, [&](std::size_t i) {
            traj.resize(es.pl.n_steps + 1);
            double tau = simulate_core(m, es.T, cfg, i, es.pl, &traj);
            PathOutcome po = run_economy_path(env, bond, cds, mode, nc, es, traj, tau);
            wealth[i] = po.wealth;
            sxy[i] = po.sxy;
            sxx[i] = po.sxx;
            defaulted[i] = po.defaulted;
        });
    }

    McEstimate est = reduce_samples(wealth, cfg.antithetic);
    WealthStats stats;
    stats.mean = est.value;
    stats.std_error = est.std_error;
    stats.losses.resize(cfg.n_paths);
    for (std::size_t i = 0; i < cfg.n_paths; ++i) stats.losses[i] = -wealth[i];
    double txy = 0.0, txx = 0.0;
    std::size_t nd = 0;
    for (std::size_t i = 0; i < cfg.n_paths; ++i) {
        txy += sxy[i];
        txx += sxx[i];
        nd += defaulted[i] ? 1u : 0u;
    }
    stats.drift_slope = txx > 0.0 ? txy / txx : 0.0;
    stats.n_defaults = nd;
    return stats;
}

VarEstimate var_estimate(const WealthStats& stats, double q) {
    if (!(q > 0.5 && q < 1.0)) throw std::invalid_argument("var confidence must lie in (0.5, 1)");
    if (stats.losses.empty()) throw std::invalid_argument("var_estimate: empty loss sample");
    std::vector<double> sorted = stats.losses;
    std::sort(sorted.begin(), sorted.end());
    double n = static_cast<double>(sorted.size());
    std::size_t k = static_cast<std::size_t>(std::ceil(n * q - 1e-9));
    k = std::min(std::max<std::size_t>(k, 1), sorted.size());
    VarEstimate out;
    out.value = sorted[k - 1];
    out.small_sample = n * (1.0 - q) < 5.0;
    return out;
}

}  // namespace fb
