// Release gate: one scenario per line, pinned tolerances, nonzero exit on any
// failure. Each check prints its wall time so regressions in runtime are
// visible alongside regressions in values.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "fairbasis/analytics.hpp"
#include "fairbasis/basis.hpp"
#include "fairbasis/capital.hpp"
#include "fairbasis/config.hpp"
#include "fairbasis/mc.hpp"
#include "fairbasis/rn_pricing.hpp"

namespace {

int g_failed = 0;
int g_index = 0;

struct Check {
    bool ok = true;
    std::string detail;

    void expect(bool cond, const std::string& what) {
        if (!cond) {
            ok = false;
            if (!detail.empty()) detail += "; ";
            detail += what;
        }
    }
    void expect_near(double got, double want, double tol, const std::string& what) {
        if (!(std::abs(got - want) <= tol)) {
            char buf[160];
            std::snprintf(buf, sizeof buf, "%s: got %.10g, want %.10g +- %.2g", what.c_str(),
                          got, want, tol);
            expect(false, buf);
        }
    }
};

void run(const char* name, const std::function<void(Check&)>& fn) {
    auto start = std::chrono::steady_clock::now();
    Check c;
    try {
        fn(c);
    } catch (const std::exception& e) {
        c.expect(false, std::string("exception: ") + e.what());
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    ++g_index;
    if (c.ok) {
        std::printf("[PASS] %2d %s (%.1fs)\n", g_index, name, secs);
    } else {
        ++g_failed;
        std::printf("[FAIL] %2d %s (%.1fs): %s\n", g_index, name, secs, c.detail.c_str());
    }
    std::fflush(stdout);
}

fb::MarketEnv flat_env(double r) {
    fb::MarketEnv e;
    e.r = r;
    e.r_L = r;
    e.r_p = r;
    e.r_1 = r;
    e.r_b = r;
    e.r_k = r;
    e.z = r;
    return e;
}

double par_premium(const fb::IntensityModel& m, const fb::MarketEnv& env, double R, double T) {
    return fb::default_pv(m, env, R, 0.0, T) / fb::annuity_pv(m, env, 0.0, T);
}

}  // namespace

int main() {
    using namespace fb;

    run("zero-coupon package prices to par", [](Check& c) {
        MarketEnv env = flat_env(0.0);
        BondSpec bond{0.0, 5.0, 0.4};
        CdsSpec cds{0.0, 5.0, 0.4};
        std::vector<IntensityModel> models = {
            IntensityModel::constant(0.03),
            IntensityModel::square_root(0.02, 0.5, 0.04, 0.1)};
        for (const auto& m : models) {
            PricingResult b = bond_value_rn(m, env, bond, 0.0);
            PricingResult v = cds_value(m, env, cds, 0.0);
            const char* tag = m.kind == ModelKind::constant ? "constant" : "square_root";
            c.expect_near(b.value + v.value, 1.0, 1e-4, std::string(tag) + " value sum");
            c.expect_near(b.delta + v.delta, 0.0, 1e-3, std::string(tag) + " delta sum");
        }
    });

    run("finite differences agree with 80k-path monte carlo", [](Check& c) {
        MarketEnv env = flat_env(0.02);
        BondSpec bond{0.05, 5.0, 0.4};
        CdsSpec cds{0.018, 5.0, 0.4};
        McConfig mc;
        mc.n_paths = 80000;
        mc.seed = 11;
        std::vector<IntensityModel> models = {
            IntensityModel::constant(0.03),
            IntensityModel::square_root(0.02, 0.5, 0.04, 0.1)};
        for (const auto& m : models) {
            const char* tag = m.kind == ModelKind::constant ? "constant" : "square_root";
            double fd_b = bond_value_rn(m, env, bond, 0.0).value;
            double fd_v = cds_value(m, env, cds, 0.0).value;
            McEstimate mb = price_bond_mc(m, env, bond, mc);
            McEstimate mv = price_cds_mc(m, env, cds, mc);
            c.expect(std::abs(fd_b - mb.value) <= 3.0 * mb.std_error,
                     std::string(tag) + " bond off by " +
                         std::to_string(std::abs(fd_b - mb.value) / mb.std_error) + " se");
            c.expect(std::abs(fd_v - mv.value) <= 3.0 * mv.std_error,
                     std::string(tag) + " cds off by " +
                         std::to_string(std::abs(fd_v - mv.value) / mv.std_error) + " se");
        }
    });

    run("survival solver reproduces the affine closed form", [](Check& c) {
        for (double lam0 : {0.01, 0.02, 0.05})
            for (double T : {1.0, 5.0, 10.0}) {
                IntensityModel m = IntensityModel::square_root(lam0, 0.5, 0.04, 0.1);
                double fd = survival_fd(m, 0.0, T).value;
                double cf = survival_closed_form(m, 0.0, T);
                char what[64];
                std::snprintf(what, sizeof what, "q(lam0=%.2f, T=%g)", lam0, T);
                c.expect_near(fd, cf, 1e-4, what);
            }
    });

    run("vanishing vol recovers the deterministic carry formula", [](Check& c) {
        IntensityModel m = IntensityModel::square_root(0.03, 0.5, 0.03, 1e-6);
        MarketEnv env = flat_env(0.02);
        env.r_k = 0.12;
        env.epsilon = 0.0;
        BondSpec bond{0.032, 5.0, 0.4};
        CdsSpec cds{0.009, 5.0, 0.4};
        CapitalSpec cap;
        cap.mode = CapitalMode::mc_var;
        double nc = 0.013;
        BasisReport rep = solve_basis_pde(m, env, bond, cds, cap, {}, {}, nc);
        double carry = bond.coupon - cds.premium - env.r - env.rbar_k() * nc;
        c.expect_near(rep.package_value, rep.apv * carry, 1e-4, "package value");
    });

    run("riskfree financing prices the par package to par", [](Check& c) {
        MarketEnv env = flat_env(0.02);
        BondSpec bond{0.02, 5.0, 0.4};
        CdsSpec cds{0.0, 5.0, 0.4};
        CapitalSpec cap;
        cap.fixed_exposure = 0.0;
        std::vector<IntensityModel> models = {
            IntensityModel::square_root(0.02, 0.5, 0.04, 0.1),
            IntensityModel::arithmetic(0.02, 0.002, 0.01)};
        for (const auto& m : models) {
            BasisReport rep = solve_basis_pde(m, env, bond, cds, cap);
            const char* tag = m.kind == ModelKind::arithmetic ? "arithmetic" : "square_root";
            c.expect_near(rep.package_value, 0.0, 1e-4, std::string(tag) + " package value");
        }
    });

    run("carry formula matches hand substitution", [](Check& c) {
        MarketEnv env = flat_env(0.02);
        env.r_p = 0.0215;
        env.r_1 = 0.034;
        env.r_b = 0.034;
        env.r_k = 0.12;
        env.z = 0.0205;
        env.h = 0.1;
        env.epsilon = 0.05;
        double want = (0.9 * 0.0215 + 0.1 * 0.034 - 0.0205) + (0.12 - 0.02) * 0.0375;
        c.expect_near(fair_basis_formula(env, 0.0375), want, 1e-12, "with reserve");
        double want0 = (0.9 * 0.0215 + 0.1 * 0.034) - 0.0205;
        c.expect_near(fair_basis_formula(env, 0.0), want0, 1e-12, "costless reserve");
    });

    run("regulatory capital formulas hit their limits and pin", [](Check& c) {
        c.expect_near(correlation(1e-12, 1.0), 0.24, 1e-9, "low-pd correlation");
        c.expect_near(correlation(1e-12, 1.25), 0.30, 1e-9, "low-pd correlation, avc 1.25");
        c.expect_near(correlation(1.0, 1.0), 0.12, 1e-9, "pd=1 correlation");
        c.expect_near(correlation(1.0, 1.25), 0.15, 1e-9, "pd=1 correlation, avc 1.25");
        c.expect_near(capital_ratio(0.01, 0.45, 2.5, 1.0), 0.073853441, 5e-4, "reference ratio");
    });

    run("discounted wealth of the premium leg is a martingale", [](Check& c) {
        MarketEnv env = flat_env(0.02);
        McConfig mc;
        mc.n_paths = 80000;
        mc.seed = 21;
        std::vector<IntensityModel> models = {
            IntensityModel::constant(0.04),
            IntensityModel::square_root(0.03, 0.5, 0.04, 0.1)};
        for (const auto& m : models) {
            double T = 5.0, R = 0.4;
            CdsSpec cds{par_premium(m, env, R, T), T, R};
            BondSpec bond{0.05, T, R};
            WealthStats stats = simulate_hedged_economy(m, env, bond, cds,
                                                        HedgeMode::cds_only_unhedged, mc);
            const char* tag = m.kind == ModelKind::constant ? "constant" : "square_root";
            c.expect(std::abs(stats.mean) <= 3.0 * stats.std_error,
                     std::string(tag) + " mean " + std::to_string(stats.mean) + " exceeds 3 se " +
                         std::to_string(stats.std_error));
        }
    });

    run("shipped scenarios land in the quoted bands", [](Check& c) {
        ScenarioConfig ig = parse_config_file(std::string(FAIRBASIS_CONFIG_DIR) + "/ig.cfg");
        ScenarioConfig hy = parse_config_file(std::string(FAIRBASIS_CONFIG_DIR) + "/hy.cfg");
        BasisReport rig = solve_basis_pde(ig.model, ig.market, ig.bond, ig.cds, ig.capital,
                                          ig.grid);
        BasisReport rhy = solve_basis_pde(hy.model, hy.market, hy.bond, hy.cds, hy.capital,
                                          hy.grid);
        c.expect(rig.fair_basis_bp >= 40.0 && rig.fair_basis_bp <= 160.0,
                 "ig fair basis " + std::to_string(rig.fair_basis_bp) + " outside [40, 160]");
        c.expect(rhy.fair_basis_bp > rig.fair_basis_bp,
                 "hy fair basis " + std::to_string(rhy.fair_basis_bp) + " not above ig " +
                     std::to_string(rig.fair_basis_bp));

        // The unsecured curve prices both the haircut debt and the residual
        // funding account, so a spread bump moves r_1 and r_b together.
        MarketEnv bumped = ig.market;
        bumped.r_b += 0.01;
        bumped.r_1 += 0.01;
        BasisReport rbump = solve_basis_pde(ig.model, bumped, ig.bond, ig.cds, ig.capital,
                                            ig.grid);
        c.expect(rbump.xva > rig.xva, "xva did not increase under the funding bump");

        auto defunded = [](MarketEnv e) {
            e.r_p = e.r;
            e.r_1 = e.r;
            e.r_b = e.r;
            return e;
        };
        BasisReport cap_base = solve_basis_pde(ig.model, defunded(ig.market), ig.bond, ig.cds,
                                               ig.capital, ig.grid);
        BasisReport cap_bump = solve_basis_pde(ig.model, defunded(bumped), ig.bond, ig.cds,
                                               ig.capital, ig.grid);
        c.expect(std::abs(cap_bump.xva - cap_base.xva) <= 0.05 * std::abs(cap_base.xva),
                 "capital component moved more than 5% under the funding bump");
    });

    run("default-loss profile decreases and orders by coupon", [](Check& c) {
        IntensityModel m = IntensityModel::constant(0.03);
        MarketEnv env = flat_env(0.0);
        GridSpec gs;
        gs.n_lambda = 101;
        gs.n_steps = 300;
        BondSpec rich{0.05, 5.0, 0.0};
        BondSpec cheap{0.02, 5.0, 0.0};
        Profile p5 = jtd_profile(m, env, rich, 0.0, 0.001, 0.25, gs);
        Profile p2 = jtd_profile(m, env, cheap, 0.0, 0.001, 0.25, gs);
        for (std::size_t i = 1; i < p5.value.size(); ++i)
            c.expect(p5.value[i] < p5.value[i - 1], "5% curve not strictly decreasing");
        for (std::size_t i = 0; i < p2.value.size(); ++i)
            c.expect(p2.value[i] < p5.value[i], "2% curve not strictly below the 5% curve");
        double want = rich.coupon * rich.maturity;
        c.expect(std::abs(p5.value.front() - want) <= 0.02 * want,
                 "small-intensity loss " + std::to_string(p5.value.front()) +
                     " not within 2% of coupon * maturity");
    });

    run("regression recovers the generating coefficients", [](Check& c) {
        TimeSeriesTable table = load_basis_csv(std::string(FAIRBASIS_DATA_DIR) +
                                               "/synthetic_basis.csv");
        RegressionResult res = regress_basis(table);
        double truth[] = {0.35, -46.0, -2.66};
        for (std::size_t i = 0; i < 3; ++i)
            c.expect(std::abs(res.coefficients[i] - truth[i]) <= 3.0 * res.std_errors[i],
                     res.terms[i] + " outside 3 se of truth");

        // Dense pseudoinverse cross-check of the solver path, extended
        // precision normal equations inverted by cofactors.
        std::size_t n = table.size();
        long double xtx[3][3] = {}, xty[3] = {};
        for (std::size_t k = 0; k < n; ++k) {
            long double row[3] = {1.0L, table.lois[k], table.vix[k]};
            for (int i = 0; i < 3; ++i) {
                xty[i] += row[i] * static_cast<long double>(table.basis[k]);
                for (int j = 0; j < 3; ++j) xtx[i][j] += row[i] * row[j];
            }
        }
        long double det = 0.0L;
        for (int i = 0; i < 3; ++i)
            det += xtx[0][i] * (xtx[1][(i + 1) % 3] * xtx[2][(i + 2) % 3] -
                                xtx[1][(i + 2) % 3] * xtx[2][(i + 1) % 3]);
        for (int i = 0; i < 3; ++i) {
            long double beta = 0.0L;
            for (int j = 0; j < 3; ++j) {
                long double cof = xtx[(j + 1) % 3][(i + 1) % 3] * xtx[(j + 2) % 3][(i + 2) % 3] -
                                  xtx[(j + 1) % 3][(i + 2) % 3] * xtx[(j + 2) % 3][(i + 1) % 3];
                beta += cof * xty[j];
            }
            beta /= det;
            c.expect_near(res.coefficients[i], static_cast<double>(beta), 1e-8,
                          res.terms[i] + " vs pseudoinverse");
        }
    });

    run("funding balance relief never raises the implied adjustment", [](Check& c) {
        ScenarioConfig ig = parse_config_file(std::string(FAIRBASIS_CONFIG_DIR) + "/ig.cfg");
        BasisReport rep = solve_basis_pde(ig.model, ig.market, ig.bond, ig.cds, ig.capital,
                                          ig.grid);
        const std::vector<double>& v = rep.mbar_slice.value;
        for (std::size_t j = 1; j < v.size(); ++j)
            c.expect(v[j] >= v[j - 1] - 1e-10, "adjusted value not monotone at node " +
                                                   std::to_string(j));
    });

    if (g_failed == 0) {
        std::printf("all %d acceptance checks passed\n", g_index);
        return 0;
    }
    std::printf("%d of %d acceptance checks failed\n", g_failed, g_index);
    return 1;
}
