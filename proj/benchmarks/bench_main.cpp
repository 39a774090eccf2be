#include <benchmark/benchmark.h>

#include <vector>

#include "fairbasis/basis.hpp"
#include "fairbasis/capital.hpp"
#include "fairbasis/cn.hpp"
#include "fairbasis/grid.hpp"
#include "fairbasis/mc.hpp"
#include "fairbasis/rn_pricing.hpp"
#include "fairbasis/tridiagonal.hpp"

namespace {

fb::IntensityModel srd() { return fb::IntensityModel::square_root(0.02, 0.5, 0.04, 0.1); }

fb::MarketEnv flat_env() {
    fb::MarketEnv env;
    env.r = env.r_L = env.r_p = env.r_1 = env.r_b = env.z = 0.02;
    env.r_k = 0.12;
    env.h = 0.0;
    env.epsilon = 0.0;
    return env;
}

void bm_tridiagonal_solve(benchmark::State& state) {
    std::size_t n = 201;
    fb::Tridiagonal t(n);
    std::vector<double> rhs(n, 1.0), scratch(n);
    for (std::size_t i = 0; i < n; ++i) {
        t.diag[i] = 4.0;
        t.lower[i] = -1.0;
        t.upper[i] = -1.0;
    }
    for (auto _ : state) {
        std::vector<double> x = rhs;
        t.solve(x, scratch);
        benchmark::DoNotOptimize(x.data());
    }
}
BENCHMARK(bm_tridiagonal_solve);

void bm_cn_step(benchmark::State& state) {
    fb::IntensityModel m = srd();
    fb::GridSpec gs;
    fb::LambdaGrid grid = fb::build_lambda_grid(m, 5.0, gs);
    std::size_t n = grid.size();
    fb::GeneratorCoefficients c(n, grid.dlam);
    for (std::size_t i = 0; i < n; ++i) {
        double lam = grid.nodes[i];
        double v = fb::vol(m, 0.0, lam);
        c.a[i] = fb::drift(m, 0.0, lam);
        c.half_b2[i] = 0.5 * v * v;
        c.c[i] = 0.02 + std::max(lam, 0.0);
        c.f[i] = 0.0;
    }
    fb::CnWorkspace ws(n);
    std::vector<double> u(n, 1.0);
    for (auto _ : state) {
        fb::cn_step(c, c, 0.01, 0.5, u, ws);
        benchmark::DoNotOptimize(u.data());
    }
}
BENCHMARK(bm_cn_step);

void bm_survival_fd(benchmark::State& state) {
    fb::IntensityModel m = srd();
    for (auto _ : state) {
        fb::PricingResult pr = fb::survival_fd(m, 0.0, 5.0);
        benchmark::DoNotOptimize(pr.value);
    }
}
BENCHMARK(bm_survival_fd)->Unit(benchmark::kMillisecond);

void bm_capital_ratio(benchmark::State& state) {
    double pd = 1e-4;
    for (auto _ : state) {
        double k = fb::capital_ratio(pd, 0.45, 2.5, 1.0);
        benchmark::DoNotOptimize(k);
        pd = pd < 0.5 ? pd * 1.0001 : 1e-4;
    }
}
BENCHMARK(bm_capital_ratio);

void bm_mc_paths(benchmark::State& state) {
    fb::IntensityModel m = srd();
    fb::McConfig cfg;
    cfg.n_paths = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) {
        std::vector<double> taus = fb::simulate_paths(m, 5.0, cfg);
        benchmark::DoNotOptimize(taus.data());
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(bm_mc_paths)->Arg(1000)->Unit(benchmark::kMillisecond);

void bm_basis_solve(benchmark::State& state) {
    fb::IntensityModel m = srd();
    fb::MarketEnv env = flat_env();
    env.r_p = 0.0215;
    env.h = 0.1;
    env.r_1 = 0.034;
    fb::BondSpec bond{0.032, 5.0, 0.4};
    fb::CdsSpec cds{0.009, 5.0, 0.4};
    fb::CapitalSpec cap;
    cap.mode = fb::CapitalMode::fixed_exposure;
    cap.fixed_exposure = 0.25;
    fb::GridSpec gs;
    gs.n_lambda = 61;
    gs.n_steps = 200;
    for (auto _ : state) {
        fb::BasisReport rep = fb::solve_basis_pde(m, env, bond, cds, cap, gs);
        benchmark::DoNotOptimize(rep.fair_basis_bp);
    }
}
BENCHMARK(bm_basis_solve)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
