#include "fairbasis/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fb {

std::size_t GridSpec::steps_for(double T) const {
    if (n_steps > 0) return n_steps;
    return static_cast<std::size_t>(std::max(200.0, std::ceil(100.0 * T)));
}

namespace {

void path_range(const IntensityModel& m, double T, double& lo, double& hi) {
    switch (m.kind) {
        case ModelKind::constant:
            lo = hi = m.lambda0;
            return;
        case ModelKind::curve: {
            lo = hi = m.curve_values.front();
            for (std::size_t i = 0; i < m.curve_times.size(); ++i) {
                if (m.curve_times[i] >= T && i > 0) break;
                lo = std::min(lo, m.curve_values[i]);
                hi = std::max(hi, m.curve_values[i]);
            }
            return;
        }
        case ModelKind::arithmetic:
        case ModelKind::square_root: {
            // both mean paths are monotone, endpoints bound the range
            double end = m.level(T);
            lo = std::min(m.lambda0, end);
            hi = std::max(m.lambda0, end);
            return;
        }
    }
    lo = hi = m.lambda0;
}

double dispersion_scale(const IntensityModel& m, double T) {
    switch (m.kind) {
        case ModelKind::constant:
        case ModelKind::curve:
            return 0.0;
        case ModelKind::arithmetic:
            return m.b * std::sqrt(T);
        case ModelKind::square_root:
            if (m.kappa > 0.0) return m.sigma * std::sqrt(m.theta / (2.0 * m.kappa));
            return m.sigma * std::sqrt(m.lambda0 * T);
    }
    return 0.0;
}

}  // namespace

LambdaGrid build_lambda_grid(const IntensityModel& m, double T, const GridSpec& spec) {
    if (spec.n_lambda < 3) throw std::invalid_argument("grid.n_lambda must be at least 3");
    if (T <= 0.0) throw std::invalid_argument("grid maturity must be positive");

    double range_lo = 0.0, range_hi = 0.0;
    path_range(m, T, range_lo, range_hi);
    double s = dispersion_scale(m, T);
    double lo = range_lo - spec.width_sigmas * s;
    double hi = range_hi + spec.width_sigmas * s;
    if (m.kind != ModelKind::arithmetic) lo = std::max(lo, 0.0);
    if (hi - lo < 1e-4) {
        double pad = 0.5 * (1e-4 - (hi - lo));
        lo -= pad;
        hi += pad;
        if (m.kind != ModelKind::arithmetic && lo < 0.0) {
            hi -= lo;
            lo = 0.0;
        }
    }

    std::size_t n = spec.n_lambda;
    LambdaGrid g;
    g.nodes.resize(n);
    double lam0 = m.lambda0;
    if (lam0 <= lo) {
        // boundary start (lambda0 = 0 and friends): keep a plain uniform grid
        lo = lam0;
        g.dlam = (hi - lo) / static_cast<double>(n - 1);
        g.i0 = 0;
    } else {
        // choose the spacing so that lambda0 lands exactly on node k
        double dlam = (hi - lo) / static_cast<double>(n - 1);
        double kf = std::round((lam0 - lo) / dlam);
        std::size_t k = static_cast<std::size_t>(
            std::clamp(kf, 1.0, static_cast<double>(n - 2)));
        g.dlam = (lam0 - lo) / static_cast<double>(k);
        g.i0 = k;
    }
    for (std::size_t i = 0; i < n; ++i)
        g.nodes[i] = lo + g.dlam * static_cast<double>(i);
    g.nodes[g.i0] = lam0;  // exact, independent of accumulation error
    return g;
}

TimeGrid build_time_grid(double T, const GridSpec& spec) {
    if (T <= 0.0) throw std::invalid_argument("grid maturity must be positive");
    TimeGrid t;
    t.maturity = T;
    t.n_steps = spec.steps_for(T);
    return t;
}

}  // namespace fb
