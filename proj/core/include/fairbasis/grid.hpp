#pragma once

#include <cstddef>
#include <vector>

#include "fairbasis/intensity.hpp"

namespace fb {

struct GridSpec {
    std::size_t n_lambda = 201;
    double width_sigmas = 6.0;
    std::size_t n_steps = 0;  // 0: derive from maturity

    std::size_t steps_for(double T) const;
};

// Uniform state grid with lambda0 placed exactly on a node.
struct LambdaGrid {
    std::vector<double> nodes;
    double dlam = 0.0;
    std::size_t i0 = 0;  // nodes[i0] == lambda0

    std::size_t size() const { return nodes.size(); }
};

struct TimeGrid {
    double maturity = 0.0;
    std::size_t n_steps = 0;

    double dt() const { return maturity / static_cast<double>(n_steps); }
    double time(std::size_t k) const { return maturity * static_cast<double>(k) / static_cast<double>(n_steps); }
};

// Spans the deterministic path range over [0, T] plus width_sigmas times a
// dispersion scale, floored at 0 for the nonnegative families and at a total
// width of 1e-4.
LambdaGrid build_lambda_grid(const IntensityModel& m, double T, const GridSpec& spec);

TimeGrid build_time_grid(double T, const GridSpec& spec);

}  // namespace fb
