#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "fairbasis/grid.hpp"
#include "fairbasis/tridiagonal.hpp"

namespace fb {

// Spatial operator L = a d/dlam + (1/2) b^2 d2/dlam2 - c applied on a uniform
// grid, plus a source f, so a backward equation u_t + L u + f = 0 is marched
// as u <- (I - theta dt L)^{-1} [(I + (1-theta) dt L) u + dt f_theta].
struct GeneratorCoefficients {
    std::vector<double> a, half_b2, c, f;
    double dlam = 0.0;

    GeneratorCoefficients() = default;
    GeneratorCoefficients(std::size_t n, double dlam_)
        : a(n), half_b2(n), c(n), f(n), dlam(dlam_) {}
    std::size_t size() const { return c.size(); }
};

using CoefficientFn = std::function<void(double t, GeneratorCoefficients&)>;

struct CnWorkspace {
    Tridiagonal lhs;
    std::vector<double> rhs, scratch;

    explicit CnWorkspace(std::size_t n) : lhs(n), rhs(n), scratch(n) {}
};

// One theta-weighted step of size dt toward time zero. c_to holds the
// coefficients at the target level, c_from at the current one; with theta = 1
// only c_to is read. Boundary rows close with one-sided first differences and
// zero second derivative. u is overwritten with the target-level values.
void cn_step(const GeneratorCoefficients& c_to, const GeneratorCoefficients& c_from,
             double dt, double theta, std::vector<double>& u, CnWorkspace& ws);

// Time-indexed stack of grid functions with bilinear interpolation; queries
// outside the stored box clamp to the nearest face.
class Surface {
  public:
    Surface() = default;
    Surface(std::vector<double> times, std::vector<double> nodes);

    bool empty() const { return times_.empty(); }
    std::size_t n_times() const { return times_.size(); }
    std::size_t n_nodes() const { return nodes_.size(); }
    const std::vector<double>& times() const { return times_; }
    const std::vector<double>& nodes() const { return nodes_; }

    double* row(std::size_t k) { return data_.data() + k * nodes_.size(); }
    const double* row(std::size_t k) const { return data_.data() + k * nodes_.size(); }

    double value(double t, double lam) const;
    // d/dlam via node-centered differences, interpolated like value().
    double dlam(double t, double lam) const;

  private:
    double interp_row(std::size_t k, double lam) const;
    double deriv_row(std::size_t k, double lam) const;
    std::size_t time_bracket(double t, double& w) const;

    std::vector<double> times_, nodes_, data_;
};

struct MarchResult {
    std::vector<double> initial;  // values on the lambda grid at t = 0
    Surface surface;             // populated when store_surface was requested
};

// Marches the terminal condition back to t = 0. The first step is split into
// two implicit half steps (Rannacher) to damp terminal-condition kinks, the
// rest are Crank-Nicolson.
MarchResult march_backward(const LambdaGrid& grid, const TimeGrid& tgrid,
                           std::vector<double> terminal, const CoefficientFn& coeffs,
                           bool store_surface = false, bool rannacher = true);

}  // namespace fb
