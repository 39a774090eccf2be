#include "fairbasis/cn.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fb {

namespace {

// y = L u for the row layout described in the header.
void apply_operator(const GeneratorCoefficients& cf, const std::vector<double>& u,
                    std::vector<double>& y) {
    std::size_t n = cf.size();
    double dlam = cf.dlam;
    y.resize(n);
    y[0] = cf.a[0] * (u[1] - u[0]) / dlam - cf.c[0] * u[0];
    double inv2 = 1.0 / (2.0 * dlam), invsq = 1.0 / (dlam * dlam);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        y[i] = cf.a[i] * (u[i + 1] - u[i - 1]) * inv2
               + cf.half_b2[i] * (u[i + 1] - 2.0 * u[i] + u[i - 1]) * invsq
               - cf.c[i] * u[i];
    }
    y[n - 1] = cf.a[n - 1] * (u[n - 1] - u[n - 2]) / dlam - cf.c[n - 1] * u[n - 1];
}

void build_lhs(const GeneratorCoefficients& cf, double theta_dt, Tridiagonal& m) {
    std::size_t n = cf.size();
    double dlam = cf.dlam;
    m.diag[0] = 1.0 - theta_dt * (-cf.a[0] / dlam - cf.c[0]);
    m.upper[0] = -theta_dt * (cf.a[0] / dlam);
    double inv2 = 1.0 / (2.0 * dlam), invsq = 1.0 / (dlam * dlam);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        double lo = -cf.a[i] * inv2 + cf.half_b2[i] * invsq;
        double hi = cf.a[i] * inv2 + cf.half_b2[i] * invsq;
        double mid = -2.0 * cf.half_b2[i] * invsq - cf.c[i];
        m.lower[i] = -theta_dt * lo;
        m.diag[i] = 1.0 - theta_dt * mid;
        m.upper[i] = -theta_dt * hi;
    }
    m.lower[n - 1] = -theta_dt * (-cf.a[n - 1] / dlam);
    m.diag[n - 1] = 1.0 - theta_dt * (cf.a[n - 1] / dlam - cf.c[n - 1]);
}

}  // namespace

void cn_step(const GeneratorCoefficients& c_to, const GeneratorCoefficients& c_from,
             double dt, double theta, std::vector<double>& u, CnWorkspace& ws) {
    std::size_t n = c_to.size();
    if (u.size() != n) throw std::invalid_argument("cn_step: size mismatch");
    if (theta < 1.0) {
        apply_operator(c_from, u, ws.rhs);
        double w = (1.0 - theta) * dt;
        for (std::size_t i = 0; i < n; ++i)
            ws.rhs[i] = u[i] + w * ws.rhs[i]
                        + dt * (theta * c_to.f[i] + (1.0 - theta) * c_from.f[i]);
    } else {
        for (std::size_t i = 0; i < n; ++i) ws.rhs[i] = u[i] + dt * c_to.f[i];
    }
    build_lhs(c_to, theta * dt, ws.lhs);
    ws.lhs.solve(ws.rhs, ws.scratch);
    u = ws.rhs;
}

Surface::Surface(std::vector<double> times, std::vector<double> nodes)
    : times_(std::move(times)), nodes_(std::move(nodes)) {
    data_.assign(times_.size() * nodes_.size(), 0.0);
}

std::size_t Surface::time_bracket(double t, double& w) const {
    if (t <= times_.front()) {
        w = 0.0;
        return 0;
    }
    if (t >= times_.back()) {
        w = 1.0;
        return times_.size() - 2;
    }
    auto it = std::upper_bound(times_.begin(), times_.end(), t);
    std::size_t k = static_cast<std::size_t>(it - times_.begin()) - 1;
    w = (t - times_[k]) / (times_[k + 1] - times_[k]);
    return k;
}

double Surface::interp_row(std::size_t k, double lam) const {
    const double* r = row(k);
    std::size_t n = nodes_.size();
    if (lam <= nodes_.front()) return r[0];
    if (lam >= nodes_.back()) return r[n - 1];
    auto it = std::upper_bound(nodes_.begin(), nodes_.end(), lam);
    std::size_t i = static_cast<std::size_t>(it - nodes_.begin()) - 1;
    double w = (lam - nodes_[i]) / (nodes_[i + 1] - nodes_[i]);
    return (1.0 - w) * r[i] + w * r[i + 1];
}

double Surface::deriv_row(std::size_t k, double lam) const {
    const double* r = row(k);
    std::size_t n = nodes_.size();
    auto node_deriv = [&](std::size_t i) {
        if (i == 0) return (r[1] - r[0]) / (nodes_[1] - nodes_[0]);
        if (i == n - 1) return (r[n - 1] - r[n - 2]) / (nodes_[n - 1] - nodes_[n - 2]);
        return (r[i + 1] - r[i - 1]) / (nodes_[i + 1] - nodes_[i - 1]);
    };
    if (lam <= nodes_.front()) return node_deriv(0);
    if (lam >= nodes_.back()) return node_deriv(n - 1);
    auto it = std::upper_bound(nodes_.begin(), nodes_.end(), lam);
    std::size_t i = static_cast<std::size_t>(it - nodes_.begin()) - 1;
    double w = (lam - nodes_[i]) / (nodes_[i + 1] - nodes_[i]);
    return (1.0 - w) * node_deriv(i) + w * node_deriv(i + 1);
}

double Surface::value(double t, double lam) const {
    if (times_.size() == 1) return interp_row(0, lam);
    double w = 0.0;
    std::size_t k = time_bracket(t, w);
    return (1.0 - w) * interp_row(k, lam) + w * interp_row(k + 1, lam);
}

double Surface::dlam(double t, double lam) const {
    if (times_.size() == 1) return deriv_row(0, lam);
    double w = 0.0;
    std::size_t k = time_bracket(t, w);
    return (1.0 - w) * deriv_row(k, lam) + w * deriv_row(k + 1, lam);
}

MarchResult march_backward(const LambdaGrid& grid, const TimeGrid& tgrid,
                           std::vector<double> terminal, const CoefficientFn& coeffs,
                           bool store_surface, bool rannacher) {
    std::size_t n = grid.size();
    if (terminal.size() != n) throw std::invalid_argument("march_backward: terminal size mismatch");
    if (tgrid.n_steps == 0) throw std::invalid_argument("march_backward: empty time grid");

    MarchResult out;
    if (store_surface) {
        std::vector<double> times(tgrid.n_steps + 1);
        for (std::size_t k = 0; k <= tgrid.n_steps; ++k) times[k] = tgrid.time(k);
        out.surface = Surface(std::move(times), grid.nodes);
        std::copy(terminal.begin(), terminal.end(), out.surface.row(tgrid.n_steps));
    }

    CnWorkspace ws(n);
    GeneratorCoefficients c_from(n, grid.dlam), c_to(n, grid.dlam);
    double dt = tgrid.dt();
    std::vector<double> u = std::move(terminal);

    coeffs(tgrid.time(tgrid.n_steps), c_from);
    for (std::size_t k = tgrid.n_steps; k >= 1; --k) {
        double t_to = tgrid.time(k - 1);
        if (rannacher && k == tgrid.n_steps) {
            coeffs(tgrid.time(k) - 0.5 * dt, c_to);
            cn_step(c_to, c_to, 0.5 * dt, 1.0, u, ws);
            coeffs(t_to, c_to);
            cn_step(c_to, c_to, 0.5 * dt, 1.0, u, ws);
        } else {
            coeffs(t_to, c_to);
            cn_step(c_to, c_from, dt, 0.5, u, ws);
        }
        std::swap(c_from, c_to);
        if (store_surface) std::copy(u.begin(), u.end(), out.surface.row(k - 1));
    }
    out.initial = std::move(u);
    return out;
}

}  // namespace fb
