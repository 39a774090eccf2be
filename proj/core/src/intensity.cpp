#include "fairbasis/intensity.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fb {

IntensityModel IntensityModel::constant(double lam) {
    IntensityModel m;
    m.kind = ModelKind::constant;
    m.lambda0 = lam;
    return m;
}

IntensityModel IntensityModel::curve(std::vector<double> times, std::vector<double> values) {
    IntensityModel m;
    m.kind = ModelKind::curve;
    m.curve_times = std::move(times);
    m.curve_values = std::move(values);
    m.lambda0 = m.curve_values.empty() ? 0.0 : m.curve_values.front();
    return m;
}

IntensityModel IntensityModel::arithmetic(double lam0, double a, double b) {
    IntensityModel m;
    m.kind = ModelKind::arithmetic;
    m.lambda0 = lam0;
    m.a = a;
    m.b = b;
    return m;
}

IntensityModel IntensityModel::square_root(double lam0, double kappa, double theta, double sigma) {
    IntensityModel m;
    m.kind = ModelKind::square_root;
    m.lambda0 = lam0;
    m.kappa = kappa;
    m.theta = theta;
    m.sigma = sigma;
    return m;
}

bool IntensityModel::feller_satisfied() const {
    if (kind != ModelKind::square_root) return true;
    return 2.0 * kappa * theta >= sigma * sigma;
}

double IntensityModel::level(double t) const {
    switch (kind) {
        case ModelKind::constant:
            return lambda0;
        case ModelKind::curve: {
            // last interval extends to infinity
            auto it = std::upper_bound(curve_times.begin(), curve_times.end(), t);
            std::size_t i = it == curve_times.begin() ? 0 : (it - curve_times.begin() - 1);
            return curve_values[i];
        }
        case ModelKind::arithmetic:
            return lambda0 + a * t;
        case ModelKind::square_root:
            if (kappa == 0.0) return lambda0;
            return theta + (lambda0 - theta) * std::exp(-kappa * t);
    }
    return lambda0;
}

double IntensityModel::integrated_level(double t, double T) const {
    if (T < t) throw std::invalid_argument("integrated_level: T < t");
    double tau = T - t;
    switch (kind) {
        case ModelKind::constant:
            return lambda0 * tau;
        case ModelKind::curve: {
            double acc = 0.0;
            for (std::size_t i = 0; i < curve_times.size(); ++i) {
                double seg_lo = curve_times[i];
                double seg_hi = i + 1 < curve_times.size() ? curve_times[i + 1]
                                                          : std::max(T, seg_lo);
                double lo = std::max(t, seg_lo);
                double hi = std::min(T, seg_hi);
                if (hi > lo) acc += curve_values[i] * (hi - lo);
            }
            return acc;
        }
        case ModelKind::arithmetic:
            return lambda0 * tau + 0.5 * a * (T * T - t * t);
        case ModelKind::square_root: {
            if (kappa == 0.0) return lambda0 * tau;
            // integral of theta + (lambda0-theta) e^{-kappa s}
            double e_t = -std::expm1(-kappa * t);
            double e_T = -std::expm1(-kappa * T);
            return theta * tau + (lambda0 - theta) * (e_T - e_t) / kappa;
        }
    }
    return 0.0;
}

void IntensityModel::validate() const {
    auto fin = [](double x) { return std::isfinite(x); };
    if (!fin(lambda0)) throw std::invalid_argument("model.lambda0 must be finite");
    switch (kind) {
        case ModelKind::constant:
            if (lambda0 < 0.0) throw std::invalid_argument("model.lambda0 must be nonnegative");
            break;
        case ModelKind::curve: {
            if (curve_times.empty() || curve_times.size() != curve_values.size())
                throw std::invalid_argument("model.curve times and values must be nonempty and of equal length");
            if (curve_times.front() != 0.0)
                throw std::invalid_argument("model.curve times must start at 0");
            for (std::size_t i = 0; i < curve_times.size(); ++i) {
                if (!fin(curve_times[i]) || !fin(curve_values[i]))
                    throw std::invalid_argument("model.curve entries must be finite");
                if (curve_values[i] < 0.0)
                    throw std::invalid_argument("model.curve values must be nonnegative");
                if (i > 0 && curve_times[i] <= curve_times[i - 1])
                    throw std::invalid_argument("model.curve times must be strictly increasing");
            }
            break;
        }
        case ModelKind::arithmetic:
            if (!fin(a) || !fin(b)) throw std::invalid_argument("model.a and model.b must be finite");
            if (b < 0.0) throw std::invalid_argument("model.b must be nonnegative");
            break;
        case ModelKind::square_root:
            if (!fin(kappa) || !fin(theta) || !fin(sigma))
                throw std::invalid_argument("model.kappa, model.theta, model.sigma must be finite");
            if (lambda0 < 0.0) throw std::invalid_argument("model.lambda0 must be nonnegative");
            if (kappa < 0.0) throw std::invalid_argument("model.kappa must be nonnegative");
            if (theta < 0.0) throw std::invalid_argument("model.theta must be nonnegative");
            if (sigma < 0.0) throw std::invalid_argument("model.sigma must be nonnegative");
            break;
    }
}

double drift(const IntensityModel& m, double t, double lam) {
    switch (m.kind) {
        case ModelKind::constant:
            return 0.0;
        case ModelKind::curve: {
            (void)t;
            return 0.0;  // jumps at breakpoints are handled by level(), not by the SDE drift
        }
        case ModelKind::arithmetic:
            return m.a;
        case ModelKind::square_root:
            return m.kappa * (m.theta - lam);
    }
    return 0.0;
}

double vol(const IntensityModel& m, double t, double lam) {
    (void)t;
    switch (m.kind) {
        case ModelKind::constant:
        case ModelKind::curve:
            return 0.0;
        case ModelKind::arithmetic:
            return m.b;
        case ModelKind::square_root:
            if (lam < 0.0) throw std::domain_error("vol: negative state under square_root model");
            return m.sigma * std::sqrt(lam);
    }
    return 0.0;
}

namespace {

// Integral of max(lam + a s, 0) over [0, tau]: the positive part of a line.
double clamped_line_integral(double lam, double a, double tau) {
    if (a == 0.0) return std::max(lam, 0.0) * tau;
    double root = -lam / a;
    if (a > 0.0) {
        if (root <= 0.0) return tau * (lam + 0.5 * a * tau);
        if (root >= tau) return 0.0;
        double end = lam + a * tau;
        return 0.5 * end * end / a;
    }
    if (lam <= 0.0) return 0.0;
    if (root >= tau) return tau * (lam + 0.5 * a * tau);
    return 0.5 * lam * lam / (-a);
}

// Affine transform for the square-root family, survival = A(tau) exp(-B(tau) lam).
// Written with expm1/log1p so the sigma -> 0 limit collapses to the
// deterministic integral without cancellation.
double srd_log_survival(double lam, double kappa, double theta, double sigma, double tau) {
    double gamma = std::sqrt(kappa * kappa + 2.0 * sigma * sigma);
    if (gamma == 0.0) return 0.0;  // kappa = sigma = 0: frozen state handled by caller
    double g = 2.0 * sigma * sigma / (gamma + kappa);  // gamma - kappa, stable
    double egt = std::exp(gamma * tau);
    double B = 2.0 * std::expm1(gamma * tau) / ((gamma + kappa) * egt + g);
    double lnA = 0.0;
    if (sigma > 0.0) {
        double w = (g / (2.0 * gamma)) * std::expm1(-gamma * tau);
        lnA = -2.0 * kappa * theta * tau / (gamma + kappa)
              - (2.0 * kappa * theta / (sigma * sigma)) * std::log1p(w);
    } else {
        // deterministic mean reversion: lnA = -theta (tau - B)  with B = (1-e^{-kappa tau})/kappa
        lnA = -theta * (tau - B);
    }
    return lnA - B * lam;
}

}  // namespace

double survival_from_level(const IntensityModel& m, double t, double lam, double tau) {
    (void)t;
    if (tau < 0.0) throw std::invalid_argument("survival_from_level: negative horizon");
    if (tau == 0.0) return 1.0;
    switch (m.kind) {
        case ModelKind::constant:
        case ModelKind::curve:
            return std::exp(-std::max(lam, 0.0) * tau);
        case ModelKind::arithmetic:
            // zero-vol mean path with the hazard clamp; good enough for the
            // node-local default probabilities this overload serves
            return std::exp(-clamped_line_integral(lam, m.a, tau));
        case ModelKind::square_root: {
            if (m.kappa == 0.0 && m.sigma == 0.0) return std::exp(-lam * tau);
            return std::exp(srd_log_survival(lam, m.kappa, m.theta, m.sigma, tau));
        }
    }
    return 1.0;
}

double survival_closed_form(const IntensityModel& m, double t, double T) {
    if (T < t) throw std::invalid_argument("survival_closed_form: T < t");
    if (m.kind == ModelKind::arithmetic)
        throw std::invalid_argument("survival closed form is not available for the arithmetic model");
    if (m.kind == ModelKind::curve) return std::exp(-m.integrated_level(t, T));
    return survival_from_level(m, t, m.level(t), T - t);
}

}  // namespace fb
