#pragma once

#include <vector>

namespace fb {

enum class ModelKind { constant, curve, arithmetic, square_root };

// Default-intensity process dlambda = a dt + b dW realized as four families:
// a flat level, a piecewise-constant deterministic curve, an arithmetic
// diffusion (a, b constant; the state may go negative, hazard evaluation
// clamps at zero) and a square-root diffusion a = kappa(theta - lambda),
// b = sigma*sqrt(lambda).
struct IntensityModel {
    ModelKind kind = ModelKind::constant;
    double lambda0 = 0.0;
    double a = 0.0;      // arithmetic drift
    double b = 0.0;      // arithmetic vol
    double kappa = 0.0;  // square-root mean reversion
    double theta = 0.0;  // square-root long-run level
    double sigma = 0.0;  // square-root vol
    std::vector<double> curve_times;   // breakpoints, first = 0
    std::vector<double> curve_values;  // level on [t_i, t_{i+1})

    static IntensityModel constant(double lam);
    static IntensityModel curve(std::vector<double> times, std::vector<double> values);
    static IntensityModel arithmetic(double lam0, double a, double b);
    static IntensityModel square_root(double lam0, double kappa, double theta, double sigma);

    bool deterministic() const {
        return kind == ModelKind::constant || kind == ModelKind::curve;
    }
    // 2*kappa*theta >= sigma^2; reported, not enforced.
    bool feller_satisfied() const;

    // Deterministic level lambda(t): the curve value, the flat level, or the
    // zero-vol mean path for the diffusive kinds.
    double level(double t) const;
    // Exact integral of the deterministic level over [t, T].
    double integrated_level(double t, double T) const;

    void validate() const;
};

double drift(const IntensityModel& m, double t, double lam);
double vol(const IntensityModel& m, double t, double lam);

// E[exp(-int_t^T lambda)] where closed forms exist (constant, curve,
// square-root affine transform). Throws for the arithmetic family.
double survival_closed_form(const IntensityModel& m, double t, double T);

// Same closed form re-rooted at lambda(t) = lam over horizon tau; the
// square-root family uses the affine A/B transform, the deterministic kinds
// integrate from the given level. Used for node-local default probabilities.
double survival_from_level(const IntensityModel& m, double t, double lam, double tau);

}  // namespace fb
