#include "paulloc/model.hpp"

#include <algorithm>
#include <cmath>

namespace paulloc {

Reduction reduce_to_dimensionless(const PhysicalSetup& s) {
    const double mass_kg = s.mass_unit == MassUnit::amu ? s.mass * AMU_KG : s.mass;
    if (!(mass_kg > 0.0))
        throw ConfigError("reduce_to_dimensionless: ion mass must be positive");
    if (!(s.wavenumber > 0.0))
        throw ConfigError("reduce_to_dimensionless: laser wavenumber must be positive");
    if (!(s.rf_omega > 0.0))
        throw ConfigError("reduce_to_dimensionless: rf frequency must be positive");
    if (s.detuning == 0.0)
        throw ConfigError("reduce_to_dimensionless: detuning must be nonzero (resonant drive)");

    Reduction r;
    const double k2 = s.wavenumber * s.wavenumber;
    r.cfg.kbar = 8.0 * k2 * HBAR / (mass_kg * s.rf_omega);
    r.epsilon = s.rabi / s.detuning;
    r.cfg.coupling = r.cfg.kbar * s.detuning / (4.0 * s.rf_omega) * r.epsilon * r.epsilon;
    r.cfg.a = s.a;
    r.cfg.q = s.q;
    r.cfg.phase = s.phase;
    r.far_detuning_warning = std::abs(r.epsilon) > EPSILON_WARN;
    return r;
}

double potential(const TrapConfig& cfg, double x, double t) {
    return 0.5 * (cfg.a + 2.0 * cfg.q * std::cos(2.0 * t)) * x * x
        + cfg.coupling * std::cos(x + 2.0 * cfg.phase);
}

double force(const TrapConfig& cfg, double x, double t) {
    return -(cfg.a + 2.0 * cfg.q * std::cos(2.0 * t)) * x
        + cfg.coupling * std::sin(x + 2.0 * cfg.phase);
}

namespace {

// state y = (x1, v1, x2, v2): two solutions of the linear Mathieu system
struct MathieuState {
    double y[4];
};

MathieuState deriv(double a, double q, double t, const MathieuState& s) {
    const double w = -(a + 2.0 * q * std::cos(2.0 * t));
    return {{s.y[1], w * s.y[0], s.y[3], w * s.y[2]}};
}

} // namespace

MathieuResult mathieu_exponent(double a, double q) {
    constexpr int steps = 2048;
    const double dt = PI / steps;
    MathieuState s{{1.0, 0.0, 0.0, 1.0}};
    for (int n = 0; n < steps; ++n) {
        const double t = n * dt;
        const MathieuState k1 = deriv(a, q, t, s);
        MathieuState tmp;
        for (int i = 0; i < 4; ++i) tmp.y[i] = s.y[i] + 0.5 * dt * k1.y[i];
        const MathieuState k2 = deriv(a, q, t + 0.5 * dt, tmp);
        for (int i = 0; i < 4; ++i) tmp.y[i] = s.y[i] + 0.5 * dt * k2.y[i];
        const MathieuState k3 = deriv(a, q, t + 0.5 * dt, tmp);
        for (int i = 0; i < 4; ++i) tmp.y[i] = s.y[i] + dt * k3.y[i];
        const MathieuState k4 = deriv(a, q, t + dt, tmp);
        for (int i = 0; i < 4; ++i)
            s.y[i] += dt / 6.0 * (k1.y[i] + 2.0 * k2.y[i] + 2.0 * k3.y[i] + k4.y[i]);
    }

    MathieuResult res;
    // columns are the propagated canonical solutions
    res.monodromy = {s.y[0], s.y[2], s.y[1], s.y[3]};
    const double tr = s.y[0] + s.y[3];
    res.marginal = std::abs(std::abs(tr) - 2.0) < 1e-9;
    res.stable = std::abs(tr) <= 2.0 || res.marginal;
    if (res.stable) {
        res.exponent = std::acos(std::clamp(tr / 2.0, -1.0, 1.0)) / PI;
    } else {
        const double h = std::abs(tr) / 2.0;
        res.growth = std::log(h + std::sqrt(h * h - 1.0));
    }
    return res;
}

} // namespace paulloc
