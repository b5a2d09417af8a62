#pragma once

#include <array>
#include <cmath>

#include "paulloc/common.hpp"

namespace paulloc {

// Dimensionless trap + standing-wave parameters.  The scaled Hamiltonian is
//   H = p^2/2 + (a + 2 q cos 2t) x^2 / 2 + coupling * cos(x + 2 phase)
// with drive period pi and effective Planck constant kbar entering the
// Schrodinger equation as  i kbar dpsi/dt = H psi.
struct TrapConfig {
    double a = 0.0;        // dc voltage parameter
    double q = 0.4;        // ac voltage parameter
    double coupling = 0.65; // standing-wave depth
    double phase = 0.0;    // standing-wave offset (radians)
    double kbar = 0.29;    // effective Planck constant

    bool operator==(const TrapConfig&) const = default;
};

enum class MassUnit { kg, amu };

// Laboratory-frame description of one ion in an rf trap illuminated by a
// far-detuned standing wave.  All frequencies are angular (rad/s).
struct PhysicalSetup {
    double mass = 0.0;
    MassUnit mass_unit = MassUnit::kg;
    double wavenumber = 0.0;   // laser wavenumber, 1/m
    double rf_omega = 0.0;     // trap drive frequency
    double a = 0.0;
    double q = 0.0;
    double rabi = 0.0;         // resonant Rabi frequency
    double detuning = 0.0;     // laser frequency minus atomic frequency; nonzero
    double phase = 0.0;
};

inline constexpr double HBAR = 1.054571817e-34;    // J s
inline constexpr double AMU_KG = 1.66053906660e-27; // kg

struct Reduction {
    TrapConfig cfg;
    double epsilon = 0.0;             // rabi / detuning
    bool far_detuning_warning = false; // |epsilon| above warn threshold
};

inline constexpr double EPSILON_WARN = 0.2;

// Scale a physical setup to the dimensionless TrapConfig:
//   kbar = 8 k^2 hbar / (m omega),  coupling = (kbar detuning / 4 omega) eps^2.
// Throws ConfigError for zero detuning or non-positive mass/wavenumber/frequency.
Reduction reduce_to_dimensionless(const PhysicalSetup& s);

double potential(const TrapConfig& cfg, double x, double t);
double force(const TrapConfig& cfg, double x, double t);

struct MathieuResult {
    double exponent = 0.0;  // characteristic exponent in [0, 1]; valid when stable
    bool stable = false;    // |trace| <= 2
    bool marginal = false;  // |trace| at the stability boundary within 1e-9
    double growth = 0.0;    // ln|dominant multiplier| per period when unstable
    std::array<double, 4> monodromy{}; // row-major one-period map [x p] -> [x p]
};

// Integrates x'' + (a + 2 q cos 2t) x = 0 over one period from the two
// canonical initial conditions and classifies the monodromy matrix.
MathieuResult mathieu_exponent(double a, double q);

} // namespace paulloc
