#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "paulloc/classical.hpp"
#include "paulloc/grid.hpp"
#include "paulloc/model.hpp"

namespace paulloc {

// Fully resolved run description.  parse_config fills every default, so the
// emitted manifest replays to a bit-identical run.
struct RunConfig {
    std::string kind;                // poincare | evolve | floquet | sweep | plan
    std::uint64_t seed = 20260815;
    int workers = 1;
    std::string out_dir = "out";

    TrapConfig trap{};
    Grid grid{};                     // grid.kbar mirrors trap.kbar

    // ensemble / packet
    int ensemble_count = 4096;
    double center_x = 0.0, center_p = 0.0;
    double sigma_x2 = 0.29;          // defaults to kbar
    double sigma_p2 = 0.0725;        // defaults to kbar^2 / (4 sigma_x2)

    // time, in drive periods (duration pi each)
    double periods = 500.0;
    int steps_per_period = 512;
    int snapshots_per_period = 8;
    double window_center = 475.0;
    double window_width = 50.0;
    double guard_mass = 1e-6;        // boundary/momentum-tail abort level

    // reference basis / monodromy
    double basis_frequency = 0.0;    // resolved value ("auto" -> Mathieu exponent)
    int basis_size = 200;
    int monodromy_steps = 1024;      // per drive period

    // coupling sweep
    double sweep_min = 0.0, sweep_max = 0.7, sweep_step = 0.01;

    // histograms / binned distributions
    int hist_bins = 200;
    double hist_x_range = 30.0;
    double hist_p_range = 25.0;

    // stroboscopic section
    std::vector<PhasePoint> seeds;
    int random_count = 0;
    double random_x_range = 4.0, random_p_range = 2.5;

    // laboratory inputs, kept verbatim for the plan report
    double mass_value = 0.0;
    MassUnit mass_unit = MassUnit::amu;
    double wavelength_nm = 0.0;
    double rf_frequency_hz = 0.0;
    double rabi_hz = 0.0;
    double detuning_hz = 0.0;

    bool operator==(const RunConfig&) const = default;
};

// Lab-frame view of the [physical] block; frequencies become angular here.
PhysicalSetup physical_setup(const RunConfig& cfg);

// Parses the flat [section] / key = value format.  Unknown sections or keys,
// duplicate keys, and type errors are reported with their line number.
RunConfig parse_config(const std::string& text);

// Inverse of parse_config up to formatting: parse(emit(c)) == c.
std::string emit_config(const RunConfig& cfg);

RunConfig load_config_file(const std::string& path);

} // namespace paulloc
