#pragma once

#include <stdexcept>
#include <string>

namespace paulloc {

inline constexpr double PI = 3.14159265358979323846;

// Bad or inconsistent user input (config files, CLI arguments, invalid
// parameter combinations).  CLI maps this to exit code 2.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A numerical-validity guard tripped during a run (trajectory escape,
// momentum aliasing, boundary leakage, operator defect).  Exit code 3.
struct GuardError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace paulloc
