#pragma once

#include <string>
#include <vector>

#include "paulloc/config.hpp"

namespace paulloc {

struct RunReport {
    std::vector<std::string> notes; // warnings and guard summaries, mirrored in the manifest
    std::vector<std::string> files; // data files written, relative to out_dir
    std::string plan_text;          // human-readable report for the plan kind
};

// Executes the experiment described by a resolved config, writes its data
// files plus manifest.conf into cfg.out_dir.  Replaying the manifest as a
// config reproduces the data files byte for byte.
RunReport run_experiment(const RunConfig& cfg);

} // namespace paulloc
