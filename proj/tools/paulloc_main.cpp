#include <cmath>
#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "paulloc/common.hpp"
#include "paulloc/config.hpp"
#include "paulloc/run.hpp"
#include "paulloc/version.hpp"

namespace {

struct Overrides {
    std::optional<std::uint64_t> seed;
    std::optional<int> workers;
    std::optional<std::string> out_dir;
    std::optional<double> dt;
};

void apply_overrides(paulloc::RunConfig& cfg, const Overrides& ov) {
    using paulloc::ConfigError;
    if (ov.seed) cfg.seed = *ov.seed;
    if (ov.workers) cfg.workers = *ov.workers;
    if (ov.out_dir) cfg.out_dir = *ov.out_dir;
    if (ov.dt) {
        if (!(*ov.dt > 0.0)) throw ConfigError("--dt must be positive");
        // snap to a whole number of steps per drive period
        const int steps = static_cast<int>(std::max<long long>(1, std::llround(paulloc::PI / *ov.dt)));
        if (cfg.kind == "floquet" || cfg.kind == "sweep")
            cfg.monodromy_steps = steps;
        else
            cfg.steps_per_period = steps;
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"ion-in-a-driven-trap simulations: classical sections, wave-packet "
                 "localization runs, one-period spectra, coupling sweeps"};
    app.set_version_flag("--version", std::string(paulloc::VERSION));
    app.require_subcommand(1);

    const std::vector<std::pair<std::string, std::string>> kinds = {
        {"poincare", "stroboscopic phase-space sections"},
        {"evolve", "classical ensemble vs quantum packet spreading"},
        {"floquet", "one-period spectrum and packet expansion"},
        {"sweep", "quasienergies across a coupling range"},
        {"plan", "scale a physical ion/laser setup to run parameters"}};

    std::string config_path;
    Overrides ov;
    std::vector<CLI::App*> subs;
    for (const auto& [name, help] : kinds) {
        CLI::App* sub = app.add_subcommand(name, help);
        sub->add_option("config", config_path, "run configuration file")
            ->required()
            ->check(CLI::ExistingFile);
        sub->add_option("--seed", ov.seed, "override the master seed");
        sub->add_option("--workers", ov.workers, "override the worker-thread count");
        sub->add_option("--out-dir", ov.out_dir, "override the output directory");
        sub->add_option("--dt", ov.dt,
                        "override the integration step (snapped to divide the period)");
        subs.push_back(sub);
    }

    CLI11_PARSE(app, argc, argv);

    try {
        paulloc::RunConfig cfg = paulloc::load_config_file(config_path);
        for (const CLI::App* sub : subs)
            if (sub->parsed() && cfg.kind != sub->get_name())
                throw paulloc::ConfigError("config declares kind '" + cfg.kind
                                           + "' but the '" + sub->get_name()
                                           + "' subcommand was invoked");
        apply_overrides(cfg, ov);
        // round-trip re-resolves and revalidates the overridden configuration
        cfg = paulloc::parse_config(paulloc::emit_config(cfg));

        const paulloc::RunReport rep = paulloc::run_experiment(cfg);
        for (const auto& note : rep.notes) std::cerr << "note: " << note << "\n";
        if (!rep.plan_text.empty()) std::cout << rep.plan_text;
        std::cerr << cfg.kind << ": wrote " << rep.files.size() << " data file(s) + manifest to "
                  << cfg.out_dir << "\n";
        return 0;
    } catch (const paulloc::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const paulloc::GuardError& e) {
        std::cerr << "guard failure: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
