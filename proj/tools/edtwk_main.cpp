#include <CLI11.hpp>
#include <iostream>

#include "edtwk/pipeline.hpp"

namespace {

const char* kStages[] = {"ingest", "synth",  "networks", "commute",  "entropy",
                         "kernel", "embed",  "stress",   "classify", "report"};

int run(const std::string& stage, const std::string& config_path,
        const std::vector<std::string>& overrides) {
    using namespace edtwk;
    try {
        PipelineConfig cfg = config_path.empty() ? PipelineConfig{} : load_config(config_path);
        for (const auto& kv : overrides) {
            const auto eq = kv.find('=');
            if (eq == std::string::npos) throw config_error("override must be key=value: " + kv);
            apply_override(cfg, kv.substr(0, eq), kv.substr(eq + 1));
        }
        run_subcommand(stage, cfg);
        return kExitOk;
    } catch (const prerequisite_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitPrerequisite;
    } catch (const degenerate_state_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const singularity_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitValidation;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"EDTWK pipeline: correlation networks, commute time, dominant entropy, "
                 "global-alignment kernel, embeddings and classification"};
    app.require_subcommand(1);

    std::string config_path;
    std::vector<std::string> overrides;
    app.add_option("-c,--config", config_path, "key=value config file");
    app.add_option("-s,--set", overrides, "config override key=value (repeatable)");

    std::string chosen;
    for (const char* name : kStages) {
        auto* sub = app.add_subcommand(name);
        sub->fallthrough();  // -c/-s may follow the subcommand
        sub->callback([&chosen, name] { chosen = name; });
    }

    CLI11_PARSE(app, argc, argv);
    return run(chosen, config_path, overrides);
}
