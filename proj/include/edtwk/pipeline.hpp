#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "edtwk/classify.hpp"
#include "edtwk/dominant.hpp"
#include "edtwk/gak.hpp"
#include "edtwk/market.hpp"

namespace edtwk {

struct PipelineConfig {
    // data source: either a CSV path or the synthetic generator
    std::string input;  // empty => synth
    MissingPolicy missing = MissingPolicy::Reject;
    SynthConfig synth;

    int width = 28;             // correlation window, days
    int entropy_window = 28;    // w
    AffinityMode affinity = AffinityMode::NegExp;
    std::optional<double> sigma;      // neg-exp bandwidth, default mean off-diag
    ReplicatorOptions replicator;
    double phi_bandwidth = 1.0;
    double ridge = 0.0;

    int kernel_count = 40;      // windows in the Gram, evenly spaced
    int embed_dim = 2;

    int stages = 10;
    int folds = 10;
    int k_neighbors = 3;
    int repeats = 10;
    int classify_windows = 100;       // consecutive windows fed to the classifier
    int classify_start = -1;          // -1 => first valid window

    std::string out_dir = "out";
    std::uint64_t seed = 0;
    bool strict = false;

    void validate() const;
};

/// Parse a flat key=value config file; unknown keys are errors.
PipelineConfig load_config(const std::string& path);
/// Apply `key=value` overrides on top of an existing config.
void apply_override(PipelineConfig& cfg, const std::string& key, const std::string& value);

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitPrerequisite = 3;
constexpr int kExitNumerical = 4;

/// Run one pipeline stage; writes the stage's artifacts and updates the run
/// manifest under cfg.out_dir. Throws the library error types; the CLI maps
/// them to exit codes.
void run_subcommand(const std::string& name, const PipelineConfig& cfg);

/// FNV-1a 64-bit over the file bytes, hex encoded (manifest checksums).
std::string file_checksum(const std::string& path);

/// Worker count: EDTWK_THREADS, else hardware concurrency.
int thread_count();

/// Deterministic parallel loop: body(i) for i in [0, n), results independent
/// of the schedule because each index owns its output slot.
void parallel_for(long n, const std::function<void(long)>& body);

}  // namespace edtwk
