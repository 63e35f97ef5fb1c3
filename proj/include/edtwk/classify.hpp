#pragma once

#include <cstdint>
#include <vector>

#include "edtwk/common.hpp"
#include "edtwk/gak.hpp"

namespace edtwk {

/// Contiguous equal-size stage blocks: label_i = floor(i / (n_windows / n_stages)).
std::vector<int> stage_labels(int n_windows, int n_stages);

/// Feature-space distance sqrt(max(0, K_ii + K_jj - 2 K_ij)).
double rkhs_distance(const KernelMatrix& K, int i, int j);

struct StagedDataset {
    KernelMatrix kernel;
    std::vector<int> labels;
};

struct CrossValRecord {
    int repeat = 0;
    int fold = 0;
    double accuracy = 0.0;
};

struct CrossValResult {
    double mean_accuracy = 0.0;
    double std_error = 0.0;
    std::vector<double> repeat_accuracy;
    std::vector<CrossValRecord> records;
};

/// Stratified k-fold cross-validation of a kNN classifier in the RKHS induced
/// by the precomputed kernel. Deterministic for a fixed seed; neighbor and
/// vote ties break toward the lower index / lower stage.
CrossValResult cross_validate(const StagedDataset& ds, int k_neighbors, int n_folds,
                              int n_repeats, std::uint64_t seed);

}  // namespace edtwk
