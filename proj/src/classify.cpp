#include "edtwk/classify.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>

namespace edtwk {

std::vector<int> stage_labels(int n_windows, int n_stages) {
    if (n_windows < 1 || n_stages < 1) throw shape_error("stage_labels: counts must be positive");
    if (n_windows % n_stages != 0)
        throw shape_error("stage_labels: " + std::to_string(n_windows) +
                          " windows not divisible into " + std::to_string(n_stages) + " stages");
    const int block = n_windows / n_stages;
    std::vector<int> labels(n_windows);
    for (int i = 0; i < n_windows; ++i) labels[i] = i / block;
    return labels;
}

double rkhs_distance(const KernelMatrix& K, int i, int j) {
    const long n = K.size();
    if (i < 0 || j < 0 || i >= n || j >= n) throw shape_error("rkhs_distance: index out of range");
    const double d2 = K.values(i, i) + K.values(j, j) - 2.0 * K.values(i, j);
    return std::sqrt(std::max(0.0, d2));
}

CrossValResult cross_validate(const StagedDataset& ds, int k_neighbors, int n_folds,
                              int n_repeats, std::uint64_t seed) {
    const long n = ds.kernel.size();
    if (static_cast<long>(ds.labels.size()) != n)
        throw shape_error("cross_validate: labels do not match kernel size");
    if (k_neighbors < 1) throw config_error("cross_validate: k_neighbors must be >= 1");
    if (n_folds < 2) throw config_error("cross_validate: n_folds must be >= 2");
    if (n_repeats < 1) throw config_error("cross_validate: n_repeats must be >= 1");

    std::map<int, std::vector<int>> by_class;
    for (long i = 0; i < n; ++i) by_class[ds.labels[i]].push_back(static_cast<int>(i));
    for (const auto& [cls, members] : by_class)
        if (static_cast<int>(members.size()) < n_folds)
            throw shape_error("cross_validate: class " + std::to_string(cls) +
                              " smaller than the fold count");

    if (by_class.begin()->first < 0) throw validation_error("cross_validate: negative stage label");
    const int n_stages = by_class.rbegin()->first + 1;

    CrossValResult out;
    for (int rep = 0; rep < n_repeats; ++rep) {
        // per-repeat RNG split keeps repeats independent and order-insensitive
        std::mt19937_64 rng(seed + 0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(rep + 1));

        // stratified folds: shuffle within each class, deal round-robin
        std::vector<int> fold_of(n, -1);
        for (auto& [cls, members] : by_class) {
            std::vector<int> shuffled = members;
            std::shuffle(shuffled.begin(), shuffled.end(), rng);
            for (std::size_t i = 0; i < shuffled.size(); ++i)
                fold_of[shuffled[i]] = static_cast<int>(i % n_folds);
        }

        long correct_total = 0;
        for (int fold = 0; fold < n_folds; ++fold) {
            std::vector<int> train, test;
            for (long i = 0; i < n; ++i)
                (fold_of[i] == fold ? test : train).push_back(static_cast<int>(i));

            long correct = 0;
            for (int i : test) {
                std::vector<std::pair<double, int>> dist;
                dist.reserve(train.size());
                for (int j : train) dist.emplace_back(rkhs_distance(ds.kernel, i, j), j);
                std::sort(dist.begin(), dist.end());
                const int k = std::min<int>(k_neighbors, static_cast<int>(dist.size()));
                std::vector<int> votes(n_stages, 0);
                for (int r = 0; r < k; ++r) ++votes[ds.labels[dist[r].second]];
                int best = 0;
                for (int s = 1; s < n_stages; ++s)
                    if (votes[s] > votes[best]) best = s;  // ties toward the lower stage
                if (best == ds.labels[i]) ++correct;
            }
            correct_total += correct;
            out.records.push_back({rep, fold,
                                   test.empty() ? 0.0
                                                : static_cast<double>(correct) /
                                                      static_cast<double>(test.size())});
        }
        out.repeat_accuracy.push_back(static_cast<double>(correct_total) / static_cast<double>(n));
    }

    const double mean = std::accumulate(out.repeat_accuracy.begin(), out.repeat_accuracy.end(), 0.0) /
                        static_cast<double>(n_repeats);
    double var = 0.0;
    for (double a : out.repeat_accuracy) var += (a - mean) * (a - mean);
    out.mean_accuracy = mean;
    out.std_error =
        n_repeats > 1 ? std::sqrt(var / static_cast<double>(n_repeats - 1)) /
                            std::sqrt(static_cast<double>(n_repeats))
                      : 0.0;
    return out;
}

}  // namespace edtwk
