#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "edtwk/common.hpp"
#include "edtwk/dominant.hpp"

namespace edtwk {

/// Monotone coupling of two index sets, 1-based as in the warping literature.
struct Alignment {
    std::vector<int> p, q;  // equal length, increments in {(0,1),(1,0),(1,1)}
};

/// Exhaustive alignment set; oracle use only (m, n <= 8).
std::vector<Alignment> enumerate_alignments(int m, int n);

struct GakOptions {
    double bandwidth = 1.0;  // phi(x,y) = |x-y|^2 / bandwidth^2
    int band = 0;            // Sakoe-Chiba half-width, 0 = full alignment set
};

/// Sum of the local divergence along one alignment. Sequences are matrices
/// with one observation vector per column.
double alignment_cost(const Matrix& P, const Matrix& Q, const Alignment& pi,
                      const GakOptions& opts = {});

/// Global alignment kernel, sum over all alignments of exp(-cost).
double gak(const Matrix& P, const Matrix& Q, const GakOptions& opts = {});

/// log k_GA; the DP runs in log-space so long or dissimilar sequences neither
/// underflow nor overflow.
double gak_log(const Matrix& P, const Matrix& Q, const GakOptions& opts = {});

double edtwk(const EntropySeries& sp, const EntropySeries& sq, const GakOptions& opts = {});
double edtwk_log(const EntropySeries& sp, const EntropySeries& sq, const GakOptions& opts = {});

struct KernelMatrix {
    Matrix values;
    Matrix log_values;
    std::vector<std::string> labels;

    long size() const { return values.rows(); }
};

/// Gram matrix over a batch of entropy series; one evaluation per unordered pair.
KernelMatrix kernel_matrix(const std::vector<EntropySeries>& series, const GakOptions& opts = {},
                           std::size_t* eval_count = nullptr);

/// k_n(p,q) = k(p,q) / sqrt(k(p,p) k(q,q)), computed from the log values.
KernelMatrix normalize_kernel(const KernelMatrix& K);

}  // namespace edtwk
