#pragma once

#include <string>
#include <vector>

#include "edtwk/common.hpp"
#include "edtwk/gak.hpp"

namespace edtwk {

struct Embedding {
    Matrix points;        // n x d, rows align with labels
    Vector eigenvalues;   // retained spectrum, descending
    std::vector<std::string> labels;
    bool truncated = false;  // fewer positive eigenvalues than requested
};

/// -1/2 (I - J/n) C (I - J/n); output rows and columns sum to zero.
Matrix center_matrix(const Matrix& C);

/// Kernel PCA of a Gram matrix: center, eigendecompose, keep the top-d
/// nonnegative eigenpairs, scale eigenvectors by sqrt(eigenvalue).
Embedding kpca(const KernelMatrix& K, int d);

/// Classical MDS of a vertex affinity or distance matrix (double centering
/// with the -1/2 prefactor, then the same eigen-step as kpca).
Embedding mds_vertices(const Matrix& C, int d, std::vector<std::string> labels = {});

/// DS = sum_t |x_t - x_{t-1}|^2 / sum_t |x_t - x_tn|^2 with x_tn the nearest
/// other point (ties broken toward the temporal predecessor). >= 1 by
/// construction; +inf when duplicate points zero the denominator.
double distance_stress(const Matrix& points);

}  // namespace edtwk
