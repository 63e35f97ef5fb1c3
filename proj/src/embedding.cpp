#include "edtwk/embedding.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <limits>

namespace edtwk {

namespace {

/// Top-d nonnegative eigenpairs of a centered symmetric matrix, coordinates
/// scaled by sqrt(eigenvalue), sign fixed so each eigenvector's largest
/// magnitude entry is nonnegative.
Embedding eigen_embed(const Matrix& centered, int d, std::vector<std::string> labels) {
    const long n = centered.rows();
    Eigen::SelfAdjointEigenSolver<Matrix> eig(centered);  // ascending

    // eigenvalues within noise of zero count as non-positive, so the retained
    // rank does not depend on the sign of 1e-16 jitter
    const double max_abs = n > 0 ? eig.eigenvalues().cwiseAbs().maxCoeff() : 0.0;
    const double cut = 1e-12 * max_abs;
    std::vector<long> kept;
    for (long j = n - 1; j >= 0 && static_cast<int>(kept.size()) < d; --j) {
        if (eig.eigenvalues()(j) <= cut) break;
        kept.push_back(j);
    }

    Embedding out;
    out.truncated = static_cast<int>(kept.size()) < d;
    out.points = Matrix::Zero(n, static_cast<long>(kept.size()));
    out.eigenvalues.resize(static_cast<long>(kept.size()));
    for (std::size_t c = 0; c < kept.size(); ++c) {
        const long j = kept[c];
        Vector v = eig.eigenvectors().col(j);
        long arg = 0;
        v.cwiseAbs().maxCoeff(&arg);
        if (v(arg) < 0.0) v = -v;
        out.eigenvalues(static_cast<long>(c)) = eig.eigenvalues()(j);
        out.points.col(static_cast<long>(c)) = std::sqrt(eig.eigenvalues()(j)) * v;
    }
    if (labels.empty()) {
        labels.resize(n);
        for (long i = 0; i < n; ++i) labels[i] = "p" + std::to_string(i);
    }
    out.labels = std::move(labels);
    return out;
}

}  // namespace

Matrix center_matrix(const Matrix& C) {
    if (C.rows() != C.cols()) throw shape_error("center_matrix: square matrix required");
    const long n = C.rows();
    const Vector row_mean = C.rowwise().mean();
    const Vector col_mean = C.colwise().mean();
    const double total_mean = C.mean();
    Matrix out(n, n);
    for (long i = 0; i < n; ++i)
        for (long j = 0; j < n; ++j)
            out(i, j) = -0.5 * (C(i, j) - row_mean(i) - col_mean(j) + total_mean);
    out = 0.5 * (out + out.transpose().eval());
    return out;
}

Embedding kpca(const KernelMatrix& K, int d) {
    if (d < 1) throw config_error("kpca: dimension must be >= 1");
    const Matrix& k = K.values;
    if (k.rows() != k.cols()) throw shape_error("kpca: square kernel required");
    const long n = k.rows();

    // standard kernel centering (I - J/n) K (I - J/n)
    const Vector row_mean = k.rowwise().mean();
    const double total_mean = k.mean();
    Matrix kc(n, n);
    for (long i = 0; i < n; ++i)
        for (long j = 0; j < n; ++j) kc(i, j) = k(i, j) - row_mean(i) - row_mean(j) + total_mean;
    kc = 0.5 * (kc + kc.transpose().eval());

    return eigen_embed(kc, d, K.labels);
}

Embedding mds_vertices(const Matrix& C, int d, std::vector<std::string> labels) {
    if (d < 1) throw config_error("mds_vertices: dimension must be >= 1");
    return eigen_embed(center_matrix(C), d, std::move(labels));
}

double distance_stress(const Matrix& points) {
    const long n = points.rows();
    if (n < 3) throw shape_error("distance_stress: need at least 3 points");

    double num = 0.0, den = 0.0;
    for (long t = 1; t < n; ++t) {
        num += (points.row(t) - points.row(t - 1)).squaredNorm();
        double best = std::numeric_limits<double>::infinity();
        // tie toward the temporal predecessor: scan it first with strict improvement after
        best = (points.row(t) - points.row(t - 1)).squaredNorm();
        for (long j = 0; j < n; ++j) {
            if (j == t || j == t - 1) continue;
            const double d2 = (points.row(t) - points.row(j)).squaredNorm();
            if (d2 < best) best = d2;
        }
        den += best;
    }
    if (den == 0.0) return std::numeric_limits<double>::infinity();
    return num / den;
}

}  // namespace edtwk
