#include "edtwk/commute.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <deque>
#include <sstream>

namespace edtwk {

namespace {

void check_adjacency(const Matrix& a) {
    if (a.rows() != a.cols()) throw shape_error("adjacency not square");
    if ((a - a.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, a.cwiseAbs().maxCoeff()))
        throw validation_error("adjacency must be symmetric");
    if (a.diagonal().cwiseAbs().maxCoeff() != 0.0)
        throw validation_error("adjacency diagonal must be zero");
    if (a.minCoeff() < 0.0) throw validation_error("adjacency weights must be nonnegative");
}

[[noreturn]] void throw_disconnected(const Matrix& a) {
    auto comps = connected_components(a);
    std::ostringstream msg;
    msg << "graph is disconnected (" << comps.size() << " components:";
    for (const auto& c : comps) {
        msg << " {";
        for (std::size_t i = 0; i < c.size(); ++i) msg << (i ? "," : "") << c[i];
        msg << "}";
    }
    msg << ")";
    throw singularity_error(msg.str());
}

}  // namespace

std::vector<std::vector<int>> connected_components(const Matrix& adjacency) {
    const long n = adjacency.rows();
    std::vector<int> comp(n, -1);
    std::vector<std::vector<int>> out;
    for (long s = 0; s < n; ++s) {
        if (comp[s] >= 0) continue;
        const int id = static_cast<int>(out.size());
        out.emplace_back();
        std::deque<long> queue{s};
        comp[s] = id;
        while (!queue.empty()) {
            long u = queue.front();
            queue.pop_front();
            out[id].push_back(static_cast<int>(u));
            for (long v = 0; v < n; ++v)
                if (comp[v] < 0 && adjacency(u, v) > 0.0) {
                    comp[v] = id;
                    queue.push_back(v);
                }
        }
    }
    return out;
}

Matrix laplacian(const Matrix& adjacency) {
    check_adjacency(adjacency);
    Matrix l = -adjacency;
    l.diagonal() = adjacency.rowwise().sum();
    return l;
}

CommuteTimeMatrix commute_time_spectral(const Matrix& adjacency, const CommuteOptions& opts) {
    const Matrix l = laplacian(adjacency);
    const long n = l.rows();
    if (n < 2) throw shape_error("commute time needs at least 2 vertices");

    Eigen::SelfAdjointEigenSolver<Matrix> eig(l);  // eigenvalues ascending
    const Vector& lambda = eig.eigenvalues();
    const Matrix& phi = eig.eigenvectors();
    const double lambda_max = lambda(n - 1);
    if (lambda(1) <= opts.connectivity_rel_tol * lambda_max) throw_disconnected(adjacency);

    const double volume = adjacency.sum();
    CommuteTimeMatrix out;
    out.volume = volume;
    out.values = Matrix::Zero(n, n);
    for (long j = 1; j < n; ++j) {
        const double inv = 1.0 / (lambda(j) + opts.ridge);
        const Vector col = phi.col(j);
        for (long u = 0; u < n; ++u)
            for (long v = u + 1; v < n; ++v) {
                const double d = col(u) - col(v);
                out.values(u, v) += inv * d * d;
            }
    }
    out.values *= volume;
    out.values = (out.values + out.values.transpose()).eval();  // mirror the upper triangle
    return out;
}

CommuteTimeMatrix commute_time_spectral(const NetworkSnapshot& snapshot, const CommuteOptions& opts) {
    return commute_time_spectral(snapshot.adjacency, opts);
}

CommuteTimeMatrix commute_time_resistance_oracle(const Matrix& adjacency,
                                                 const CommuteOptions& /*opts*/) {
    check_adjacency(adjacency);
    const long n = adjacency.rows();
    if (n < 2) throw shape_error("commute time needs at least 2 vertices");
    if (connected_components(adjacency).size() > 1) throw_disconnected(adjacency);

    const Matrix l = laplacian(adjacency);
    // L+ = (L + J/n)^-1 - J/n; valid because J/n is the projector on the null space.
    const Matrix j_over_n = Matrix::Constant(n, n, 1.0 / n);
    const Matrix lplus = (l + j_over_n).partialPivLu().inverse() - j_over_n;

    const double volume = adjacency.sum();
    CommuteTimeMatrix out;
    out.volume = volume;
    out.values = Matrix::Zero(n, n);
    for (long u = 0; u < n; ++u)
        for (long v = u + 1; v < n; ++v) {
            const double r = lplus(u, u) + lplus(v, v) - 2.0 * lplus(u, v);
            out.values(u, v) = volume * r;
            out.values(v, u) = out.values(u, v);
        }
    return out;
}

CommuteTimeMatrix commute_time_resistance_oracle(const NetworkSnapshot& snapshot,
                                                 const CommuteOptions& opts) {
    return commute_time_resistance_oracle(snapshot.adjacency, opts);
}

}  // namespace edtwk
