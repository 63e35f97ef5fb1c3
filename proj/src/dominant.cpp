#include "edtwk/dominant.hpp"

#include <cmath>

namespace edtwk {

AffinityMode affinity_mode_from_string(const std::string& name) {
    if (name == "raw") return AffinityMode::Raw;
    if (name == "neg-exp") return AffinityMode::NegExp;
    if (name == "max-minus") return AffinityMode::MaxMinus;
    throw config_error("unknown affinity mode '" + name + "'");
}

std::string to_string(AffinityMode mode) {
    switch (mode) {
        case AffinityMode::Raw: return "raw";
        case AffinityMode::NegExp: return "neg-exp";
        case AffinityMode::MaxMinus: return "max-minus";
    }
    return "?";
}

Matrix affinity_transform(const CommuteTimeMatrix& C, AffinityMode mode,
                          std::optional<double> sigma) {
    const Matrix& c = C.values;
    const long n = c.rows();
    Matrix w;
    switch (mode) {
        case AffinityMode::Raw:
            w = c;
            break;
        case AffinityMode::NegExp: {
            double s;
            if (sigma) {
                s = *sigma;
            } else {
                s = (n > 1) ? c.sum() / static_cast<double>(n * (n - 1)) : 0.0;
            }
            if (!(s > 0.0)) throw config_error("neg-exp sigma must be positive");
            w = (-c / s).array().exp();
            break;
        }
        case AffinityMode::MaxMinus: {
            const double cmax = c.maxCoeff();
            w = Matrix::Constant(n, n, cmax) - c;
            break;
        }
    }
    w.diagonal().setZero();
    return w;
}

Vector replicator_step(const Matrix& W, const Vector& a) {
    if (W.rows() != W.cols() || W.rows() != a.size())
        throw shape_error("replicator_step: shape mismatch");
    const Vector wa = W * a;
    const double q = a.dot(wa);
    if (!(q > 0.0))
        throw degenerate_state_error("replicator_step: a^T W a = 0, state has no affinity mass");
    return a.cwiseProduct(wa) / q;
}

DominantDistribution dominant_distribution(const Matrix& W, const ReplicatorOptions& opts) {
    const long n = W.rows();
    if (n == 0 || W.cols() != n) throw shape_error("dominant_distribution: W must be square");
    if (W.cwiseAbs().maxCoeff() == 0.0)
        throw validation_error("dominant_distribution: all-zero affinity matrix");

    DominantDistribution out;
    out.a = Vector::Constant(n, 1.0 / static_cast<double>(n));
    for (int k = 0; k < opts.max_iter; ++k) {
        Vector next = replicator_step(W, out.a);
        const double step = (next - out.a).cwiseAbs().maxCoeff();
        out.a = std::move(next);
        out.iterations = k + 1;
        if (step < opts.tol) {
            out.converged = true;
            break;
        }
    }
    out.objective = out.a.dot(W * out.a);
    for (long i = 0; i < n; ++i)
        (out.a(i) > opts.support_eps ? out.support : out.complement).push_back(static_cast<int>(i));
    return out;
}

double shannon_entropy(const Vector& a) {
    double h = 0.0;
    for (long i = 0; i < a.size(); ++i)
        if (a(i) > 0.0) h -= a(i) * std::log(a(i));
    return h;
}

Vector sub_entropies(const DominantDistribution& dist) {
    Vector values = Vector::Zero(dist.a.size());
    for (int i : dist.support) values(i) = -dist.a(i) * std::log(dist.a(i));
    return values;
}

EntropySeries entropy_series(const std::vector<Vector>& vectors, int first_t, int t, int w) {
    if (w < 1) throw shape_error("entropy_series: window must be >= 1");
    const int start = t - w + 1;
    if (start < first_t) throw shape_error("entropy_series: insufficient history before t");
    const long last_idx = static_cast<long>(t - first_t);
    if (last_idx >= static_cast<long>(vectors.size()))
        throw shape_error("entropy_series: t beyond available vectors");

    EntropySeries out;
    out.t = t;
    const long dim = vectors.empty() ? 0 : vectors.front().size();
    out.columns.resize(dim, w);
    for (int s = 0; s < w; ++s) {
        const Vector& col = vectors[static_cast<std::size_t>(start - first_t + s)];
        if (col.size() != dim) throw shape_error("entropy_series: inconsistent vector dimensions");
        out.columns.col(s) = col;
    }
    return out;
}

}  // namespace edtwk
