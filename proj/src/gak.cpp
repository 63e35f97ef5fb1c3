#include "edtwk/gak.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace edtwk {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double local_cost(const Matrix& P, const Matrix& Q, long i, long j, const GakOptions& opts) {
    const double d2 = (P.col(i) - Q.col(j)).squaredNorm();
    return d2 / (opts.bandwidth * opts.bandwidth);
}

void check_pair(const Matrix& P, const Matrix& Q, const GakOptions& opts) {
    if (P.cols() < 1 || Q.cols() < 1) throw shape_error("gak: empty sequence");
    if (P.rows() != Q.rows()) throw shape_error("gak: observation dimension mismatch");
    if (!(opts.bandwidth > 0.0)) throw config_error("gak: bandwidth must be positive");
    if (opts.band < 0) throw config_error("gak: band must be >= 0");
    if (opts.band > 0 && opts.band < std::abs(P.cols() - Q.cols()))
        throw config_error("gak: band narrower than the length difference");
}

bool in_band(long i, long j, const GakOptions& opts) {
    return opts.band == 0 || std::abs(i - j) <= opts.band;
}

double log_sum_exp3(double a, double b, double c) {
    const double m = std::max(a, std::max(b, c));
    if (m == kNegInf) return kNegInf;
    return m + std::log(std::exp(a - m) + std::exp(b - m) + std::exp(c - m));
}

void enumerate_rec(int m, int n, int i, int j, Alignment& cur, std::vector<Alignment>& out) {
    if (i == m && j == n) {
        out.push_back(cur);
        return;
    }
    auto step = [&](int di, int dj) {
        if (i + di > m || j + dj > n) return;
        cur.p.push_back(i + di);
        cur.q.push_back(j + dj);
        enumerate_rec(m, n, i + di, j + dj, cur, out);
        cur.p.pop_back();
        cur.q.pop_back();
    };
    step(0, 1);
    step(1, 0);
    step(1, 1);
}

}  // namespace

std::vector<Alignment> enumerate_alignments(int m, int n) {
    if (m < 1 || n < 1) throw shape_error("enumerate_alignments: lengths must be >= 1");
    if (m > 8 || n > 8)
        throw capacity_error("enumerate_alignments is an oracle, lengths are capped at 8");
    std::vector<Alignment> out;
    Alignment cur;
    cur.p.push_back(1);
    cur.q.push_back(1);
    enumerate_rec(m, n, 1, 1, cur, out);
    return out;
}

double alignment_cost(const Matrix& P, const Matrix& Q, const Alignment& pi,
                      const GakOptions& opts) {
    check_pair(P, Q, opts);
    const long m = P.cols(), n = Q.cols();
    const std::size_t l = pi.p.size();
    if (l == 0 || pi.q.size() != l) throw validation_error("alignment: empty or ragged");
    if (pi.p.front() != 1 || pi.q.front() != 1 || pi.p.back() != m || pi.q.back() != n)
        throw validation_error("alignment: endpoints must be (1,1) and (m,n)");
    for (std::size_t i = 1; i < l; ++i) {
        const int dp = pi.p[i] - pi.p[i - 1];
        const int dq = pi.q[i] - pi.q[i - 1];
        const bool ok = (dp == 0 && dq == 1) || (dp == 1 && dq == 0) || (dp == 1 && dq == 1);
        if (!ok) throw validation_error("alignment: invalid increment");
    }
    double cost = 0.0;
    for (std::size_t i = 0; i < l; ++i) cost += local_cost(P, Q, pi.p[i] - 1, pi.q[i] - 1, opts);
    return cost;
}

double gak_log(const Matrix& P, const Matrix& Q, const GakOptions& opts) {
    check_pair(P, Q, opts);
    const long m = P.cols(), n = Q.cols();

    // log M(i,j) = -phi(p_i, q_j) + logsumexp(M(i-1,j), M(i,j-1), M(i-1,j-1))
    std::vector<double> prev(n + 1, kNegInf), cur(n + 1, kNegInf);
    prev[0] = 0.0;  // log M(0,0)
    for (long i = 1; i <= m; ++i) {
        cur.assign(n + 1, kNegInf);
        for (long j = 1; j <= n; ++j) {
            if (!in_band(i, j, opts)) continue;
            const double lse = log_sum_exp3(prev[j], cur[j - 1], prev[j - 1]);
            if (lse == kNegInf) continue;
            cur[j] = -local_cost(P, Q, i - 1, j - 1, opts) + lse;
        }
        std::swap(prev, cur);
    }
    return prev[n];
}

double gak(const Matrix& P, const Matrix& Q, const GakOptions& opts) {
    check_pair(P, Q, opts);
    const long m = P.cols(), n = Q.cols();

    // Linear DP for short sequences; otherwise the log-space recursion, since
    // products of many e^{-phi} leave the double range.
    if (m <= 32 && n <= 32) {
        Matrix cost(m, n);
        double max_cost = 0.0;
        for (long i = 0; i < m; ++i)
            for (long j = 0; j < n; ++j) {
                cost(i, j) = local_cost(P, Q, i, j, opts);
                max_cost = std::max(max_cost, cost(i, j));
            }
        if (max_cost < 690.0) {  // every e^{-phi} stays above ~1e-300
            std::vector<double> prev(n + 1, 0.0), cur(n + 1, 0.0);
            prev[0] = 1.0;
            std::fill(prev.begin() + 1, prev.end(), 0.0);
            for (long i = 1; i <= m; ++i) {
                cur.assign(n + 1, 0.0);
                for (long j = 1; j <= n; ++j) {
                    if (!in_band(i, j, opts)) continue;
                    cur[j] = std::exp(-cost(i - 1, j - 1)) * (prev[j] + cur[j - 1] + prev[j - 1]);
                }
                std::swap(prev, cur);
            }
            return prev[n];
        }
    }
    return std::exp(gak_log(P, Q, opts));
}

double edtwk_log(const EntropySeries& sp, const EntropySeries& sq, const GakOptions& opts) {
    if (sp.columns.rows() != sq.columns.rows())
        throw shape_error("edtwk: vertex dimension mismatch");
    if (sp.columns.cols() != sq.columns.cols()) throw shape_error("edtwk: window width mismatch");
    return gak_log(sp.columns, sq.columns, opts);
}

double edtwk(const EntropySeries& sp, const EntropySeries& sq, const GakOptions& opts) {
    if (sp.columns.rows() != sq.columns.rows())
        throw shape_error("edtwk: vertex dimension mismatch");
    if (sp.columns.cols() != sq.columns.cols()) throw shape_error("edtwk: window width mismatch");
    return gak(sp.columns, sq.columns, opts);
}

KernelMatrix kernel_matrix(const std::vector<EntropySeries>& series, const GakOptions& opts,
                           std::size_t* eval_count) {
    const long n = static_cast<long>(series.size());
    if (n < 2) throw shape_error("kernel_matrix: need at least 2 series");

    KernelMatrix out;
    out.log_values.resize(n, n);
    out.labels.resize(n);
    for (long p = 0; p < n; ++p) out.labels[p] = "w" + std::to_string(series[p].t);

    std::size_t evals = 0;
    for (long p = 0; p < n; ++p)
        for (long q = p; q < n; ++q) {
            const double lv = edtwk_log(series[p], series[q], opts);
            out.log_values(p, q) = lv;
            out.log_values(q, p) = lv;
            ++evals;
        }
    if (eval_count) *eval_count = evals;
    out.values = out.log_values.array().exp();
    return out;
}

KernelMatrix normalize_kernel(const KernelMatrix& K) {
    const long n = K.size();
    if (n == 0 || K.values.cols() != n) throw shape_error("normalize_kernel: square matrix required");
    const bool have_logs = K.log_values.rows() == n && K.log_values.cols() == n;
    for (long i = 0; i < n; ++i) {
        const bool positive = have_logs ? K.log_values(i, i) > kNegInf : K.values(i, i) > 0.0;
        if (!positive)
            throw validation_error("normalize_kernel: nonpositive diagonal at index " +
                                   std::to_string(i));
    }

    KernelMatrix out;
    out.labels = K.labels;
    out.log_values.resize(n, n);
    for (long p = 0; p < n; ++p)
        for (long q = 0; q < n; ++q) {
            if (have_logs) {
                out.log_values(p, q) =
                    K.log_values(p, q) - 0.5 * (K.log_values(p, p) + K.log_values(q, q));
            } else {
                out.log_values(p, q) = std::log(K.values(p, q)) -
                                       0.5 * (std::log(K.values(p, p)) + std::log(K.values(q, q)));
            }
        }
    out.log_values.diagonal().setZero();
    out.values = out.log_values.array().exp();
    return out;
}

}  // namespace edtwk
