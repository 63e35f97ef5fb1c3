#pragma once

#include <optional>
#include <vector>

#include "edtwk/commute.hpp"
#include "edtwk/common.hpp"

namespace edtwk {

enum class AffinityMode { Raw, NegExp, MaxMinus };

AffinityMode affinity_mode_from_string(const std::string& name);
std::string to_string(AffinityMode mode);

/// Turn a commute-time (distance) matrix into the affinity the quadratic
/// program maximizes. Raw passes the distances through verbatim; NegExp uses
/// exp(-C/sigma) with sigma defaulting to the mean off-diagonal commute time;
/// MaxMinus uses max(C) - C. Diagonal is zero in every mode.
Matrix affinity_transform(const CommuteTimeMatrix& C, AffinityMode mode,
                          std::optional<double> sigma = std::nullopt);

/// One multiplicative update a_i <- a_i (Wa)_i / (a^T W a).
Vector replicator_step(const Matrix& W, const Vector& a);

struct ReplicatorOptions {
    double tol = 1e-10;        // sup-norm step threshold
    int max_iter = 10000;
    double support_eps = 1e-6; // a_i > eps defines S1
};

struct DominantDistribution {
    Vector a;                      // on the probability simplex
    std::vector<int> support;      // S1 = { i : a_i > eps }
    std::vector<int> complement;   // S2
    double objective = 0.0;        // final a^T W a
    int iterations = 0;
    bool converged = false;
};

/// Replicator dynamics from the barycenter until the step falls below tol.
DominantDistribution dominant_distribution(const Matrix& W, const ReplicatorOptions& opts = {});

/// H(a) = -sum a_i ln a_i, nats, with 0 ln 0 = 0.
double shannon_entropy(const Vector& a);

/// Per-vertex terms -a_i ln a_i on the support, zero elsewhere.
Vector sub_entropies(const DominantDistribution& dist);

/// w consecutive entropy vectors ending at index t, stored as columns.
struct EntropySeries {
    int t = 0;
    Matrix columns;  // |V| x w
};

/// vectors[i] is the entropy vector at time first_t + i.
EntropySeries entropy_series(const std::vector<Vector>& vectors, int first_t, int t, int w);

}  // namespace edtwk
