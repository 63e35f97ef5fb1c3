#pragma once

#include "edtwk/common.hpp"
#include "edtwk/market.hpp"

namespace edtwk {

/// Commute-time distances of one snapshot, in expected random-walk steps.
struct CommuteTimeMatrix {
    Matrix values;        // symmetric, zero diagonal, nonnegative
    double volume = 0.0;  // sum of weighted degrees
};

struct CommuteOptions {
    double connectivity_rel_tol = 1e-10;  // lambda_2 <= tol * lambda_max => disconnected
    double ridge = 0.0;                   // optional eigenvalue shift
};

/// L = D - A. Input must be square, symmetric, zero-diagonal.
Matrix laplacian(const Matrix& adjacency);

/// Spectral form: C(u,v) = vol * sum_{j>=2} (phi_j(u)-phi_j(v))^2 / lambda_j.
CommuteTimeMatrix commute_time_spectral(const Matrix& adjacency, const CommuteOptions& opts = {});
CommuteTimeMatrix commute_time_spectral(const NetworkSnapshot& snapshot, const CommuteOptions& opts = {});

/// Independent route: C(u,v) = vol * (L+_uu + L+_vv - 2 L+_uv) with the
/// pseudoinverse obtained from an LU inverse of L + J/n. No eigensolver shared
/// with the spectral form.
CommuteTimeMatrix commute_time_resistance_oracle(const Matrix& adjacency, const CommuteOptions& opts = {});
CommuteTimeMatrix commute_time_resistance_oracle(const NetworkSnapshot& snapshot, const CommuteOptions& opts = {});

/// Connected components over strictly positive edge weights.
std::vector<std::vector<int>> connected_components(const Matrix& adjacency);

}  // namespace edtwk
