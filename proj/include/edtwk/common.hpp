#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace edtwk {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

struct shape_error : std::runtime_error {
    explicit shape_error(const std::string& msg) : std::runtime_error(msg) {}
};

struct validation_error : std::runtime_error {
    explicit validation_error(const std::string& msg) : std::runtime_error(msg) {}
};

struct parse_error : std::runtime_error {
    parse_error(const std::string& msg, long line)
        : std::runtime_error(msg + " (line " + std::to_string(line) + ")"), line(line) {}
    long line;
};

struct config_error : std::runtime_error {
    explicit config_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Disconnected graph: the Laplacian null space has dimension > 1.
struct singularity_error : std::runtime_error {
    explicit singularity_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Replicator update with a^T W a = 0.
struct degenerate_state_error : std::runtime_error {
    explicit degenerate_state_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Oracle-only routine asked for sizes it is not meant to handle.
struct capacity_error : std::runtime_error {
    explicit capacity_error(const std::string& msg) : std::runtime_error(msg) {}
};

struct prerequisite_error : std::runtime_error {
    explicit prerequisite_error(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace edtwk
