#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "mdpx/mdp.hpp"

namespace mdpx {

using QMatrix = Eigen::MatrixXd;  // S x A

struct OptimalSolution {
    QMatrix q;
    Eigen::VectorXd v;
    long iterations = 0;
};

/// Value iteration until ||Q - BQ||_inf <= tol (1-gamma) / (2 gamma), which
/// guarantees ||Q - Q*||_inf <= tol.
OptimalSolution solve_optimal(const TabularMdp& mdp, double tol = 1e-10);

/// Stochastic policy as an S x A matrix of action probabilities.
using Policy = Eigen::MatrixXd;

Policy deterministic_policy(const std::vector<ActionId>& actions, std::size_t num_actions);

/// Exact V^pi from (I - gamma P^pi) V = R^pi.
Eigen::VectorXd policy_value(const TabularMdp& mdp, const Policy& policy);

/// argmax per row, ties to the lowest action index.
std::vector<ActionId> greedy_policy(const QMatrix& q);

struct QTable {
    QMatrix values;
    Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic> visit_counts;
    double omega = 0.7;
};

inline constexpr double kDefaultOmega = 0.7;

/// Q-learning along a single uniform random-walk trajectory of `steps`
/// transitions from a uniformly drawn start state, with learning rate
/// 1 / n(s,a)^omega. q0 defaults to zeros.
QTable q_learning_random_walk(const TabularMdp& mdp, std::size_t steps, double omega, std::uint64_t seed,
                              const std::optional<QMatrix>& q0 = std::nullopt);

struct ExploitReport {
    double q_error = 0.0;    // ||Q_T - Q*||_inf
    double value_gap = 0.0;  // ||V* - V^greedy||_inf
    double epsilon = 0.0;
    bool success = false;    // value_gap <= epsilon
    std::size_t steps_used = 0;
    std::uint64_t seed = 0;
    std::vector<ActionId> policy;
};

/// Random-walk Q-learning for `steps`, then the greedy policy of the result,
/// evaluated exactly against the optimal value.
ExploitReport explore_then_exploit(const TabularMdp& mdp, std::size_t steps, double omega, double epsilon,
                                   std::uint64_t seed);

}  // namespace mdpx
