#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mdpx/mdp.hpp"
#include "mdpx/spectral.hpp"

namespace mdpx {

/// Covering-length bound from the stationary distribution and the Laplacian gap:
///   8 A ln(4SA) * k0(phi_min, lambda) * sum_s 1/phi(s).
/// Throws std::invalid_argument unless lambda in (0, 2] and phi > 0.
double laplacian_cover_bound(const Eigen::VectorXd& phi, double lambda, std::size_t num_states,
                             std::size_t num_actions);

/// 2 ln(2/phi_min) / ln(2/(2-lambda)) + 1. Lambda within 1e-8 of 2 is treated
/// as 2, where the first term vanishes.
double k0(double phi_min, double lambda);

/// phi(v) - sqrt(phi(v)/phi(u)) (1 - lambda/2)^{k/2}. Not clamped: negative
/// values mean the inequality is vacuous.
double reach_prob_lower_bound(StateId u, StateId v, double k, const Eigen::VectorXd& phi, double lambda);

struct DiameterOptions {
    double tol = 1e-9;
    long max_iter = 1'000'000;
};

/// Max over ordered pairs s != s' of min_pi E[first passage s -> s'], by value
/// iteration per target. Infinity if some target is unreachable from some
/// state. Throws std::runtime_error when value iteration does not converge.
double diameter(const TabularMdp& mdp, const DiameterOptions& options = {});

/// max_s max_a || T(.|s,a) - mean_a' T(.|s,a') ||_1.
double action_variation(const TabularMdp& mdp);

inline constexpr double kDefaultActionVariationConstant = 80.0;

/// If delta_p <= 2/(5D): c * 5D * S * (A ln(4SA) + ln(4S)); nullopt otherwise.
/// D = 0 (single state) is evaluated as D = 1. Throws for infinite D.
std::optional<double> action_variation_cover_bound(double diameter, double delta_p, std::size_t num_states,
                                                   std::size_t num_actions,
                                                   double c = kDefaultActionVariationConstant);

struct HittingTimes {
    Eigen::VectorXd expected;  // length S, expected[v] = 0
    double max = 0.0;          // = ||(I - P_{-v,-v}^T)^{-1}||_1
};

/// Expected first-passage times to v from every state by solving
/// (I - P_{-v,-v}) x = 1. Throws ReducibleChainError when P is reducible.
HittingTimes hitting_time_exact(const TransitionMatrix& p, StateId v);

enum class MatrixNorm { One, Two, Inf };
std::string to_string(MatrixNorm n);

struct SubmatrixTerm {
    StateId target = 0;
    double norm_one = 0.0;
    double norm_two = 0.0;
    double norm_inf = 0.0;
    double best = 0.0;                   // infinity if no norm is below 1
    std::optional<MatrixNorm> best_norm;
};

struct SubmatrixBound {
    double value = 0.0;  // may be infinity
    std::vector<SubmatrixTerm> terms;
};

/// 4 A ln(4SA) sum_v min_{p in p_set, ||P^T_{-v,-v}||_p < 1} S^{1-1/p} / (1 - ||P^T_{-v,-v}||_p).
/// Norms of the transpose: 1 = max row sum of P_{-v,-v}, inf = max column sum,
/// 2 = largest singular value.
SubmatrixBound submatrix_cover_bound(const TransitionMatrix& p, std::size_t num_actions,
                                     std::span<const MatrixNorm> p_set = {});

/// Infinity if some off-diagonal P(u,v) is zero, else 4 S A ln(4SA) / p_min.
double pmin_cover_bound(const TransitionMatrix& p, std::size_t num_actions);

struct T0Inputs {
    double cover_length = 1.0;
    double v_max = 1.0;
    double gamma = 0.9;
    double epsilon = 0.1;
    double delta = 0.1;
    double omega = 0.7;
    std::size_t num_states = 1;
    std::size_t num_actions = 1;
    double c = 1.0;
};

/// Order-of-magnitude Q-learning step budget (hidden constants set to c):
///   c * ( (L^{1+3w} V^2 ln(S A V / (delta (1-g) eps)) / ((1-g)^2 eps^2))^{1/w}
///         + (L/(1-g) ln(V/eps))^{1/(1-w)} ).
/// Throws std::invalid_argument for out-of-range parameters, including V <= eps.
double q_learning_T0(const T0Inputs& in);

struct HardnessOptions {
    bool compute_cheeger = true;  // skipped automatically above kMaxCheegerStates
    double action_variation_c = kDefaultActionVariationConstant;
    double t0_c = 1.0;
    double omega = 0.7;
    double epsilon = 0.1;
    double delta = 0.1;
    std::optional<double> v_max;  // default r_max / (1 - gamma)
    DiameterOptions diameter;
};

struct HardnessReport {
    std::size_t num_states = 0;
    std::size_t num_actions = 0;
    StationaryDistribution stationary;
    double lambda = 0.0;
    std::optional<CheegerResult> cheeger;
    std::optional<CheegerSandwich> sandwich;
    double diameter = 0.0;
    double action_variation = 0.0;
    double k0 = 0.0;
    double laplacian_cover_bound = 0.0;
    std::optional<double> action_variation_cover_bound;
    SubmatrixBound submatrix_cover_bound;
    double pmin_cover_bound = 0.0;
    std::optional<double> q_learning_T0;
    std::string t0_cover_source;  // which bound was used as L in T0
    std::optional<std::string> t0_error;
    double v_max = 0.0;

    bool irreducible = true;
    SymmetryCheck local_symmetry;
    // PAC sufficient-condition inputs: 1/lambda and 1/phi_min.
    double inv_lambda = 0.0;
    double inv_phi_min = 0.0;

    HardnessOptions options;
};

/// Throws InvalidMdpError / ReducibleChainError when the preconditions fail.
HardnessReport hardness_report(const TabularMdp& mdp, const HardnessOptions& options = {});

}  // namespace mdpx
