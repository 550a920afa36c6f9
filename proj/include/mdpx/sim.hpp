#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "mdpx/mdp.hpp"

namespace mdpx {

/// Sparse inverse-CDF sampler over the rows of a transition tensor or matrix.
class TransitionSampler {
public:
    explicit TransitionSampler(const TabularMdp& mdp);
    explicit TransitionSampler(const TransitionMatrix& p);

    StateId next(StateId s, ActionId a, std::mt19937_64& rng) const;
    StateId next(StateId s, std::mt19937_64& rng) const { return next(s, 0, rng); }

    std::size_t num_states() const { return num_states_; }
    std::size_t num_actions() const { return num_actions_; }

private:
    struct Entry {
        StateId next;
        double cumulative;
    };
    void add_row(std::span<const double> probs);

    std::size_t num_states_ = 0;
    std::size_t num_actions_ = 0;
    std::vector<std::size_t> offsets_;  // row r occupies [offsets_[r], offsets_[r+1])
    std::vector<Entry> entries_;
};

struct Trajectory {
    std::vector<StateId> states;    // length + 1 entries
    std::vector<ActionId> actions;  // length entries; actions[0] is the forced start action
    std::size_t length = 0;
    std::uint64_t seed = 0;
};

/// Uniform random-walk policy with the first action forced to start_action.
/// Uses stream 0 of `seed`.
Trajectory simulate_random_walk(const TabularMdp& mdp, StateId start_state, ActionId start_action,
                                std::size_t horizon, std::uint64_t seed);

/// Empirical covering length. For every start pair (s,a) runs `trials`
/// walks on stream (s*A + a) * trials + trial and records the number of
/// actions taken until every pair has been taken at least once, counting the
/// start pair itself. Walks still uncovered after `horizon` actions count as
/// horizon + 1. The per-start "median" is the empirical 1/2-quantile
/// (sorted value at index ceil(trials/2) - 1).
struct CoverLengthEstimate {
    std::vector<double> per_start_median;  // index s * A + a
    double estimate = 0.0;                 // max over starts
    std::size_t trials = 0;
    std::size_t horizon = 0;
    double covered_fraction_at_horizon = 0.0;
    bool censored = false;  // estimate exceeds horizon
    std::uint64_t seed = 0;
    std::size_t num_actions = 0;
};

CoverLengthEstimate estimate_cover_length(const TabularMdp& mdp, std::size_t trials, std::size_t horizon,
                                          std::uint64_t seed);

/// Probability that the chain started at u visits v within k steps,
/// 1 - sum(e_u^T P_{-v,-v}^k). Equals 1 when u == v.
double exact_reach_prob(const TransitionMatrix& p, StateId u, StateId v, std::size_t k);

/// exact_reach_prob for k = 0 .. k_max in a single pass.
std::vector<double> exact_reach_prob_curve(const TransitionMatrix& p, StateId u, StateId v, std::size_t k_max);

/// Fraction of trials in which `visits` uniform draws from A actions miss at
/// least one action.
double action_coverage_trial(std::size_t num_actions, std::size_t visits, std::size_t trials, std::uint64_t seed);

struct HittingTimeSample {
    double mean = 0.0;
    double std_error = 0.0;
    std::size_t trials = 0;
};

/// Monte Carlo mean of the first-passage time from u to v (u != v).
HittingTimeSample estimate_hitting_time(const TransitionMatrix& p, StateId u, StateId v, std::size_t trials,
                                        std::uint64_t seed);

/// Empirical state-visit frequencies of one walk of `steps` transitions from `start`.
Eigen::VectorXd visit_frequencies(const TransitionMatrix& p, StateId start, std::size_t steps, std::uint64_t seed);

}  // namespace mdpx
