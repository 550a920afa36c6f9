#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace mdpx {

using StateId = std::size_t;
using ActionId = std::size_t;

inline constexpr double kProbabilityTolerance = 1e-9;

/// Tabular MDP with a dense transition tensor T[s][a][s'] and rewards R[s][a].
///
/// Immutable after construction. The constructor only checks shapes; the
/// probabilistic invariants are checked by validate_mdp() so that malformed
/// files can still be loaded and reported on.
class TabularMdp {
public:
    TabularMdp(std::size_t num_states, std::size_t num_actions,
               std::vector<double> transitions, std::vector<double> rewards,
               double r_max, double gamma, std::vector<std::string> labels = {});

    std::size_t num_states() const { return num_states_; }
    std::size_t num_actions() const { return num_actions_; }
    double r_max() const { return r_max_; }
    double gamma() const { return gamma_; }
    const std::vector<std::string>& labels() const { return labels_; }

    double transition(StateId s, ActionId a, StateId next) const {
        return transitions_[(s * num_actions_ + a) * num_states_ + next];
    }
    std::span<const double> next_state_distribution(StateId s, ActionId a) const {
        return {transitions_.data() + (s * num_actions_ + a) * num_states_, num_states_};
    }
    double reward(StateId s, ActionId a) const { return rewards_[s * num_actions_ + a]; }

    const std::vector<double>& transitions() const { return transitions_; }
    const std::vector<double>& rewards() const { return rewards_; }

    std::string label(StateId s) const;

    /// Copy with every (s,a) row rescaled to sum to one. Only used when the
    /// caller explicitly asks for it; rows summing to zero are left untouched.
    TabularMdp renormalized() const;

private:
    std::size_t num_states_;
    std::size_t num_actions_;
    std::vector<double> transitions_;
    std::vector<double> rewards_;
    double r_max_;
    double gamma_;
    std::vector<std::string> labels_;
};

struct Violation {
    StateId state = 0;
    ActionId action = 0;
    std::string message;
};

struct ValidationReport {
    std::vector<Violation> violations;
    bool ok() const { return violations.empty(); }
    std::string summary(std::size_t max_items = 10) const;
};

ValidationReport validate_mdp(const TabularMdp& mdp);

/// Row-stochastic S x S matrix.
class TransitionMatrix {
public:
    /// Throws std::invalid_argument if the matrix is not square, has a
    /// negative entry, or a row sum outside 1 +/- tolerance.
    explicit TransitionMatrix(Eigen::MatrixXd entries, double tolerance = kProbabilityTolerance);

    const Eigen::MatrixXd& matrix() const { return entries_; }
    std::size_t size() const { return static_cast<std::size_t>(entries_.rows()); }
    double operator()(StateId from, StateId to) const {
        return entries_(static_cast<Eigen::Index>(from), static_cast<Eigen::Index>(to));
    }

private:
    Eigen::MatrixXd entries_;
};

struct ComponentStructure {
    std::vector<std::size_t> component_id;  // per state
    std::vector<std::vector<StateId>> components;
    std::vector<std::vector<StateId>> closed_components;
    bool is_strongly_connected = false;

    std::size_t num_components() const { return components.size(); }
    std::string describe() const;
};

class InvalidMdpError : public std::runtime_error {
public:
    explicit InvalidMdpError(ValidationReport report);
    const ValidationReport& report() const { return report_; }

private:
    ValidationReport report_;
};

/// Raised by analyses that require an irreducible chain.
class ReducibleChainError : public std::runtime_error {
public:
    explicit ReducibleChainError(ComponentStructure structure);
    const ComponentStructure& structure() const { return structure_; }

private:
    ComponentStructure structure_;
};

/// P(s,s') = sum_a T(s'|s,a) / A. Throws InvalidMdpError on an invalid MDP.
TransitionMatrix random_walk_matrix(const TabularMdp& mdp);

/// (I + P) / 2.
TransitionMatrix lazy_matrix(const TransitionMatrix& p);

/// Strongly connected components of the support graph of P (edges where P(u,v) > 0).
/// Components are numbered in order of their smallest state.
ComponentStructure component_structure(const TransitionMatrix& p);

/// Throws ReducibleChainError unless P is irreducible.
void require_irreducible(const TransitionMatrix& p);

/// Sub-MDP on a closed set of states; transitions leaving the set must be zero.
TabularMdp restrict_to_states(const TabularMdp& mdp, std::span<const StateId> states);

}  // namespace mdpx
