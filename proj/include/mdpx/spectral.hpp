#pragma once

#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "mdpx/mdp.hpp"

namespace mdpx {

/// Left fixed point of P: phi P = phi, sum(phi) = 1, phi > 0.
struct StationaryDistribution {
    Eigen::VectorXd phi;
    double phi_min = 0.0;

    double operator[](StateId s) const { return phi(static_cast<Eigen::Index>(s)); }
    std::size_t size() const { return static_cast<std::size_t>(phi.size()); }
};

/// Solves (P^T - I) phi = 0 with the last equation replaced by sum(phi) = 1.
/// Throws ReducibleChainError for reducible P, std::runtime_error if the solve
/// fails the positivity or fixed-point checks.
StationaryDistribution stationary_distribution(const TransitionMatrix& p);

inline constexpr double kZeroEigenvalueTolerance = 1e-10;

struct SpectralSummary {
    Eigen::MatrixXd laplacian;
    Eigen::VectorXd eigenvalues;  // ascending
    Eigen::MatrixXd eigenvectors;  // columns match eigenvalues
    double lambda = 0.0;           // smallest eigenvalue above the zero tolerance
};

/// Chung's directed Laplacian
///   L = I - (Phi^{1/2} P Phi^{-1/2} + Phi^{-1/2} P^T Phi^{1/2}) / 2
/// and its full spectrum. The zero threshold is kZeroEigenvalueTolerance times
/// the largest eigenvalue magnitude.
SpectralSummary chung_laplacian(const TransitionMatrix& p, const StationaryDistribution& phi);

inline constexpr std::size_t kMaxCheegerStates = 20;

struct CheegerResult {
    double h = 0.0;
    std::vector<StateId> argmin_cut;
    double flow_out = 0.0;
    double smaller_side_mass = 0.0;
};

/// Exact Cheeger constant h = min_U F(dU) / min(F(U), F(U^c)) with
/// F(u,v) = phi(u) P(u,v), by enumerating all 2^S - 2 proper cuts.
/// Ties resolve to the smallest bitmask. Throws std::invalid_argument for
/// S > kMaxCheegerStates.
CheegerResult cheeger_constant(const TransitionMatrix& p, const StationaryDistribution& phi);

struct SymmetryCheck {
    bool symmetric = true;
    // First ordered pair (s, s'), row-major, with an edge s -> s' whose forward
    // probability multiset differs from the reverse one.
    std::optional<std::pair<StateId, StateId>> witness;
};

/// Locally symmetric actions: for every (s, s') the multiset of positive
/// T(s'|s,a) equals the multiset of positive T(s|s',a'), compared as sorted
/// lists with per-entry tolerance.
SymmetryCheck locally_symmetric(const TabularMdp& mdp, double tolerance = kProbabilityTolerance);

struct WeightedGraph {
    Eigen::MatrixXd weights;       // w(u,v) = sum_a T(v|u,a), symmetric
    Eigen::VectorXd degrees;       // d(u) = sum_v w(u,v)
    Eigen::VectorXd distribution;  // d / sum(d)
};

/// Undirected graph whose random walk equals the MDP's. Throws
/// std::invalid_argument if the MDP is not locally symmetric.
WeightedGraph undirected_equivalent(const TabularMdp& mdp);

/// Both sides of the Cheeger inequality for a computed (h, lambda): Chung's
/// form 2h >= lambda >= h^2/2 and the one-sided variant h >= lambda >= h^2/2.
struct CheegerSandwich {
    bool chung_form_holds = false;
    bool strict_form_holds = false;
};
CheegerSandwich check_cheeger_sandwich(double h, double lambda, double tolerance = 1e-9);

}  // namespace mdpx
