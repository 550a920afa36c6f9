#include "mdpx/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>

#include "mdpx/parallel.hpp"

namespace mdpx {

StationaryDistribution stationary_distribution(const TransitionMatrix& p) {
    require_irreducible(p);
    const Eigen::Index n = p.matrix().rows();
    Eigen::MatrixXd system = p.matrix().transpose() - Eigen::MatrixXd::Identity(n, n);
    system.row(n - 1).setOnes();
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
    rhs(n - 1) = 1.0;

    Eigen::FullPivLU<Eigen::MatrixXd> lu(system);
    if (!lu.isInvertible()) throw std::runtime_error("stationary distribution: singular system");
    StationaryDistribution out;
    out.phi = lu.solve(rhs);
    out.phi /= out.phi.sum();
    out.phi_min = out.phi.minCoeff();
    if (!(out.phi_min > 0.0)) {
        throw std::runtime_error("stationary distribution: non-positive entry " +
                                 std::to_string(out.phi_min));
    }
    const double residual = (out.phi.transpose() * p.matrix() - out.phi.transpose()).cwiseAbs().maxCoeff();
    if (residual > 1e-9) {
        throw std::runtime_error("stationary distribution: fixed-point residual " + std::to_string(residual));
    }
    return out;
}

SpectralSummary chung_laplacian(const TransitionMatrix& p, const StationaryDistribution& phi) {
    const Eigen::Index n = p.matrix().rows();
    if (phi.phi.size() != n) throw std::invalid_argument("phi has the wrong length");
    if (!((phi.phi.array() > 0.0).all())) {
        throw std::invalid_argument("Laplacian needs a strictly positive stationary distribution");
    }
    const Eigen::VectorXd root = phi.phi.cwiseSqrt();
    const Eigen::VectorXd inv_root = root.cwiseInverse();
    // Phi^{1/2} P Phi^{-1/2}
    Eigen::MatrixXd scaled = root.asDiagonal() * p.matrix() * inv_root.asDiagonal();
    Eigen::MatrixXd lap = Eigen::MatrixXd::Identity(n, n) - 0.5 * (scaled + scaled.transpose());
    lap = 0.5 * (lap + lap.transpose()).eval();

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(lap);
    if (solver.info() != Eigen::Success) throw std::runtime_error("Laplacian eigensolver failed");

    SpectralSummary out;
    out.laplacian = std::move(lap);
    out.eigenvalues = solver.eigenvalues();
    out.eigenvectors = solver.eigenvectors();
    const double scale = std::max(out.eigenvalues.cwiseAbs().maxCoeff(), std::numeric_limits<double>::min());
    const double threshold = kZeroEigenvalueTolerance * scale;
    out.lambda = 0.0;
    for (Eigen::Index i = 0; i < out.eigenvalues.size(); ++i) {
        if (out.eigenvalues(i) > threshold) {
            out.lambda = out.eigenvalues(i);
            break;
        }
    }
    return out;
}

CheegerResult cheeger_constant(const TransitionMatrix& p, const StationaryDistribution& phi) {
    const std::size_t n = p.size();
    if (n > kMaxCheegerStates) {
        throw std::invalid_argument("exhaustive Cheeger search supports at most " +
                                    std::to_string(kMaxCheegerStates) + " states, got " + std::to_string(n) +
                                    "; a sampling variant is not provided");
    }
    if (n < 2) throw std::invalid_argument("Cheeger constant needs at least two states");
    if (phi.size() != n) throw std::invalid_argument("phi has the wrong length");

    std::vector<double> flow(n * n);
    for (std::size_t u = 0; u < n; ++u)
        for (std::size_t v = 0; v < n; ++v) flow[u * n + v] = phi[u] * p(u, v);

    const double total_mass = phi.phi.sum();
    const std::uint64_t full = (std::uint64_t{1} << n) - 1;
    const std::uint64_t num_masks = full - 1;  // masks 1 .. full-1
    const std::size_t chunks = std::max<std::size_t>(1, std::min<std::uint64_t>(num_masks, 64 * worker_count()));

    struct Best {
        double h = std::numeric_limits<double>::infinity();
        std::uint64_t mask = 0;
        double flow_out = 0.0;
        double mass = 0.0;
    };
    std::vector<Best> best(chunks);
    parallel_for(chunks, [&](std::size_t c) {
        const std::uint64_t begin = 1 + num_masks * c / chunks;
        const std::uint64_t end = 1 + num_masks * (c + 1) / chunks;
        Best local;
        for (std::uint64_t mask = begin; mask < end; ++mask) {
            double inside = 0.0, boundary = 0.0;
            for (std::uint64_t in = mask; in; in &= in - 1) {
                const auto u = static_cast<std::size_t>(__builtin_ctzll(in));
                inside += phi[u];
                const double* row = &flow[u * n];
                for (std::uint64_t out = full & ~mask; out; out &= out - 1) {
                    boundary += row[__builtin_ctzll(out)];
                }
            }
            const double smaller = std::min(inside, total_mass - inside);
            const double h = boundary / smaller;
            if (h < local.h) local = {h, mask, boundary, smaller};
        }
        best[c] = local;
    });
    Best overall;
    for (const auto& b : best) {
        if (b.h < overall.h) overall = b;
    }
    CheegerResult out;
    out.h = overall.h;
    out.flow_out = overall.flow_out;
    out.smaller_side_mass = overall.mass;
    for (std::size_t s = 0; s < n; ++s)
        if (overall.mask >> s & 1u) out.argmin_cut.push_back(s);
    return out;
}

SymmetryCheck locally_symmetric(const TabularMdp& mdp, double tolerance) {
    const std::size_t S = mdp.num_states();
    const std::size_t A = mdp.num_actions();
    std::vector<double> forward, backward;
    for (StateId s = 0; s < S; ++s) {
        for (StateId t = 0; t < S; ++t) {
            if (s == t) continue;
            forward.clear();
            backward.clear();
            for (ActionId a = 0; a < A; ++a) {
                if (double p = mdp.transition(s, a, t); p > 0.0) forward.push_back(p);
                if (double q = mdp.transition(t, a, s); q > 0.0) backward.push_back(q);
            }
            // Pairs without an edge s -> t are covered when (t, s) is visited.
            if (forward.empty()) continue;
            bool equal = forward.size() == backward.size();
            if (equal) {
                std::sort(forward.begin(), forward.end());
                std::sort(backward.begin(), backward.end());
                for (std::size_t i = 0; i < forward.size() && equal; ++i) {
                    equal = std::abs(forward[i] - backward[i]) <= tolerance;
                }
            }
            if (!equal) return {false, std::make_pair(s, t)};
        }
    }
    return {true, std::nullopt};
}

WeightedGraph undirected_equivalent(const TabularMdp& mdp) {
    auto check = locally_symmetric(mdp);
    if (!check.symmetric) {
        throw std::invalid_argument("MDP does not have locally symmetric actions (first violation " +
                                    mdp.label(check.witness->first) + " -> " +
                                    mdp.label(check.witness->second) + ")");
    }
    const auto S = static_cast<Eigen::Index>(mdp.num_states());
    WeightedGraph g;
    g.weights = Eigen::MatrixXd::Zero(S, S);
    for (Eigen::Index u = 0; u < S; ++u)
        for (ActionId a = 0; a < mdp.num_actions(); ++a)
            for (Eigen::Index v = 0; v < S; ++v)
                g.weights(u, v) += mdp.transition(static_cast<StateId>(u), a, static_cast<StateId>(v));
    g.degrees = g.weights.rowwise().sum();
    g.distribution = g.degrees / g.degrees.sum();
    return g;
}

CheegerSandwich check_cheeger_sandwich(double h, double lambda, double tolerance) {
    CheegerSandwich out;
    const bool lower = lambda >= h * h / 2.0 - tolerance;
    out.chung_form_holds = lower && 2.0 * h >= lambda - tolerance;
    out.strict_form_holds = lower && h >= lambda - tolerance;
    return out;
}

}  // namespace mdpx
