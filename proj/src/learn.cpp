#include "mdpx/learn.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "mdpx/rng.hpp"
#include "mdpx/sim.hpp"

namespace mdpx {

namespace {

struct SparseRows {
    struct Entry {
        StateId next;
        double prob;
    };
    std::vector<std::size_t> offsets;
    std::vector<Entry> entries;

    explicit SparseRows(const TabularMdp& mdp) {
        offsets.push_back(0);
        for (StateId s = 0; s < mdp.num_states(); ++s) {
            for (ActionId a = 0; a < mdp.num_actions(); ++a) {
                auto row = mdp.next_state_distribution(s, a);
                for (StateId t = 0; t < row.size(); ++t)
                    if (row[t] > 0.0) entries.push_back({t, row[t]});
                offsets.push_back(entries.size());
            }
        }
    }
};

}  // namespace

OptimalSolution solve_optimal(const TabularMdp& mdp, double tol) {
    const auto S = static_cast<Eigen::Index>(mdp.num_states());
    const auto A = static_cast<Eigen::Index>(mdp.num_actions());
    const double gamma = mdp.gamma();
    if (!(gamma >= 0.0 && gamma < 1.0)) throw std::invalid_argument("solve_optimal needs gamma in [0,1)");

    QMatrix reward(S, A);
    for (Eigen::Index s = 0; s < S; ++s)
        for (Eigen::Index a = 0; a < A; ++a)
            reward(s, a) = mdp.reward(static_cast<StateId>(s), static_cast<ActionId>(a));

    OptimalSolution out;
    if (gamma == 0.0) {
        out.q = reward;
        out.v = out.q.rowwise().maxCoeff();
        out.iterations = 1;
        return out;
    }

    const SparseRows rows(mdp);
    const double threshold = tol * (1.0 - gamma) / (2.0 * gamma);
    QMatrix q = QMatrix::Zero(S, A);
    Eigen::VectorXd v = Eigen::VectorXd::Zero(S);
    QMatrix next(S, A);
    for (long iter = 1;; ++iter) {
        for (Eigen::Index s = 0; s < S; ++s) {
            for (Eigen::Index a = 0; a < A; ++a) {
                const std::size_t row = static_cast<std::size_t>(s * A + a);
                double expect = 0.0;
                for (std::size_t i = rows.offsets[row]; i < rows.offsets[row + 1]; ++i) {
                    expect += rows.entries[i].prob * v(static_cast<Eigen::Index>(rows.entries[i].next));
                }
                next(s, a) = reward(s, a) + gamma * expect;
            }
        }
        const double residual = (next - q).cwiseAbs().maxCoeff();
        q.swap(next);
        v = q.rowwise().maxCoeff();
        if (residual <= threshold) {
            out.iterations = iter;
            break;
        }
    }
    out.q = std::move(q);
    out.v = std::move(v);
    return out;
}

Policy deterministic_policy(const std::vector<ActionId>& actions, std::size_t num_actions) {
    Policy pi = Policy::Zero(static_cast<Eigen::Index>(actions.size()), static_cast<Eigen::Index>(num_actions));
    for (std::size_t s = 0; s < actions.size(); ++s) {
        if (actions[s] >= num_actions) throw std::invalid_argument("policy action out of range");
        pi(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(actions[s])) = 1.0;
    }
    return pi;
}

Eigen::VectorXd policy_value(const TabularMdp& mdp, const Policy& policy) {
    const auto S = static_cast<Eigen::Index>(mdp.num_states());
    const auto A = static_cast<Eigen::Index>(mdp.num_actions());
    if (policy.rows() != S || policy.cols() != A) throw std::invalid_argument("policy has the wrong shape");
    if (!(mdp.gamma() >= 0.0 && mdp.gamma() < 1.0)) throw std::invalid_argument("policy_value needs gamma < 1");
    Eigen::MatrixXd p_pi = Eigen::MatrixXd::Zero(S, S);
    Eigen::VectorXd r_pi = Eigen::VectorXd::Zero(S);
    for (Eigen::Index s = 0; s < S; ++s) {
        for (Eigen::Index a = 0; a < A; ++a) {
            const double w = policy(s, a);
            if (w == 0.0) continue;
            r_pi(s) += w * mdp.reward(static_cast<StateId>(s), static_cast<ActionId>(a));
            auto row = mdp.next_state_distribution(static_cast<StateId>(s), static_cast<ActionId>(a));
            for (Eigen::Index t = 0; t < S; ++t) p_pi(s, t) += w * row[static_cast<std::size_t>(t)];
        }
    }
    Eigen::MatrixXd system = Eigen::MatrixXd::Identity(S, S) - mdp.gamma() * p_pi;
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(system);
    Eigen::VectorXd v = lu.solve(r_pi);
    if (!v.allFinite()) throw std::runtime_error("policy_value: singular system");
    return v;
}

std::vector<ActionId> greedy_policy(const QMatrix& q) {
    std::vector<ActionId> pi(static_cast<std::size_t>(q.rows()), 0);
    for (Eigen::Index s = 0; s < q.rows(); ++s) {
        Eigen::Index best = 0;
        for (Eigen::Index a = 1; a < q.cols(); ++a)
            if (q(s, a) > q(s, best)) best = a;
        pi[static_cast<std::size_t>(s)] = static_cast<ActionId>(best);
    }
    return pi;
}

QTable q_learning_random_walk(const TabularMdp& mdp, std::size_t steps, double omega, std::uint64_t seed,
                              const std::optional<QMatrix>& q0) {
    if (!(omega > 0.0 && omega < 1.0)) throw std::invalid_argument("omega must be in (0,1)");
    if (steps < 1) throw std::invalid_argument("steps must be >= 1");
    const std::size_t S = mdp.num_states();
    const std::size_t A = mdp.num_actions();
    const double gamma = mdp.gamma();

    QTable table;
    table.omega = omega;
    if (q0) {
        if (q0->rows() != static_cast<Eigen::Index>(S) || q0->cols() != static_cast<Eigen::Index>(A)) {
            throw std::invalid_argument("q0 has the wrong shape");
        }
        table.values = *q0;
    } else {
        table.values = QMatrix::Zero(static_cast<Eigen::Index>(S), static_cast<Eigen::Index>(A));
    }
    table.visit_counts.setZero(static_cast<Eigen::Index>(S), static_cast<Eigen::Index>(A));

    const TransitionSampler sampler(mdp);
    auto rng = stream_rng(seed, 0);
    StateId s = static_cast<StateId>(uniform_index(rng, S));
    auto& q = table.values;
    for (std::size_t t = 0; t < steps; ++t) {
        const auto a = static_cast<ActionId>(uniform_index(rng, A));
        const StateId next = sampler.next(s, a, rng);
        const auto si = static_cast<Eigen::Index>(s);
        const auto ai = static_cast<Eigen::Index>(a);
        const auto count = ++table.visit_counts(si, ai);
        const double alpha = std::pow(static_cast<double>(count), -omega);
        const double target = mdp.reward(s, a) + gamma * q.row(static_cast<Eigen::Index>(next)).maxCoeff();
        q(si, ai) = (1.0 - alpha) * q(si, ai) + alpha * target;
        s = next;
    }
    return table;
}

ExploitReport explore_then_exploit(const TabularMdp& mdp, std::size_t steps, double omega, double epsilon,
                                   std::uint64_t seed) {
    const QTable learned = q_learning_random_walk(mdp, steps, omega, seed);
    const OptimalSolution optimal = solve_optimal(mdp, 1e-10);
    ExploitReport report;
    report.epsilon = epsilon;
    report.steps_used = steps;
    report.seed = seed;
    report.q_error = (learned.values - optimal.q).cwiseAbs().maxCoeff();
    report.policy = greedy_policy(learned.values);
    const Eigen::VectorXd v_pi = policy_value(mdp, deterministic_policy(report.policy, mdp.num_actions()));
    report.value_gap = (optimal.v - v_pi).cwiseAbs().maxCoeff();
    report.success = report.value_gap <= epsilon;
    return report;
}

}  // namespace mdpx
