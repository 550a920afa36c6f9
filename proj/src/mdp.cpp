#include "mdpx/mdp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace mdpx {

TabularMdp::TabularMdp(std::size_t num_states, std::size_t num_actions,
                       std::vector<double> transitions, std::vector<double> rewards,
                       double r_max, double gamma, std::vector<std::string> labels)
    : num_states_(num_states),
      num_actions_(num_actions),
      transitions_(std::move(transitions)),
      rewards_(std::move(rewards)),
      r_max_(r_max),
      gamma_(gamma),
      labels_(std::move(labels)) {
    if (num_states_ == 0 || num_actions_ == 0) {
        throw std::invalid_argument("MDP needs at least one state and one action");
    }
    if (transitions_.size() != num_states_ * num_actions_ * num_states_) {
        throw std::invalid_argument("transition tensor has " + std::to_string(transitions_.size()) +
                                    " entries, expected S*A*S = " +
                                    std::to_string(num_states_ * num_actions_ * num_states_));
    }
    if (rewards_.size() != num_states_ * num_actions_) {
        throw std::invalid_argument("reward matrix has " + std::to_string(rewards_.size()) +
                                    " entries, expected S*A = " +
                                    std::to_string(num_states_ * num_actions_));
    }
    if (!labels_.empty() && labels_.size() != num_states_) {
        throw std::invalid_argument("labels must be empty or one per state");
    }
}

std::string TabularMdp::label(StateId s) const {
    if (!labels_.empty()) return labels_[s];
    return "s" + std::to_string(s);
}

TabularMdp TabularMdp::renormalized() const {
    std::vector<double> t = transitions_;
    for (std::size_t row = 0; row < num_states_ * num_actions_; ++row) {
        auto first = t.begin() + static_cast<std::ptrdiff_t>(row * num_states_);
        auto last = first + static_cast<std::ptrdiff_t>(num_states_);
        double total = std::accumulate(first, last, 0.0);
        if (total > 0.0) {
            std::for_each(first, last, [total](double& x) { x /= total; });
        }
    }
    return TabularMdp(num_states_, num_actions_, std::move(t), rewards_, r_max_, gamma_, labels_);
}

std::string ValidationReport::summary(std::size_t max_items) const {
    if (ok()) return "valid";
    std::ostringstream os;
    os << violations.size() << " violation(s)";
    for (std::size_t i = 0; i < violations.size() && i < max_items; ++i) {
        const auto& v = violations[i];
        os << "; (s=" << v.state << ", a=" << v.action << "): " << v.message;
    }
    if (violations.size() > max_items) os << "; ...";
    return os.str();
}

ValidationReport validate_mdp(const TabularMdp& mdp) {
    ValidationReport report;
    const auto S = mdp.num_states();
    const auto A = mdp.num_actions();
    if (!(mdp.gamma() >= 0.0 && mdp.gamma() < 1.0)) {
        report.violations.push_back({0, 0, "gamma " + std::to_string(mdp.gamma()) + " not in [0,1)"});
    }
    if (!(mdp.r_max() >= 0.0)) {
        report.violations.push_back({0, 0, "r_max must be nonnegative"});
    }
    for (StateId s = 0; s < S; ++s) {
        for (ActionId a = 0; a < A; ++a) {
            double total = 0.0;
            bool out_of_range = false;
            for (double p : mdp.next_state_distribution(s, a)) {
                if (!(p >= 0.0 && p <= 1.0)) out_of_range = true;
                total += p;
            }
            if (out_of_range) {
                report.violations.push_back({s, a, "entry out of [0,1]"});
            }
            if (!(std::abs(total - 1.0) <= kProbabilityTolerance)) {
                std::ostringstream os;
                os.precision(17);
                os << "row sums to " << total << ", expected 1";
                report.violations.push_back({s, a, os.str()});
            }
            double r = mdp.reward(s, a);
            if (!(r >= 0.0 && r <= mdp.r_max())) {
                std::ostringstream os;
                os << "reward " << r << " not in [0, r_max=" << mdp.r_max() << "]";
                report.violations.push_back({s, a, os.str()});
            }
        }
    }
    return report;
}

TransitionMatrix::TransitionMatrix(Eigen::MatrixXd entries, double tolerance)
    : entries_(std::move(entries)) {
    if (entries_.rows() != entries_.cols() || entries_.rows() == 0) {
        throw std::invalid_argument("transition matrix must be square and non-empty");
    }
    for (Eigen::Index i = 0; i < entries_.rows(); ++i) {
        if ((entries_.row(i).array() < 0.0).any() || !entries_.row(i).allFinite()) {
            throw std::invalid_argument("transition matrix row " + std::to_string(i) +
                                        " has a negative or non-finite entry");
        }
        if (std::abs(entries_.row(i).sum() - 1.0) > tolerance) {
            throw std::invalid_argument("transition matrix row " + std::to_string(i) +
                                        " does not sum to 1");
        }
    }
}

std::string ComponentStructure::describe() const {
    std::ostringstream os;
    os << components.size() << " strongly connected component(s); closed:";
    for (std::size_t c = 0; c < closed_components.size(); ++c) {
        os << " [" << c << "]={";
        for (std::size_t i = 0; i < closed_components[c].size(); ++i) {
            if (i) os << ",";
            os << closed_components[c][i];
        }
        os << "}";
    }
    return os.str();
}

InvalidMdpError::InvalidMdpError(ValidationReport report)
    : std::runtime_error("invalid MDP: " + report.summary()), report_(std::move(report)) {}

ReducibleChainError::ReducibleChainError(ComponentStructure structure)
    : std::runtime_error("random-walk chain is reducible: " + structure.describe()),
      structure_(std::move(structure)) {}

TransitionMatrix random_walk_matrix(const TabularMdp& mdp) {
    auto report = validate_mdp(mdp);
    if (!report.ok()) throw InvalidMdpError(std::move(report));
    const auto S = static_cast<Eigen::Index>(mdp.num_states());
    const auto A = mdp.num_actions();
    Eigen::MatrixXd p = Eigen::MatrixXd::Zero(S, S);
    for (Eigen::Index s = 0; s < S; ++s) {
        for (ActionId a = 0; a < A; ++a) {
            auto row = mdp.next_state_distribution(static_cast<StateId>(s), a);
            for (Eigen::Index t = 0; t < S; ++t) p(s, t) += row[static_cast<std::size_t>(t)];
        }
    }
    p /= static_cast<double>(A);
    return TransitionMatrix(std::move(p));
}

TransitionMatrix lazy_matrix(const TransitionMatrix& p) {
    const auto n = p.matrix().rows();
    Eigen::MatrixXd lazy = 0.5 * (Eigen::MatrixXd::Identity(n, n) + p.matrix());
    return TransitionMatrix(std::move(lazy));
}

namespace {

// Iterative Tarjan.
std::vector<std::size_t> tarjan(const std::vector<std::vector<StateId>>& adj) {
    const std::size_t n = adj.size();
    constexpr std::size_t kUnvisited = static_cast<std::size_t>(-1);
    std::vector<std::size_t> index(n, kUnvisited), low(n, 0), comp(n, kUnvisited);
    std::vector<bool> on_stack(n, false);
    std::vector<StateId> stack;
    std::size_t counter = 0, next_comp = 0;

    struct Frame {
        StateId v;
        std::size_t edge;
    };
    std::vector<Frame> call;
    for (StateId root = 0; root < n; ++root) {
        if (index[root] != kUnvisited) continue;
        call.push_back({root, 0});
        index[root] = low[root] = counter++;
        stack.push_back(root);
        on_stack[root] = true;
        while (!call.empty()) {
            Frame& f = call.back();
            if (f.edge < adj[f.v].size()) {
                StateId w = adj[f.v][f.edge++];
                if (index[w] == kUnvisited) {
                    index[w] = low[w] = counter++;
                    stack.push_back(w);
                    on_stack[w] = true;
                    call.push_back({w, 0});
                } else if (on_stack[w]) {
                    low[f.v] = std::min(low[f.v], index[w]);
                }
                continue;
            }
            StateId v = f.v;
            call.pop_back();
            if (!call.empty()) low[call.back().v] = std::min(low[call.back().v], low[v]);
            if (low[v] == index[v]) {
                StateId w;
                do {
                    w = stack.back();
                    stack.pop_back();
                    on_stack[w] = false;
                    comp[w] = next_comp;
                } while (w != v);
                ++next_comp;
            }
        }
    }
    return comp;
}

}  // namespace

ComponentStructure component_structure(const TransitionMatrix& p) {
    const std::size_t n = p.size();
    std::vector<std::vector<StateId>> adj(n);
    for (StateId u = 0; u < n; ++u)
        for (StateId v = 0; v < n; ++v)
            if (p(u, v) > 0.0) adj[u].push_back(v);

    auto raw = tarjan(adj);

    // Renumber components by their smallest member.
    ComponentStructure cs;
    cs.component_id.assign(n, 0);
    std::vector<std::size_t> remap(n, static_cast<std::size_t>(-1));
    for (StateId s = 0; s < n; ++s) {
        if (remap[raw[s]] == static_cast<std::size_t>(-1)) {
            remap[raw[s]] = cs.components.size();
            cs.components.emplace_back();
        }
        cs.component_id[s] = remap[raw[s]];
        cs.components[cs.component_id[s]].push_back(s);
    }
    for (std::size_t c = 0; c < cs.components.size(); ++c) {
        bool closed = true;
        for (StateId u : cs.components[c]) {
            for (StateId v : adj[u]) {
                if (cs.component_id[v] != c) closed = false;
            }
        }
        if (closed) cs.closed_components.push_back(cs.components[c]);
    }
    cs.is_strongly_connected = cs.components.size() == 1;
    return cs;
}

void require_irreducible(const TransitionMatrix& p) {
    auto cs = component_structure(p);
    if (!cs.is_strongly_connected) throw ReducibleChainError(std::move(cs));
}

TabularMdp restrict_to_states(const TabularMdp& mdp, std::span<const StateId> states) {
    const std::size_t S = mdp.num_states();
    const std::size_t A = mdp.num_actions();
    const std::size_t k = states.size();
    if (k == 0) throw std::invalid_argument("cannot restrict to an empty state set");
    constexpr std::size_t kAbsent = static_cast<std::size_t>(-1);
    std::vector<std::size_t> position(S, kAbsent);
    for (std::size_t i = 0; i < k; ++i) {
        if (states[i] >= S) throw std::invalid_argument("state index out of range");
        position[states[i]] = i;
    }
    std::vector<double> t(k * A * k, 0.0);
    std::vector<double> r(k * A, 0.0);
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < k; ++i) {
        const StateId s = states[i];
        labels.push_back(mdp.label(s));
        for (ActionId a = 0; a < A; ++a) {
            r[i * A + a] = mdp.reward(s, a);
            for (StateId next = 0; next < S; ++next) {
                double prob = mdp.transition(s, a, next);
                if (prob == 0.0) continue;
                if (position[next] == kAbsent) {
                    throw std::invalid_argument("state set is not closed: " + mdp.label(s) +
                                                " leaves it under action " + std::to_string(a));
                }
                t[(i * A + a) * k + position[next]] = prob;
            }
        }
    }
    return TabularMdp(k, A, std::move(t), std::move(r), mdp.r_max(), mdp.gamma(), std::move(labels));
}

}  // namespace mdpx
