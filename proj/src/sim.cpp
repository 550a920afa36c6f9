#include "mdpx/sim.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "mdpx/parallel.hpp"
#include "mdpx/rng.hpp"

namespace mdpx {

TransitionSampler::TransitionSampler(const TabularMdp& mdp)
    : num_states_(mdp.num_states()), num_actions_(mdp.num_actions()) {
    offsets_.push_back(0);
    for (StateId s = 0; s < num_states_; ++s)
        for (ActionId a = 0; a < num_actions_; ++a) add_row(mdp.next_state_distribution(s, a));
}

TransitionSampler::TransitionSampler(const TransitionMatrix& p) : num_states_(p.size()), num_actions_(1) {
    offsets_.push_back(0);
    std::vector<double> row(num_states_);
    for (StateId s = 0; s < num_states_; ++s) {
        for (StateId t = 0; t < num_states_; ++t) row[t] = p(s, t);
        add_row(row);
    }
}

void TransitionSampler::add_row(std::span<const double> probs) {
    double cumulative = 0.0;
    for (StateId t = 0; t < probs.size(); ++t) {
        if (probs[t] > 0.0) {
            cumulative += probs[t];
            entries_.push_back({t, cumulative});
        }
    }
    if (offsets_.back() == entries_.size()) throw std::invalid_argument("sampler: row without support");
    // Normalize so the last cumulative value is exactly 1.
    for (std::size_t i = offsets_.back(); i < entries_.size(); ++i) entries_[i].cumulative /= cumulative;
    entries_.back().cumulative = 1.0;
    offsets_.push_back(entries_.size());
}

StateId TransitionSampler::next(StateId s, ActionId a, std::mt19937_64& rng) const {
    const std::size_t row = s * num_actions_ + a;
    const double u = uniform01(rng);
    const std::size_t end = offsets_[row + 1];
    for (std::size_t i = offsets_[row]; i < end; ++i) {
        if (u < entries_[i].cumulative) return entries_[i].next;
    }
    return entries_[end - 1].next;
}

Trajectory simulate_random_walk(const TabularMdp& mdp, StateId start_state, ActionId start_action,
                                std::size_t horizon, std::uint64_t seed) {
    if (start_state >= mdp.num_states() || start_action >= mdp.num_actions()) {
        throw std::invalid_argument("simulate_random_walk: start pair out of range");
    }
    const TransitionSampler sampler(mdp);
    auto rng = stream_rng(seed, 0);
    Trajectory traj;
    traj.seed = seed;
    traj.length = horizon;
    traj.states.reserve(horizon + 1);
    traj.actions.reserve(horizon);
    StateId s = start_state;
    ActionId a = start_action;
    traj.states.push_back(s);
    for (std::size_t t = 0; t < horizon; ++t) {
        if (t > 0) a = static_cast<ActionId>(uniform_index(rng, mdp.num_actions()));
        traj.actions.push_back(a);
        s = sampler.next(s, a, rng);
        traj.states.push_back(s);
    }
    return traj;
}

namespace {

// Actions taken until every pair is covered, or horizon + 1.
std::size_t cover_time(const TransitionSampler& sampler, StateId s, ActionId a, std::size_t horizon,
                       std::mt19937_64& rng, std::vector<char>& seen) {
    const std::size_t A = sampler.num_actions();
    const std::size_t pairs = sampler.num_states() * A;
    std::fill(seen.begin(), seen.end(), 0);
    std::size_t covered = 0;
    for (std::size_t t = 1; t <= horizon; ++t) {
        char& flag = seen[s * A + a];
        if (!flag) {
            flag = 1;
            if (++covered == pairs) return t;
        }
        s = sampler.next(s, a, rng);
        a = static_cast<ActionId>(uniform_index(rng, A));
    }
    return horizon + 1;
}

}  // namespace

CoverLengthEstimate estimate_cover_length(const TabularMdp& mdp, std::size_t trials, std::size_t horizon,
                                          std::uint64_t seed) {
    if (trials < 1) throw std::invalid_argument("estimate_cover_length: trials must be >= 1");
    if (horizon < 1) throw std::invalid_argument("estimate_cover_length: horizon must be >= 1");
    const TransitionSampler sampler(mdp);
    const std::size_t A = mdp.num_actions();
    const std::size_t starts = mdp.num_states() * A;

    std::vector<std::size_t> times(starts * trials);
    parallel_for(starts, [&](std::size_t start) {
        std::vector<char> seen(starts);
        for (std::size_t trial = 0; trial < trials; ++trial) {
            const std::size_t stream = start * trials + trial;
            auto rng = stream_rng(seed, stream);
            times[stream] = cover_time(sampler, start / A, start % A, horizon, rng, seen);
        }
    });

    CoverLengthEstimate est;
    est.trials = trials;
    est.horizon = horizon;
    est.seed = seed;
    est.num_actions = A;
    est.per_start_median.resize(starts);
    std::size_t covered = 0;
    std::vector<std::size_t> block(trials);
    for (std::size_t start = 0; start < starts; ++start) {
        std::copy_n(times.begin() + static_cast<std::ptrdiff_t>(start * trials), trials, block.begin());
        for (auto t : block) covered += t <= horizon ? 1 : 0;
        const std::size_t q = (trials + 1) / 2 - 1;
        std::nth_element(block.begin(), block.begin() + static_cast<std::ptrdiff_t>(q), block.end());
        est.per_start_median[start] = static_cast<double>(block[q]);
    }
    est.estimate = *std::max_element(est.per_start_median.begin(), est.per_start_median.end());
    est.censored = est.estimate > static_cast<double>(horizon);
    est.covered_fraction_at_horizon = static_cast<double>(covered) / static_cast<double>(times.size());
    return est;
}

std::vector<double> exact_reach_prob_curve(const TransitionMatrix& p, StateId u, StateId v, std::size_t k_max) {
    const std::size_t n = p.size();
    if (u >= n || v >= n) throw std::invalid_argument("exact_reach_prob: state out of range");
    std::vector<double> curve(k_max + 1, 1.0);
    if (u == v) return curve;
    // Mass that has not yet visited v; v's entry is absorbed each step.
    Eigen::RowVectorXd alive = Eigen::RowVectorXd::Zero(static_cast<Eigen::Index>(n));
    alive(static_cast<Eigen::Index>(u)) = 1.0;
    curve[0] = 0.0;
    for (std::size_t k = 1; k <= k_max; ++k) {
        alive = (alive * p.matrix()).eval();
        alive(static_cast<Eigen::Index>(v)) = 0.0;
        curve[k] = 1.0 - alive.sum();
    }
    return curve;
}

double exact_reach_prob(const TransitionMatrix& p, StateId u, StateId v, std::size_t k) {
    return exact_reach_prob_curve(p, u, v, k).back();
}

double action_coverage_trial(std::size_t num_actions, std::size_t visits, std::size_t trials, std::uint64_t seed) {
    if (num_actions < 1 || trials < 1) throw std::invalid_argument("action_coverage_trial: A, trials must be >= 1");
    std::vector<char> failed(trials, 0);
    const std::size_t chunks = std::min<std::size_t>(trials, 64);
    parallel_for(chunks, [&](std::size_t c) {
        std::vector<char> drawn(num_actions);
        for (std::size_t trial = trials * c / chunks; trial < trials * (c + 1) / chunks; ++trial) {
            auto rng = stream_rng(seed, trial);
            std::fill(drawn.begin(), drawn.end(), 0);
            std::size_t distinct = 0;
            for (std::size_t i = 0; i < visits; ++i) {
                char& d = drawn[uniform_index(rng, num_actions)];
                if (!d) {
                    d = 1;
                    ++distinct;
                }
            }
            failed[trial] = distinct < num_actions;
        }
    });
    const auto failures = std::count(failed.begin(), failed.end(), 1);
    return static_cast<double>(failures) / static_cast<double>(trials);
}

HittingTimeSample estimate_hitting_time(const TransitionMatrix& p, StateId u, StateId v, std::size_t trials,
                                        std::uint64_t seed) {
    if (u == v) throw std::invalid_argument("estimate_hitting_time: u must differ from v");
    if (trials < 2) throw std::invalid_argument("estimate_hitting_time: need at least two trials");
    const TransitionSampler sampler(p);
    std::vector<double> samples(trials);
    const std::size_t chunks = std::min<std::size_t>(trials, 64);
    parallel_for(chunks, [&](std::size_t c) {
        for (std::size_t trial = trials * c / chunks; trial < trials * (c + 1) / chunks; ++trial) {
            auto rng = stream_rng(seed, trial);
            StateId s = u;
            std::size_t steps = 0;
            while (s != v) {
                s = sampler.next(s, rng);
                ++steps;
            }
            samples[trial] = static_cast<double>(steps);
        }
    });
    HittingTimeSample out;
    out.trials = trials;
    double sum = 0.0;
    for (double x : samples) sum += x;
    out.mean = sum / static_cast<double>(trials);
    double ss = 0.0;
    for (double x : samples) ss += (x - out.mean) * (x - out.mean);
    out.std_error = std::sqrt(ss / static_cast<double>(trials - 1) / static_cast<double>(trials));
    return out;
}

Eigen::VectorXd visit_frequencies(const TransitionMatrix& p, StateId start, std::size_t steps, std::uint64_t seed) {
    const TransitionSampler sampler(p);
    auto rng = stream_rng(seed, 0);
    Eigen::VectorXd counts = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(p.size()));
    StateId s = start;
    for (std::size_t t = 0; t < steps; ++t) {
        s = sampler.next(s, rng);
        counts(static_cast<Eigen::Index>(s)) += 1.0;
    }
    return counts / static_cast<double>(steps);
}

}  // namespace mdpx
