#include "mdpx/bounds.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>

#include "mdpx/parallel.hpp"

namespace mdpx {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double cover_prefactor(std::size_t S, std::size_t A) {
    const double sa = static_cast<double>(S) * static_cast<double>(A);
    return static_cast<double>(A) * std::log(4.0 * sa);
}

}  // namespace

double k0(double phi_min, double lambda) {
    if (!(phi_min > 0.0 && phi_min <= 1.0)) throw std::invalid_argument("k0: phi_min must be in (0,1]");
    if (!(lambda > 0.0 && lambda <= 2.0 + 1e-8)) throw std::invalid_argument("k0: lambda must be in (0,2]");
    if (lambda >= 2.0 - 1e-8) return 1.0;
    return 2.0 * std::log(2.0 / phi_min) / std::log(2.0 / (2.0 - lambda)) + 1.0;
}

double laplacian_cover_bound(const Eigen::VectorXd& phi, double lambda, std::size_t num_states,
                             std::size_t num_actions) {
    if (!(lambda > 0.0)) {
        throw std::invalid_argument("Laplacian cover bound needs lambda > 0 (reducible or degenerate chain)");
    }
    if (phi.size() == 0 || !(phi.array() > 0.0).all()) {
        throw std::invalid_argument("Laplacian cover bound needs phi > 0");
    }
    const double inv_sum = phi.cwiseInverse().sum();
    return 8.0 * cover_prefactor(num_states, num_actions) * k0(phi.minCoeff(), lambda) * inv_sum;
}

double reach_prob_lower_bound(StateId u, StateId v, double k, const Eigen::VectorXd& phi, double lambda) {
    const double pu = phi(static_cast<Eigen::Index>(u));
    const double pv = phi(static_cast<Eigen::Index>(v));
    const double base = std::max(0.0, 1.0 - lambda / 2.0);
    return pv - std::sqrt(pv / pu) * std::pow(base, k / 2.0);
}

double diameter(const TabularMdp& mdp, const DiameterOptions& options) {
    const std::size_t S = mdp.num_states();
    const std::size_t A = mdp.num_actions();
    if (S == 1) return 0.0;

    struct Entry {
        StateId next;
        double prob;
    };
    std::vector<std::vector<Entry>> rows(S * A);
    std::vector<std::vector<StateId>> predecessors(S);
    for (StateId s = 0; s < S; ++s) {
        for (ActionId a = 0; a < A; ++a) {
            for (StateId t = 0; t < S; ++t) {
                if (double p = mdp.transition(s, a, t); p > 0.0) {
                    rows[s * A + a].push_back({t, p});
                    predecessors[t].push_back(s);
                }
            }
        }
    }

    std::vector<double> per_target(S, 0.0);
    std::vector<std::string> failures(S);
    parallel_for(S, [&](std::size_t target) {
        // Reachability pre-check on reversed edges.
        std::vector<bool> reaches(S, false);
        std::queue<StateId> q;
        reaches[target] = true;
        q.push(target);
        std::size_t count = 1;
        while (!q.empty()) {
            StateId t = q.front();
            q.pop();
            for (StateId s : predecessors[t]) {
                if (!reaches[s]) {
                    reaches[s] = true;
                    ++count;
                    q.push(s);
                }
            }
        }
        if (count < S) {
            per_target[target] = kInf;
            return;
        }
        std::vector<double> h(S, 0.0), next(S, 0.0);
        for (long iter = 0; iter < options.max_iter; ++iter) {
            double change = 0.0;
            for (StateId s = 0; s < S; ++s) {
                if (s == target) continue;
                double best = kInf;
                for (ActionId a = 0; a < A; ++a) {
                    double v = 0.0;
                    for (const auto& e : rows[s * A + a]) v += e.prob * h[e.next];
                    best = std::min(best, v);
                }
                next[s] = 1.0 + best;
                change = std::max(change, std::abs(next[s] - h[s]));
            }
            std::swap(h, next);
            if (change <= options.tol) {
                per_target[target] = *std::max_element(h.begin(), h.end());
                return;
            }
        }
        failures[target] = "diameter: value iteration for target " + std::to_string(target) +
                           " did not converge in " + std::to_string(options.max_iter) + " iterations";
    });
    for (const auto& f : failures)
        if (!f.empty()) throw std::runtime_error(f);
    return *std::max_element(per_target.begin(), per_target.end());
}

double action_variation(const TabularMdp& mdp) {
    const std::size_t S = mdp.num_states();
    const std::size_t A = mdp.num_actions();
    double worst = 0.0;
    // T_a - mean = sum_b (T_a - T_b) / A, so identical actions give exactly 0.
    for (StateId s = 0; s < S; ++s) {
        for (ActionId a = 0; a < A; ++a) {
            auto row = mdp.next_state_distribution(s, a);
            double l1 = 0.0;
            for (StateId t = 0; t < S; ++t) {
                double diff = 0.0;
                for (ActionId b = 0; b < A; ++b) diff += row[t] - mdp.transition(s, b, t);
                l1 += std::abs(diff);
            }
            worst = std::max(worst, l1 / static_cast<double>(A));
        }
    }
    return worst;
}

std::optional<double> action_variation_cover_bound(double diameter, double delta_p, std::size_t num_states,
                                                   std::size_t num_actions, double c) {
    if (!std::isfinite(diameter)) throw std::invalid_argument("action-variation bound needs a finite diameter");
    const double d = std::max(diameter, 1.0);
    if (delta_p > 2.0 / (5.0 * d)) return std::nullopt;
    const double S = static_cast<double>(num_states);
    const double A = static_cast<double>(num_actions);
    return c * 5.0 * d * S * (A * std::log(4.0 * S * A) + std::log(4.0 * S));
}

namespace {

// P with row and column v removed.
Eigen::MatrixXd without(const Eigen::MatrixXd& p, StateId v) {
    const Eigen::Index n = p.rows();
    const auto k = static_cast<Eigen::Index>(v);
    Eigen::MatrixXd out(n - 1, n - 1);
    for (Eigen::Index i = 0, oi = 0; i < n; ++i) {
        if (i == k) continue;
        for (Eigen::Index j = 0, oj = 0; j < n; ++j) {
            if (j == k) continue;
            out(oi, oj++) = p(i, j);
        }
        ++oi;
    }
    return out;
}

}  // namespace

HittingTimes hitting_time_exact(const TransitionMatrix& p, StateId v) {
    const std::size_t n = p.size();
    if (v >= n) throw std::invalid_argument("hitting_time_exact: target out of range");
    require_irreducible(p);
    HittingTimes out;
    out.expected = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
    if (n == 1) return out;
    Eigen::MatrixXd sub = without(p.matrix(), v);
    Eigen::MatrixXd system = Eigen::MatrixXd::Identity(sub.rows(), sub.cols()) - sub;
    Eigen::FullPivLU<Eigen::MatrixXd> lu(system);
    if (!lu.isInvertible()) throw std::runtime_error("hitting_time_exact: singular system");
    Eigen::VectorXd x = lu.solve(Eigen::VectorXd::Ones(sub.rows()));
    for (Eigen::Index i = 0, oi = 0; i < static_cast<Eigen::Index>(n); ++i) {
        if (i == static_cast<Eigen::Index>(v)) continue;
        out.expected(i) = x(oi++);
    }
    out.max = out.expected.maxCoeff();
    return out;
}

std::string to_string(MatrixNorm n) {
    switch (n) {
        case MatrixNorm::One:
            return "1";
        case MatrixNorm::Two:
            return "2";
        case MatrixNorm::Inf:
            return "inf";
    }
    return "?";
}

SubmatrixBound submatrix_cover_bound(const TransitionMatrix& p, std::size_t num_actions,
                                     std::span<const MatrixNorm> p_set) {
    static constexpr std::array<MatrixNorm, 3> kAll{MatrixNorm::One, MatrixNorm::Two, MatrixNorm::Inf};
    if (p_set.empty()) p_set = kAll;
    const bool want_one = std::find(p_set.begin(), p_set.end(), MatrixNorm::One) != p_set.end();
    const bool want_two = std::find(p_set.begin(), p_set.end(), MatrixNorm::Two) != p_set.end();
    const bool want_inf = std::find(p_set.begin(), p_set.end(), MatrixNorm::Inf) != p_set.end();

    const std::size_t n = p.size();
    const double S = static_cast<double>(n);
    SubmatrixBound out;
    out.terms.resize(n);
    parallel_for(n, [&](std::size_t v) {
        SubmatrixTerm term;
        term.target = v;
        Eigen::MatrixXd sub = without(p.matrix(), v);
        if (sub.size() > 0) {
            term.norm_one = sub.rowwise().sum().maxCoeff();
            term.norm_inf = sub.colwise().sum().maxCoeff();
            if (want_two) {
                Eigen::JacobiSVD<Eigen::MatrixXd> svd(sub);
                term.norm_two = svd.singularValues()(0);
            }
        }
        term.best = kInf;
        auto consider = [&](bool wanted, double norm, double scale, MatrixNorm which) {
            if (!wanted || !(norm < 1.0)) return;
            const double value = scale / (1.0 - norm);
            if (value < term.best) {
                term.best = value;
                term.best_norm = which;
            }
        };
        consider(want_one, term.norm_one, 1.0, MatrixNorm::One);
        consider(want_two, term.norm_two, std::sqrt(S), MatrixNorm::Two);
        consider(want_inf, term.norm_inf, S, MatrixNorm::Inf);
        out.terms[v] = term;
    });
    double total = 0.0;
    for (const auto& t : out.terms) total += t.best;
    out.value = 4.0 * cover_prefactor(n, num_actions) * total;
    return out;
}

double pmin_cover_bound(const TransitionMatrix& p, std::size_t num_actions) {
    const std::size_t n = p.size();
    double p_min = 1.0;
    for (StateId u = 0; u < n; ++u) {
        for (StateId v = 0; v < n; ++v) {
            if (u == v) continue;
            if (!(p(u, v) > 0.0)) return kInf;
            p_min = std::min(p_min, p(u, v));
        }
    }
    return 4.0 * static_cast<double>(n) * cover_prefactor(n, num_actions) / p_min;
}

double q_learning_T0(const T0Inputs& in) {
    if (!(in.omega > 0.0 && in.omega < 1.0)) throw std::invalid_argument("T0: omega must be in (0,1)");
    if (!(in.epsilon > 0.0 && in.epsilon < 1.0)) throw std::invalid_argument("T0: epsilon must be in (0,1)");
    if (!(in.delta > 0.0 && in.delta < 1.0)) throw std::invalid_argument("T0: delta must be in (0,1)");
    if (!(in.gamma >= 0.0 && in.gamma < 1.0)) throw std::invalid_argument("T0: gamma must be in [0,1)");
    if (!(in.cover_length >= 1.0)) throw std::invalid_argument("T0: covering length must be >= 1");
    if (!(in.v_max > in.epsilon)) throw std::invalid_argument("T0: v_max must exceed epsilon");
    if (!(in.c > 0.0)) throw std::invalid_argument("T0: constant must be positive");
    const double L = in.cover_length;
    const double V = in.v_max;
    const double w = in.omega;
    const double horizon = 1.0 - in.gamma;
    const double sa = static_cast<double>(in.num_states) * static_cast<double>(in.num_actions);
    const double log1 = std::log(sa * V / (in.delta * horizon * in.epsilon));
    const double term1 = std::pow(L, 1.0 + 3.0 * w) * V * V * log1 / (horizon * horizon * in.epsilon * in.epsilon);
    const double term2 = L / horizon * std::log(V / in.epsilon);
    return in.c * (std::pow(term1, 1.0 / w) + std::pow(term2, 1.0 / (1.0 - w)));
}

HardnessReport hardness_report(const TabularMdp& mdp, const HardnessOptions& options) {
    HardnessReport r;
    r.options = options;
    r.num_states = mdp.num_states();
    r.num_actions = mdp.num_actions();
    if (r.num_states < 2) throw std::invalid_argument("hardness report needs at least two states");

    const TransitionMatrix p = random_walk_matrix(mdp);
    require_irreducible(p);
    r.irreducible = true;

    r.stationary = stationary_distribution(p);
    const SpectralSummary spectrum = chung_laplacian(p, r.stationary);
    r.lambda = spectrum.lambda;
    r.inv_lambda = 1.0 / r.lambda;
    r.inv_phi_min = 1.0 / r.stationary.phi_min;
    if (options.compute_cheeger && r.num_states <= kMaxCheegerStates) {
        r.cheeger = cheeger_constant(p, r.stationary);
        r.sandwich = check_cheeger_sandwich(r.cheeger->h, r.lambda);
    }
    r.local_symmetry = locally_symmetric(mdp);
    r.diameter = diameter(mdp, options.diameter);
    r.action_variation = action_variation(mdp);
    r.k0 = k0(r.stationary.phi_min, r.lambda);
    r.laplacian_cover_bound = laplacian_cover_bound(r.stationary.phi, r.lambda, r.num_states, r.num_actions);
    if (std::isfinite(r.diameter)) {
        r.action_variation_cover_bound = action_variation_cover_bound(
            r.diameter, r.action_variation, r.num_states, r.num_actions, options.action_variation_c);
    }
    r.submatrix_cover_bound = submatrix_cover_bound(p, r.num_actions);
    r.pmin_cover_bound = pmin_cover_bound(p, r.num_actions);

    r.v_max = options.v_max.value_or(mdp.r_max() / (1.0 - mdp.gamma()));
    double L = r.laplacian_cover_bound;
    r.t0_cover_source = "laplacian_cover_bound";
    if (r.submatrix_cover_bound.value < L) {
        L = r.submatrix_cover_bound.value;
        r.t0_cover_source = "submatrix_cover_bound";
    }
    if (r.pmin_cover_bound < L) {
        L = r.pmin_cover_bound;
        r.t0_cover_source = "pmin_cover_bound";
    }
    try {
        T0Inputs in;
        in.cover_length = L;
        in.v_max = r.v_max;
        in.gamma = mdp.gamma();
        in.epsilon = options.epsilon;
        in.delta = options.delta;
        in.omega = options.omega;
        in.num_states = r.num_states;
        in.num_actions = r.num_actions;
        in.c = options.t0_c;
        r.q_learning_T0 = q_learning_T0(in);
    } catch (const std::invalid_argument& e) {
        r.t0_error = e.what();
    }
    return r;
}

}  // namespace mdpx
