#pragma once
// Reference implementations that share no code with the library: plain
// vectors, textbook algorithms, no Eigen.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <queue>
#include <stdexcept>
#include <vector>

#include "mdpx/mdp.hpp"

namespace oracle {

using Vec = std::vector<double>;
using Mat = std::vector<std::vector<double>>;

inline Mat to_mat(const mdpx::TransitionMatrix& p) {
    const std::size_t n = p.size();
    Mat m(n, Vec(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m[i][j] = p(i, j);
    return m;
}

inline Mat walk(const mdpx::TabularMdp& mdp) {
    const std::size_t S = mdp.num_states(), A = mdp.num_actions();
    Mat m(S, Vec(S, 0.0));
    for (std::size_t s = 0; s < S; ++s)
        for (std::size_t a = 0; a < A; ++a)
            for (std::size_t t = 0; t < S; ++t) m[s][t] += mdp.transition(s, a, t) / static_cast<double>(A);
    return m;
}

// Gaussian elimination with partial pivoting.
inline Vec solve(Mat a, Vec b) {
    const std::size_t n = b.size();
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        for (std::size_t r = c + 1; r < n; ++r)
            if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
        if (std::abs(a[piv][c]) < 1e-300) throw std::runtime_error("oracle::solve: singular");
        std::swap(a[c], a[piv]);
        std::swap(b[c], b[piv]);
        for (std::size_t r = c + 1; r < n; ++r) {
            const double f = a[r][c] / a[c][c];
            for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
            b[r] -= f * b[c];
        }
    }
    Vec x(n);
    for (std::size_t i = n; i-- > 0;) {
        double acc = b[i];
        for (std::size_t k = i + 1; k < n; ++k) acc -= a[i][k] * x[k];
        x[i] = acc / a[i][i];
    }
    return x;
}

// Power iteration on the lazy chain (aperiodic for any irreducible P).
inline Vec stationary_power(const Mat& p, int iters = 200000, double tol = 1e-15) {
    const std::size_t n = p.size();
    Vec x(n, 1.0 / static_cast<double>(n)), y(n);
    for (int it = 0; it < iters; ++it) {
        for (std::size_t j = 0; j < n; ++j) {
            double acc = 0.5 * x[j];
            for (std::size_t i = 0; i < n; ++i) acc += 0.5 * x[i] * p[i][j];
            y[j] = acc;
        }
        double diff = 0.0;
        for (std::size_t j = 0; j < n; ++j) diff = std::max(diff, std::abs(y[j] - x[j]));
        x.swap(y);
        if (diff < tol) break;
    }
    return x;
}

// Stationary distribution by Gaussian elimination: phi (P - I) = 0 with the
// first equation replaced by normalization.
inline Vec stationary_solve(const Mat& p) {
    const std::size_t n = p.size();
    Mat a(n, Vec(n));
    Vec b(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) a[i][j] = p[j][i] - (i == j ? 1.0 : 0.0);
    for (std::size_t j = 0; j < n; ++j) a[0][j] = 1.0;
    b[0] = 1.0;
    return solve(a, b);
}

// Cheeger constant straight from the definition.
inline double cheeger(const Mat& p, const Vec& phi) {
    const std::size_t n = p.size();
    double best = std::numeric_limits<double>::infinity();
    for (unsigned long mask = 1; mask + 1 < (1ul << n); ++mask) {
        double inside = 0.0, total = 0.0, flow = 0.0;
        for (std::size_t u = 0; u < n; ++u) {
            total += phi[u];
            if (!(mask >> u & 1)) continue;
            inside += phi[u];
            for (std::size_t v = 0; v < n; ++v)
                if (!(mask >> v & 1)) flow += phi[u] * p[u][v];
        }
        best = std::min(best, flow / std::min(inside, total - inside));
    }
    return best;
}

// Probability of visiting v within k steps from u, by enumerating every path.
inline double reach_by_paths(const Mat& p, std::size_t u, std::size_t v, std::size_t k) {
    if (u == v) return 1.0;
    std::function<double(std::size_t, std::size_t)> rec = [&](std::size_t s, std::size_t left) -> double {
        if (left == 0) return 0.0;
        double acc = 0.0;
        for (std::size_t t = 0; t < p.size(); ++t) {
            if (p[s][t] == 0.0) continue;
            acc += p[s][t] * (t == v ? 1.0 : rec(t, left - 1));
        }
        return acc;
    };
    return rec(u, k);
}

// Expected first-passage times to v: (I - Q) x = 1 over the states != v.
inline Vec hitting_times(const Mat& p, std::size_t v) {
    const std::size_t n = p.size();
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < n; ++i)
        if (i != v) idx.push_back(i);
    Mat a(idx.size(), Vec(idx.size()));
    for (std::size_t r = 0; r < idx.size(); ++r)
        for (std::size_t c = 0; c < idx.size(); ++c) a[r][c] = (r == c ? 1.0 : 0.0) - p[idx[r]][idx[c]];
    const Vec x = solve(a, Vec(idx.size(), 1.0));
    Vec out(n, 0.0);
    for (std::size_t r = 0; r < idx.size(); ++r) out[idx[r]] = x[r];
    return out;
}

// Diameter of a deterministic MDP: max BFS distance over ordered pairs.
inline double bfs_diameter(const mdpx::TabularMdp& mdp) {
    const std::size_t S = mdp.num_states(), A = mdp.num_actions();
    double worst = 0.0;
    for (std::size_t src = 0; src < S; ++src) {
        std::vector<long> dist(S, -1);
        std::queue<std::size_t> q;
        dist[src] = 0;
        q.push(src);
        while (!q.empty()) {
            const std::size_t s = q.front();
            q.pop();
            for (std::size_t a = 0; a < A; ++a)
                for (std::size_t t = 0; t < S; ++t)
                    if (mdp.transition(s, a, t) > 0.0 && dist[t] < 0) {
                        dist[t] = dist[s] + 1;
                        q.push(t);
                    }
        }
        for (std::size_t t = 0; t < S; ++t) {
            if (t == src) continue;
            if (dist[t] < 0) return std::numeric_limits<double>::infinity();
            worst = std::max(worst, static_cast<double>(dist[t]));
        }
    }
    return worst;
}

// Bellman optimality by plain value iteration.
inline Mat optimal_q(const mdpx::TabularMdp& mdp, int iters = 20000) {
    const std::size_t S = mdp.num_states(), A = mdp.num_actions();
    Mat q(S, Vec(A, 0.0));
    for (int it = 0; it < iters; ++it) {
        Vec v(S);
        for (std::size_t s = 0; s < S; ++s) v[s] = *std::max_element(q[s].begin(), q[s].end());
        double diff = 0.0;
        for (std::size_t s = 0; s < S; ++s)
            for (std::size_t a = 0; a < A; ++a) {
                double acc = mdp.reward(s, a);
                for (std::size_t t = 0; t < S; ++t) acc += mdp.gamma() * mdp.transition(s, a, t) * v[t];
                diff = std::max(diff, std::abs(acc - q[s][a]));
                q[s][a] = acc;
            }
        if (diff < 1e-14) break;
    }
    return q;
}

}  // namespace oracle
