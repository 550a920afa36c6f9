#pragma once

#include <vector>

#include "mdpx/mdp.hpp"

namespace fixture {

// Two states, action 0 stays, action 1 flips.
inline mdpx::TabularMdp stay_flip(double gamma = 0.5, std::vector<double> rewards = {0, 0, 1, 1}) {
    return mdpx::TabularMdp(2, 2, {1, 0, 0, 1, 0, 1, 1, 0}, std::move(rewards), 1.0, gamma);
}

inline mdpx::TransitionMatrix matrix(std::initializer_list<std::initializer_list<double>> rows) {
    const auto n = static_cast<Eigen::Index>(rows.size());
    Eigen::MatrixXd m(n, n);
    Eigen::Index i = 0;
    for (const auto& row : rows) {
        Eigen::Index j = 0;
        for (double x : row) m(i, j++) = x;
        ++i;
    }
    return mdpx::TransitionMatrix(m);
}

inline mdpx::TransitionMatrix half2() { return matrix({{0.5, 0.5}, {0.5, 0.5}}); }

}  // namespace fixture
