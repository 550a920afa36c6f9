#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "mdpx/domains.hpp"
#include "mdpx/learn.hpp"
#include "mdpx/rng.hpp"
#include "oracles.hpp"

using namespace mdpx;

TEST_CASE("solve optimal") {
    const auto sf = fixture::stay_flip();
    auto opt = solve_optimal(sf);
    CHECK(opt.v(0) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(opt.v(1) == doctest::Approx(2.0).epsilon(1e-9));

    const auto myopic = generate_random({.num_states = 4, .num_actions = 3, .seed = 5, .gamma = 0.0});
    opt = solve_optimal(myopic);
    for (StateId s = 0; s < 4; ++s)
        for (ActionId a = 0; a < 3; ++a) CHECK(opt.q(s, a) == myopic.reward(s, a));

    const auto zero = fixture::stay_flip(0.9, {0, 0, 0, 0});
    CHECK(solve_optimal(zero).v.isZero());
}

TEST_CASE("policy value") {
    const auto sf = fixture::stay_flip();
    const Policy uniform = Policy::Constant(2, 2, 0.5);
    const auto v = policy_value(sf, uniform);
    CHECK(v(0) == doctest::Approx(0.5));
    CHECK(v(1) == doctest::Approx(1.5));
    CHECK(policy_value(fixture::stay_flip(0.9, {0, 0, 0, 0}), uniform).isZero());
    CHECK_THROWS(policy_value(sf, Policy::Constant(3, 2, 0.5)));
}

TEST_CASE("greedy policy") {
    QMatrix q(2, 2);
    q << 1, 0, 0.5, 0.5;
    CHECK(greedy_policy(q) == std::vector<ActionId>{0, 0});

    auto chain = generate_chain({2, 0.9});
    const auto pi = greedy_policy(solve_optimal(chain).q);
    for (StateId s = 0; s < 2; ++s) CHECK(pi[s] == kChainRight);
}

TEST_CASE("property: value iteration matches the oracle and greedy recovers V*") {
    const double tol = 1e-10;
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        const double gamma = 0.5 + 0.04 * static_cast<double>(seed % 12);
        const auto m = generate_random({.num_states = 2 + seed % 8, .num_actions = 1 + seed % 4, .density = 0.5, .seed = seed, .gamma = gamma});
        const auto opt = solve_optimal(m, tol);
        const auto o = oracle::optimal_q(m);
        for (StateId s = 0; s < m.num_states(); ++s)
            for (ActionId a = 0; a < m.num_actions(); ++a) CHECK(std::abs(opt.q(s, a) - o[s][a]) <= 1e-8);
        const auto v = policy_value(m, deterministic_policy(greedy_policy(opt.q), m.num_actions()));
        CHECK((opt.v - v).cwiseAbs().maxCoeff() <= 2 * tol / (1 - gamma) + 1e-12);
    }
}

TEST_CASE("property: greedy gap under bounded perturbation") {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const double gamma = 0.3 + 0.05 * static_cast<double>(seed % 13);
        const auto m = generate_random({.num_states = 2 + seed % 7, .num_actions = 2 + seed % 3, .density = 0.6, .seed = seed, .gamma = gamma});
        const auto opt = solve_optimal(m);
        auto rng = stream_rng(seed, 1);
        for (double e : {0.01, 0.1, 0.5}) {
            QMatrix q = opt.q;
            for (Eigen::Index i = 0; i < q.size(); ++i) q.data()[i] += e * (2.0 * uniform01(rng) - 1.0);
            const auto v = policy_value(m, deterministic_policy(greedy_policy(q), m.num_actions()));
            CHECK((opt.v - v).cwiseAbs().maxCoeff() <= 2 * e / (1 - gamma) + 1e-6);
        }
    }
}

TEST_CASE("q-learning update rule") {
    const TabularMdp bandit(1, 2, {1.0, 1.0}, {1.0, 0.0}, 1.0, 0.0);
    const auto t = q_learning_random_walk(bandit, 50, 0.7, 3);
    REQUIRE(t.visit_counts.minCoeff() > 0);
    CHECK(t.values(0, 0) == 1.0);
    CHECK(t.values(0, 1) == 0.0);
    CHECK(t.visit_counts.sum() == 50);

    const auto zero = fixture::stay_flip(0.9, {0, 0, 0, 0});
    CHECK(q_learning_random_walk(zero, 1000, 0.7, 1).values.isZero());

    CHECK_THROWS(q_learning_random_walk(zero, 10, 1.0, 1));
    CHECK_THROWS(q_learning_random_walk(zero, 0, 0.7, 1));
}

TEST_CASE("property: q-learning stays bounded and is deterministic") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto m = generate_random({.num_states = 5, .num_actions = 3, .density = 0.5, .seed = seed, .gamma = 0.9});
        const double v_max = m.r_max() / (1 - m.gamma());
        const QMatrix q0 = QMatrix::Constant(5, 3, v_max * 0.5 * static_cast<double>(seed % 3));
        const auto a = q_learning_random_walk(m, 20'000, 0.7, seed, q0);
        const auto b = q_learning_random_walk(m, 20'000, 0.7, seed, q0);
        CHECK(a.values == b.values);
        CHECK(a.visit_counts == b.visit_counts);
        CHECK(a.values.maxCoeff() <= v_max + 1e-6);
        CHECK(a.values.minCoeff() >= 0.0);
    }
}

TEST_CASE("q-learning converges on a 3x3 grid") {
    const auto grid = generate_grid({.width = 3, .height = 3, .gamma = 0.9});
    const auto opt = solve_optimal(grid);
    int good = 0;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto t = q_learning_random_walk(grid, 100'000, 0.7, seed);
        good += (t.values - opt.q).cwiseAbs().maxCoeff() <= 0.1 * 10.0;
    }
    CHECK(good >= 9);
}

TEST_CASE("explore then exploit") {
    const TabularMdp one(1, 1, {1.0}, {0.3}, 1.0, 0.9);
    const auto r = explore_then_exploit(one, 100, 0.7, 1e-3, 1);
    CHECK(r.value_gap == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(r.success);

    const auto chain = generate_chain({6});
    const auto c = explore_then_exploit(chain, 50'000, 0.7, 2.0, 4);
    CHECK(c.success == (c.value_gap <= c.epsilon));
    CHECK(c.value_gap >= 0.0);
    CHECK(c.steps_used == 50'000);
    CHECK(c.policy.size() == 7);
}
