#include <doctest.h>

#include <cmath>
#include <limits>

#include "fixtures.hpp"
#include "mdpx/domains.hpp"
#include "mdpx/io.hpp"
#include "mdpx/mdp.hpp"
#include "oracles.hpp"

using namespace mdpx;

TEST_CASE("validate: generated chain is clean") {
    CHECK(validate_mdp(generate_chain({2})).ok());
}

TEST_CASE("validate: short row and negative entry") {
    TabularMdp short_row(2, 1, {0.9, 0.0, 0.0, 1.0}, {0, 0}, 1.0, 0.9);
    auto r = validate_mdp(short_row);
    REQUIRE(r.violations.size() == 1);
    CHECK(r.violations[0].state == 0);
    CHECK(r.violations[0].action == 0);

    TabularMdp negative(2, 1, {1.5, -0.5, 0.0, 1.0}, {0, 0}, 1.0, 0.9);
    r = validate_mdp(negative);
    REQUIRE_FALSE(r.ok());
    bool named = false;
    for (const auto& v : r.violations) named |= v.message.find("entry out of [0,1]") != std::string::npos;
    CHECK(named);
}

TEST_CASE("validate: rewards and discount") {
    CHECK_FALSE(validate_mdp(TabularMdp(1, 1, {1.0}, {2.0}, 1.0, 0.9)).ok());
    CHECK_FALSE(validate_mdp(TabularMdp(1, 1, {1.0}, {-0.1}, 1.0, 0.9)).ok());
    CHECK_FALSE(validate_mdp(TabularMdp(1, 1, {1.0}, {0.0}, 1.0, 1.0)).ok());
    CHECK_THROWS_AS(TabularMdp(2, 1, {1.0}, {0.0, 0.0}, 1.0, 0.9), std::invalid_argument);
}

TEST_CASE("renormalize rescales rows") {
    TabularMdp m(2, 1, {0.45, 0.45, 0.0, 2.0}, {0, 0}, 1.0, 0.9);
    const auto fixed = m.renormalized();
    CHECK(validate_mdp(fixed).ok());
    CHECK(fixed.transition(0, 0, 1) == doctest::Approx(0.5));
}

TEST_CASE("random walk matrix") {
    const auto p = random_walk_matrix(generate_chain({2}));
    CHECK(p(0, 0) == 0.5);
    CHECK(p(0, 1) == 0.5);
    CHECK(p(0, 2) == 0.0);

    TabularMdp one(2, 1, {0.3, 0.7, 0.6, 0.4}, {0, 0}, 1.0, 0.9);
    const auto q = random_walk_matrix(one);
    CHECK(q(0, 1) == 0.7);
    CHECK(q(1, 0) == 0.6);

    const auto sf = random_walk_matrix(fixture::stay_flip());
    CHECK(sf.matrix().isApprox(Eigen::MatrixXd::Constant(2, 2, 0.5)));
}

TEST_CASE("lazy matrix") {
    CHECK(lazy_matrix(TransitionMatrix(Eigen::MatrixXd::Identity(3, 3))).matrix().isIdentity());
    CHECK(lazy_matrix(fixture::matrix({{0, 1}, {1, 0}})).matrix().isApprox(fixture::half2().matrix()));
    const auto l = lazy_matrix(fixture::half2());
    CHECK(l(0, 0) == 0.75);
    CHECK(l(0, 1) == 0.25);
}

TEST_CASE("transition matrix rejects bad rows") {
    Eigen::MatrixXd m(2, 2);
    m << 0.5, 0.4, 0.5, 0.5;
    CHECK_THROWS_AS(TransitionMatrix{m}, std::invalid_argument);
    m << 1.5, -0.5, 0.5, 0.5;
    CHECK_THROWS_AS(TransitionMatrix{m}, std::invalid_argument);
    CHECK_THROWS_AS(TransitionMatrix{Eigen::MatrixXd::Identity(2, 3)}, std::invalid_argument);
}

TEST_CASE("component structure") {
    CHECK(component_structure(random_walk_matrix(generate_chain({2}))).is_strongly_connected);

    // Chain with only the right action: every state is its own component.
    const int n = 3;
    std::vector<double> t(static_cast<std::size_t>((n + 1) * (n + 1)), 0.0);
    for (int s = 0; s <= n; ++s) t[static_cast<std::size_t>(s * (n + 1) + std::min(s + 1, n))] = 1.0;
    TabularMdp forward(n + 1, 1, t, std::vector<double>(n + 1, 0.0), 1.0, 0.9);
    const auto cs = component_structure(random_walk_matrix(forward));
    CHECK_FALSE(cs.is_strongly_connected);
    CHECK(cs.num_components() == n + 1);
    REQUIRE(cs.closed_components.size() == 1);
    CHECK(cs.closed_components[0] == std::vector<StateId>{3});

    const auto id = component_structure(TransitionMatrix(Eigen::MatrixXd::Identity(3, 3)));
    CHECK(id.num_components() == 3);
    CHECK(id.closed_components.size() == 3);
    CHECK_THROWS_AS(require_irreducible(TransitionMatrix(Eigen::MatrixXd::Identity(3, 3))), ReducibleChainError);
}

TEST_CASE("restrict to closed set") {
    // States 0,1 form a closed pair; state 2 leaks into them.
    TabularMdp m(3, 1, {0, 1, 0, 1, 0, 0, 0.5, 0, 0.5}, {0.1, 0.2, 0.3}, 1.0, 0.9);
    const StateId keep[] = {0, 1};
    const auto sub = restrict_to_states(m, keep);
    CHECK(sub.num_states() == 2);
    CHECK(sub.transition(0, 0, 1) == 1.0);
    CHECK(sub.reward(1, 0) == doctest::Approx(0.2));
    const StateId open[] = {2};
    CHECK_THROWS(restrict_to_states(m, open));
}

TEST_CASE("json round trip") {
    const auto m = generate_grid({.width = 3, .height = 2, .slip = 0.2});
    const auto back = mdp_from_json(nlohmann::json::parse(mdp_to_json(m).dump()));
    CHECK(back.transitions() == m.transitions());
    CHECK(back.rewards() == m.rewards());
    CHECK(back.labels() == m.labels());
    CHECK(back.gamma() == m.gamma());

    CHECK_THROWS_AS(mdp_from_json(nlohmann::json::parse(R"({"num_states": 2})")), std::invalid_argument);
    CHECK_THROWS_AS(mdp_from_json(nlohmann::json::parse(
                        R"({"num_states":1,"num_actions":1,"gamma":0.9,"r_max":1,"transitions":[[[1,0]]],"rewards":[[0]]})")),
                    std::invalid_argument);
}

TEST_CASE("io helpers") {
    CHECK(fnv1a64_hex("") == "fnv1a64:cbf29ce484222325");
    CHECK(fnv1a64_hex("a") == "fnv1a64:af63dc4c8601ec8c");
    CHECK(real_or_inf(std::numeric_limits<double>::infinity()) == "inf");
    CHECK(real_or_inf(2.5) == 2.5);
}

TEST_CASE("property: walk matrix of random MDPs matches the averaging oracle") {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        const auto m = generate_random({.num_states = 2 + seed % 7, .num_actions = 1 + seed % 4, .density = 0.5, .seed = seed});
        const auto p = random_walk_matrix(m);
        const auto o = oracle::walk(m);
        for (StateId i = 0; i < p.size(); ++i) {
            double row = 0.0;
            for (StateId j = 0; j < p.size(); ++j) {
                CHECK(p(i, j) == doctest::Approx(o[i][j]).epsilon(1e-12));
                row += p(i, j);
            }
            CHECK(std::abs(row - 1.0) < 1e-12);
            CHECK(lazy_matrix(p)(i, i) >= 0.5);
        }
    }
}
