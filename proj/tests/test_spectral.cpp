#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "mdpx/domains.hpp"
#include "mdpx/sim.hpp"
#include "mdpx/spectral.hpp"
#include "oracles.hpp"

using namespace mdpx;

namespace {

TabularMdp random_mdp(std::uint64_t seed, std::size_t max_states = 8) {
    const std::size_t S = 2 + seed % (max_states - 1);
    const std::size_t A = 1 + (seed / 7) % 4;
    const double density = 0.3 + 0.1 * static_cast<double>(seed % 8);
    return generate_random({.num_states = S, .num_actions = A, .density = density, .seed = seed});
}

}  // namespace

TEST_CASE("stationary distribution examples") {
    auto phi = stationary_distribution(fixture::half2());
    CHECK(phi[0] == doctest::Approx(0.5));
    CHECK(phi[1] == doctest::Approx(0.5));

    phi = stationary_distribution(random_walk_matrix(generate_chain({2})));
    CHECK(std::abs(phi[0] - 0.5) < 1e-12);
    CHECK(std::abs(phi[1] - 0.25) < 1e-12);
    CHECK(std::abs(phi[2] - 0.25) < 1e-12);
    CHECK(phi.phi_min == doctest::Approx(0.25));

    phi = stationary_distribution(fixture::matrix({{0, 1}, {1, 0}}));
    CHECK(phi[0] == doctest::Approx(0.5));

    CHECK_THROWS_AS(stationary_distribution(TransitionMatrix(Eigen::MatrixXd::Identity(3, 3))), ReducibleChainError);
}

TEST_CASE("Laplacian examples") {
    const auto p = fixture::half2();
    const auto s = chung_laplacian(p, stationary_distribution(p));
    Eigen::MatrixXd expected(2, 2);
    expected << 0.5, -0.5, -0.5, 0.5;
    CHECK(s.laplacian.isApprox(expected, 1e-12));
    CHECK(std::abs(s.eigenvalues(0)) < 1e-12);
    CHECK(s.eigenvalues(1) == doctest::Approx(1.0));
    CHECK(s.lambda == doctest::Approx(1.0));

    const auto c = random_walk_matrix(generate_chain({2}));
    const auto sc = chung_laplacian(c, stationary_distribution(c));
    CHECK(std::abs(sc.eigenvalues(0)) < 1e-8);
    CHECK(sc.lambda > 1e-3);

    StationaryDistribution bad{Eigen::Vector2d(1.0, 0.0), 0.0};
    CHECK_THROWS(chung_laplacian(p, bad));
}

TEST_CASE("Cheeger examples") {
    const auto p = fixture::half2();
    auto c = cheeger_constant(p, stationary_distribution(p));
    CHECK(c.h == doctest::Approx(0.5));
    CHECK(c.argmin_cut == std::vector<StateId>{0});

    const auto pq = fixture::matrix({{0.8, 0.2}, {0.8, 0.2}});
    c = cheeger_constant(pq, stationary_distribution(pq));
    CHECK(c.h == doctest::Approx(0.8));
    CHECK(c.h == doctest::Approx(c.flow_out / c.smaller_side_mass));

    const auto chain = random_walk_matrix(generate_chain({2}));
    const auto phi = stationary_distribution(chain);
    c = cheeger_constant(chain, phi);
    std::vector<double> phi_v(phi.phi.data(), phi.phi.data() + phi.phi.size());
    CHECK(c.h == doctest::Approx(oracle::cheeger(oracle::to_mat(chain), phi_v)).epsilon(1e-12));

    const auto big = random_walk_matrix(generate_grid({.width = 7, .height = 3}));
    CHECK_THROWS_AS(cheeger_constant(big, stationary_distribution(big)), std::invalid_argument);
}

TEST_CASE("Cheeger sandwich flags the one-sided form") {
    const auto p = fixture::half2();
    const auto phi = stationary_distribution(p);
    const double lambda = chung_laplacian(p, phi).lambda;
    const double h = cheeger_constant(p, phi).h;
    const auto sw = check_cheeger_sandwich(h, lambda);
    CHECK(sw.chung_form_holds);
    CHECK_FALSE(sw.strict_form_holds);
}

TEST_CASE("local symmetry") {
    CHECK(locally_symmetric(generate_grid({.width = 5, .height = 5})).symmetric);
    const auto chain = locally_symmetric(generate_chain({2}));
    CHECK_FALSE(chain.symmetric);
    REQUIRE(chain.witness);
    CHECK(chain.witness->first == 1);
    CHECK(chain.witness->second == 2);
    CHECK(locally_symmetric(fixture::stay_flip()).symmetric);
}

TEST_CASE("undirected equivalent") {
    const auto g = undirected_equivalent(generate_grid({.width = 2, .height = 2}));
    CHECK(g.weights(0, 1) == 1.0);
    CHECK(g.weights(0, 2) == 1.0);
    CHECK(g.weights(0, 3) == 0.0);
    CHECK(g.weights(0, 0) == 2.0);
    for (int u = 0; u < 4; ++u) {
        CHECK(g.degrees(u) == 4.0);
        CHECK(g.distribution(u) == doctest::Approx(0.25));
    }

    const auto sf = undirected_equivalent(fixture::stay_flip());
    CHECK(sf.weights.isApprox(Eigen::MatrixXd::Ones(2, 2)));
    CHECK(sf.distribution(0) == doctest::Approx(0.5));

    CHECK_THROWS_AS(undirected_equivalent(generate_chain({2})), std::invalid_argument);
}

TEST_CASE("property: stationary distribution agrees with independent oracles") {
    for (std::uint64_t seed = 0; seed < 60; ++seed) {
        const auto mdp = random_mdp(seed);
        const auto p = random_walk_matrix(mdp);
        const auto phi = stationary_distribution(p);
        const auto m = oracle::to_mat(p);
        const auto lin = oracle::stationary_solve(m);
        const auto pow = oracle::stationary_power(m);
        CHECK(std::abs(phi.phi.sum() - 1.0) < 1e-9);
        CHECK((phi.phi.transpose() * p.matrix() - phi.phi.transpose()).cwiseAbs().maxCoeff() <= 1e-9);
        for (StateId s = 0; s < p.size(); ++s) {
            CHECK(phi[s] > 0.0);
            CHECK(std::abs(phi[s] - lin[s]) < 1e-9);
            CHECK(std::abs(phi[s] - pow[s]) < 1e-8);
        }
    }
}

TEST_CASE("property: Laplacian spectrum") {
    for (std::uint64_t seed = 0; seed < 60; ++seed) {
        const auto p = random_walk_matrix(random_mdp(seed));
        const auto phi = stationary_distribution(p);
        const auto s = chung_laplacian(p, phi);
        CHECK((s.laplacian - s.laplacian.transpose()).cwiseAbs().maxCoeff() <= 1e-12);
        CHECK(std::abs(s.eigenvalues(0)) < 1e-8);
        CHECK(s.eigenvalues.minCoeff() >= -1e-8);
        CHECK(s.eigenvalues.maxCoeff() <= 2.0 + 1e-8);
        CHECK(s.lambda > 0.0);
        // Null vector is phi^{1/2}.
        const Eigen::VectorXd root = phi.phi.cwiseSqrt().normalized();
        const double cosine = std::abs(root.dot(s.eigenvectors.col(0).normalized()));
        CHECK(std::acos(std::min(1.0, cosine)) < 1e-6);
    }
}

TEST_CASE("property: Cheeger matches brute force and the corrected sandwich") {
    for (std::uint64_t seed = 0; seed < 60; ++seed) {
        const auto p = random_walk_matrix(random_mdp(seed));
        const auto phi = stationary_distribution(p);
        const auto c = cheeger_constant(p, phi);
        std::vector<double> phi_v(phi.phi.data(), phi.phi.data() + phi.phi.size());
        CHECK(c.h == doctest::Approx(oracle::cheeger(oracle::to_mat(p), phi_v)).epsilon(1e-10));
        CHECK(c.h > 0.0);
        CHECK(check_cheeger_sandwich(c.h, chung_laplacian(p, phi).lambda).chung_form_holds);
    }
}

TEST_CASE("property: symmetric MDPs have the graph degree distribution as phi") {
    for (int w = 1; w <= 6; ++w)
        for (int h = 1; h <= 6; ++h) {
            if (w * h < 2) continue;
            for (double slip : {0.0, 0.3}) {
                const auto g = generate_grid({.width = w, .height = h, .slip = slip});
                if (!locally_symmetric(g).symmetric) continue;
                const auto phi = stationary_distribution(random_walk_matrix(g));
                CHECK((undirected_equivalent(g).distribution - phi.phi).cwiseAbs().maxCoeff() <= 1e-9);
            }
        }
    for (int k = 3; k <= 6; ++k) {
        const auto g = generate_grid(two_room_layout(2 * k + 1, k));
        REQUIRE(locally_symmetric(g).symmetric);
        const auto phi = stationary_distribution(random_walk_matrix(g));
        CHECK((undirected_equivalent(g).distribution - phi.phi).cwiseAbs().maxCoeff() <= 1e-9);
    }
}

TEST_CASE("property: phi matches long-run visit frequencies") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const auto p = random_walk_matrix(random_mdp(seed, 6));
        const auto phi = stationary_distribution(p);
        const auto freq = visit_frequencies(p, 0, 1'000'000, seed);
        CHECK(0.5 * (freq - phi.phi).cwiseAbs().sum() < 0.01);
    }
}
