#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "mdpx/mdp.hpp"

namespace mdpx {

inline constexpr double kDefaultGamma = 0.95;

/// Chain of n+1 states. Action indices: 0 = back (to s0), 1 = right.
struct ChainParams {
    int n = 1;
    double gamma = kDefaultGamma;
};
inline constexpr ActionId kChainBack = 0;
inline constexpr ActionId kChainRight = 1;

struct Cell {
    int x = 0;
    int y = 0;
    friend bool operator==(const Cell&, const Cell&) = default;
    friend auto operator<=>(const Cell&, const Cell&) = default;
};

/// Grid world. Cells are (x, y) with 0 <= x < width, 0 <= y < height.
/// Actions: 0 = north (y+1), 1 = south (y-1), 2 = east (x+1), 3 = west (x-1).
/// With slip > 0 the intended move happens with probability 1 - slip and each
/// of the two perpendicular moves with probability slip / 2.
struct GridParams {
    int width = 1;
    int height = 1;
    std::vector<Cell> walls;
    std::vector<Cell> goals;  // empty: the cell (width-1, height-1)
    double slip = 0.0;
    double gamma = kDefaultGamma;
};
inline constexpr ActionId kNorth = 0, kSouth = 1, kEast = 2, kWest = 3;

struct TaxiParams {
    double gamma = kDefaultGamma;
};

struct RandomParams {
    std::size_t num_states = 2;
    std::size_t num_actions = 1;
    double density = 1.0;
    std::uint64_t seed = 0;
    double gamma = kDefaultGamma;
    int max_retries = 10000;
};

using DomainSpec = std::variant<ChainParams, GridParams, TaxiParams, RandomParams>;

std::string kind_name(const DomainSpec& spec);

/// Reward 1 only for (s_n, right); r_max = 1.
TabularMdp generate_chain(const ChainParams& params);

/// One state per non-wall cell in row-major (y, then x) order. Bumping into a
/// wall or the boundary leaves the agent in place. Reward 1 at goal cells for
/// every action. If the free cells are disconnected a message is appended to
/// `warnings` (when given).
TabularMdp generate_grid(const GridParams& params, std::vector<std::string>* warnings = nullptr);

/// Grid with a vertical wall at x = width/2 and a one-cell door at y = height/2.
GridParams two_room_layout(int width, int height);

/// Dietterich's 5x5 taxi with landmarks R(0,0) G(4,0) Y(0,4) B(3,4) in (col,row)
/// with row 0 at the top. 500 states indexed ((row*5+col)*5 + passenger)*4 + destination,
/// passenger 0..3 = at landmark, 4 = in taxi. Actions N, S, E, W, pickup, dropoff.
/// Illegal pickup/dropoff are no-ops; dropoff at the destination pays 1 and
/// draws a fresh (passenger, destination) pair uniformly from all 16 combinations,
/// keeping the taxi where it is.
TabularMdp generate_taxi(const TaxiParams& params = {});

struct TaxiState {
    int row = 0;
    int col = 0;
    int passenger = 0;
    int destination = 0;
};
StateId taxi_index(const TaxiState& s);
TaxiState taxi_decode(StateId s);
inline constexpr ActionId kPickup = 4, kDropoff = 5;

/// Each (s,a) row has ceil(density * S) nonzero entries on a random support,
/// with Dirichlet(1,...,1) weights. Resampled until the random-walk chain is
/// strongly connected; throws std::runtime_error when max_retries is exhausted.
/// Rewards are uniform in [0,1], r_max = 1.
TabularMdp generate_random(const RandomParams& params);

TabularMdp generate(const DomainSpec& spec, std::vector<std::string>* warnings = nullptr);

}  // namespace mdpx
