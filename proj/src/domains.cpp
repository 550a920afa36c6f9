#include "mdpx/domains.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <numeric>
#include <queue>
#include <set>
#include <stdexcept>

#include "mdpx/rng.hpp"

namespace mdpx {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

std::string kind_name(const DomainSpec& spec) {
    return std::visit(overloaded{[](const ChainParams&) { return std::string("chain"); },
                                 [](const GridParams&) { return std::string("grid"); },
                                 [](const TaxiParams&) { return std::string("taxi"); },
                                 [](const RandomParams&) { return std::string("random"); }},
                      spec);
}

TabularMdp generate_chain(const ChainParams& params) {
    if (params.n < 1) throw std::invalid_argument("chain needs n >= 1");
    const std::size_t S = static_cast<std::size_t>(params.n) + 1;
    const std::size_t A = 2;
    std::vector<double> t(S * A * S, 0.0);
    std::vector<double> r(S * A, 0.0);
    std::vector<std::string> labels;
    for (std::size_t s = 0; s < S; ++s) {
        const std::size_t right = std::min(s + 1, S - 1);
        t[(s * A + kChainRight) * S + right] = 1.0;
        t[(s * A + kChainBack) * S + 0] = 1.0;
        labels.push_back("s" + std::to_string(s));
    }
    r[(S - 1) * A + kChainRight] = 1.0;
    return TabularMdp(S, A, std::move(t), std::move(r), 1.0, params.gamma, std::move(labels));
}

TabularMdp generate_grid(const GridParams& params, std::vector<std::string>* warnings) {
    const int W = params.width;
    const int H = params.height;
    if (W < 1 || H < 1) throw std::invalid_argument("grid width and height must be >= 1");
    if (!(params.slip >= 0.0 && params.slip <= 1.0)) {
        throw std::invalid_argument("slip must be in [0,1]");
    }
    auto inside = [&](Cell c) { return c.x >= 0 && c.x < W && c.y >= 0 && c.y < H; };
    std::set<Cell> walls;
    for (Cell c : params.walls) {
        if (!inside(c)) {
            throw std::invalid_argument("wall (" + std::to_string(c.x) + "," + std::to_string(c.y) +
                                        ") outside the grid");
        }
        walls.insert(c);
    }
    std::vector<Cell> goals = params.goals;
    if (goals.empty()) goals.push_back({W - 1, H - 1});
    for (Cell c : goals) {
        if (!inside(c) || walls.count(c)) {
            throw std::invalid_argument("goal (" + std::to_string(c.x) + "," + std::to_string(c.y) +
                                        ") must be a free cell inside the grid");
        }
    }

    std::map<Cell, StateId> index;
    std::vector<Cell> cells;
    for (int y = 0; y < H; ++y) {
        for (int x = 0; x < W; ++x) {
            Cell c{x, y};
            if (walls.count(c)) continue;
            index[c] = cells.size();
            cells.push_back(c);
        }
    }
    if (cells.empty()) throw std::invalid_argument("grid has no free cells");

    const std::size_t S = cells.size();
    const std::size_t A = 4;
    constexpr std::array<Cell, 4> kMoves{{{0, 1}, {0, -1}, {1, 0}, {-1, 0}}};
    // Perpendicular moves for the slip model.
    constexpr std::array<std::array<ActionId, 2>, 4> kLateral{{{kEast, kWest},
                                                               {kEast, kWest},
                                                               {kNorth, kSouth},
                                                               {kNorth, kSouth}}};
    auto destination = [&](Cell from, ActionId a) {
        Cell to{from.x + kMoves[a].x, from.y + kMoves[a].y};
        if (!inside(to) || walls.count(to)) return index.at(from);
        return index.at(to);
    };

    std::vector<double> t(S * A * S, 0.0);
    std::vector<double> r(S * A, 0.0);
    std::set<Cell> goal_set(goals.begin(), goals.end());
    std::vector<std::string> labels;
    for (StateId s = 0; s < S; ++s) {
        const Cell c = cells[s];
        labels.push_back("(" + std::to_string(c.x) + "," + std::to_string(c.y) + ")");
        for (ActionId a = 0; a < A; ++a) {
            double* row = &t[(s * A + a) * S];
            row[destination(c, a)] += 1.0 - params.slip;
            if (params.slip > 0.0) {
                for (ActionId side : kLateral[a]) row[destination(c, side)] += params.slip / 2.0;
            }
            if (goal_set.count(c)) r[s * A + a] = 1.0;
        }
    }

    if (warnings) {
        // Free cells connected under 4-neighbourhood moves.
        std::vector<bool> seen(S, false);
        std::queue<StateId> q;
        q.push(0);
        seen[0] = true;
        std::size_t count = 1;
        while (!q.empty()) {
            StateId s = q.front();
            q.pop();
            for (ActionId a = 0; a < A; ++a) {
                StateId n = destination(cells[s], a);
                if (!seen[n]) {
                    seen[n] = true;
                    ++count;
                    q.push(n);
                }
            }
        }
        if (count != S) {
            warnings->push_back("grid free cells are disconnected (" + std::to_string(count) + " of " +
                                std::to_string(S) + " reachable from " + labels[0] +
                                "); the random-walk chain is reducible");
        }
    }
    return TabularMdp(S, A, std::move(t), std::move(r), 1.0, params.gamma, std::move(labels));
}

GridParams two_room_layout(int width, int height) {
    if (width < 3 || height < 1) throw std::invalid_argument("two-room layout needs width >= 3");
    GridParams g;
    g.width = width;
    g.height = height;
    const int wall_x = width / 2;
    const int door_y = height / 2;
    for (int y = 0; y < height; ++y) {
        if (y != door_y) g.walls.push_back({wall_x, y});
    }
    return g;
}

namespace {

constexpr int kTaxiSize = 5;
// Landmarks as (row, col), row 0 at the top: R, G, Y, B.
constexpr std::array<std::pair<int, int>, 4> kLandmarks{{{0, 0}, {0, 4}, {4, 0}, {4, 3}}};
constexpr int kInTaxi = 4;

// True if an east move from (row, col) is blocked by an interior wall.
bool taxi_east_blocked(int row, int col) {
    return (col == 1 && (row == 0 || row == 1)) || (col == 0 && (row == 3 || row == 4)) ||
           (col == 2 && (row == 3 || row == 4));
}

int landmark_at(int row, int col) {
    for (int i = 0; i < 4; ++i) {
        if (kLandmarks[i].first == row && kLandmarks[i].second == col) return i;
    }
    return -1;
}

}  // namespace

StateId taxi_index(const TaxiState& s) {
    return static_cast<StateId>(((s.row * kTaxiSize + s.col) * 5 + s.passenger) * 4 + s.destination);
}

TaxiState taxi_decode(StateId s) {
    TaxiState t;
    auto i = static_cast<int>(s);
    t.destination = i % 4;
    i /= 4;
    t.passenger = i % 5;
    i /= 5;
    t.col = i % kTaxiSize;
    t.row = i / kTaxiSize;
    return t;
}

TabularMdp generate_taxi(const TaxiParams& params) {
    const std::size_t S = kTaxiSize * kTaxiSize * 5 * 4;
    const std::size_t A = 6;
    std::vector<double> t(S * A * S, 0.0);
    std::vector<double> r(S * A, 0.0);
    std::vector<std::string> labels;
    labels.reserve(S);
    const char* names = "RGYB";
    for (StateId s = 0; s < S; ++s) {
        const TaxiState st = taxi_decode(s);
        labels.push_back("(" + std::to_string(st.row) + "," + std::to_string(st.col) + ")p" +
                         (st.passenger == kInTaxi ? std::string("T") : std::string(1, names[st.passenger])) +
                         "d" + std::string(1, names[st.destination]));
        for (ActionId a = 0; a < A; ++a) {
            double* row = &t[(s * A + a) * S];
            TaxiState next = st;
            switch (a) {
                case kNorth:
                    next.row = std::max(0, st.row - 1);
                    break;
                case kSouth:
                    next.row = std::min(kTaxiSize - 1, st.row + 1);
                    break;
                case kEast:
                    if (st.col < kTaxiSize - 1 && !taxi_east_blocked(st.row, st.col)) next.col = st.col + 1;
                    break;
                case kWest:
                    if (st.col > 0 && !taxi_east_blocked(st.row, st.col - 1)) next.col = st.col - 1;
                    break;
                case kPickup:
                    if (st.passenger != kInTaxi && landmark_at(st.row, st.col) == st.passenger) {
                        next.passenger = kInTaxi;
                    }
                    break;
                case kDropoff: {
                    const int here = landmark_at(st.row, st.col);
                    if (st.passenger == kInTaxi && here >= 0) {
                        if (here == st.destination) {
                            r[s * A + a] = 1.0;
                            for (int p = 0; p < 4; ++p) {
                                for (int d = 0; d < 4; ++d) {
                                    row[taxi_index({st.row, st.col, p, d})] += 1.0 / 16.0;
                                }
                            }
                            continue;
                        }
                        next.passenger = here;
                    }
                    break;
                }
            }
            row[taxi_index(next)] += 1.0;
        }
    }
    return TabularMdp(S, A, std::move(t), std::move(r), 1.0, params.gamma, std::move(labels));
}

TabularMdp generate_random(const RandomParams& params) {
    const std::size_t S = params.num_states;
    const std::size_t A = params.num_actions;
    if (S < 1 || A < 1) throw std::invalid_argument("random MDP needs S, A >= 1");
    if (!(params.density > 0.0 && params.density <= 1.0)) {
        throw std::invalid_argument("density must be in (0,1]");
    }
    const auto support = static_cast<std::size_t>(
        std::clamp(std::ceil(params.density * static_cast<double>(S) - 1e-9), 1.0, static_cast<double>(S)));

    std::mt19937_64 rng = stream_rng(params.seed, 0);
    std::vector<StateId> order(S);
    for (int attempt = 0; attempt < params.max_retries; ++attempt) {
        std::vector<double> t(S * A * S, 0.0);
        for (std::size_t row = 0; row < S * A; ++row) {
            std::iota(order.begin(), order.end(), StateId{0});
            // Partial Fisher-Yates: the first `support` entries are the support.
            for (std::size_t i = 0; i < support; ++i) {
                std::swap(order[i], order[i + uniform_index(rng, S - i)]);
            }
            double total = 0.0;
            std::vector<double> w(support);
            for (auto& x : w) {
                x = -std::log1p(-uniform01(rng));
                total += x;
            }
            if (!(total > 0.0)) {
                w.assign(support, 1.0);
                total = static_cast<double>(support);
            }
            for (std::size_t i = 0; i < support; ++i) t[row * S + order[i]] = w[i] / total;
        }
        std::vector<double> r(S * A);
        for (auto& x : r) x = uniform01(rng);
        TabularMdp mdp(S, A, std::move(t), std::move(r), 1.0, params.gamma);
        if (component_structure(random_walk_matrix(mdp)).is_strongly_connected) return mdp;
    }
    throw std::runtime_error("generate_random: no strongly connected MDP after " +
                             std::to_string(params.max_retries) + " attempts (density too low?)");
}

TabularMdp generate(const DomainSpec& spec, std::vector<std::string>* warnings) {
    return std::visit(overloaded{[](const ChainParams& p) { return generate_chain(p); },
                                 [&](const GridParams& p) { return generate_grid(p, warnings); },
                                 [](const TaxiParams& p) { return generate_taxi(p); },
                                 [](const RandomParams& p) { return generate_random(p); }},
                      spec);
}

}  // namespace mdpx
