#include "mdpx/io.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace mdpx {

nlohmann::json mdp_to_json(const TabularMdp& mdp) {
    const auto S = mdp.num_states();
    const auto A = mdp.num_actions();
    nlohmann::json j;
    j["num_states"] = S;
    j["num_actions"] = A;
    j["gamma"] = mdp.gamma();
    j["r_max"] = mdp.r_max();
    auto transitions = nlohmann::json::array();
    auto rewards = nlohmann::json::array();
    for (StateId s = 0; s < S; ++s) {
        auto per_action = nlohmann::json::array();
        auto reward_row = nlohmann::json::array();
        for (ActionId a = 0; a < A; ++a) {
            auto row = mdp.next_state_distribution(s, a);
            per_action.push_back(std::vector<double>(row.begin(), row.end()));
            reward_row.push_back(mdp.reward(s, a));
        }
        transitions.push_back(std::move(per_action));
        rewards.push_back(std::move(reward_row));
    }
    j["transitions"] = std::move(transitions);
    j["rewards"] = std::move(rewards);
    if (!mdp.labels().empty()) j["labels"] = mdp.labels();
    return j;
}

TabularMdp mdp_from_json(const nlohmann::json& j) {
    try {
        const auto S = j.at("num_states").get<std::size_t>();
        const auto A = j.at("num_actions").get<std::size_t>();
        const auto& jt = j.at("transitions");
        const auto& jr = j.at("rewards");
        if (jt.size() != S || jr.size() != S) {
            throw std::invalid_argument("transitions/rewards must have num_states rows");
        }
        std::vector<double> t;
        t.reserve(S * A * S);
        std::vector<double> r;
        r.reserve(S * A);
        for (std::size_t s = 0; s < S; ++s) {
            if (jt[s].size() != A || jr[s].size() != A) {
                throw std::invalid_argument("state " + std::to_string(s) +
                                            " must have num_actions entries");
            }
            for (std::size_t a = 0; a < A; ++a) {
                if (jt[s][a].size() != S) {
                    throw std::invalid_argument("transitions[" + std::to_string(s) + "][" +
                                                std::to_string(a) + "] must have num_states entries");
                }
                for (const auto& p : jt[s][a]) t.push_back(p.get<double>());
                r.push_back(jr[s][a].get<double>());
            }
        }
        std::vector<std::string> labels;
        if (j.contains("labels")) labels = j.at("labels").get<std::vector<std::string>>();
        return TabularMdp(S, A, std::move(t), std::move(r), j.at("r_max").get<double>(),
                          j.at("gamma").get<double>(), std::move(labels));
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("malformed MDP JSON: ") + e.what());
    }
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

TabularMdp read_mdp_file(const std::filesystem::path& path) {
    auto text = read_file(path);
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument(path.string() + ": " + e.what());
    }
    return mdp_from_json(j);
}

void write_mdp_file(const TabularMdp& mdp, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << mdp_to_json(mdp).dump() << "\n";
}

nlohmann::json real_or_inf(double x) {
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    if (std::isnan(x)) return "nan";
    return x;
}

std::string fnv1a64_hex(const std::string& bytes) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[40];
    std::snprintf(buf, sizeof buf, "fnv1a64:%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace mdpx
