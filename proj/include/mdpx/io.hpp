#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "mdpx/mdp.hpp"

namespace mdpx {

/// MDP file schema:
///   {"num_states", "num_actions", "gamma", "r_max",
///    "transitions": [[[p]]] indexed [s][a][s'], "rewards": [[r]] indexed [s][a],
///    "labels": [string] (optional)}
/// Doubles are written with round-trip precision.
nlohmann::json mdp_to_json(const TabularMdp& mdp);
TabularMdp mdp_from_json(const nlohmann::json& j);

TabularMdp read_mdp_file(const std::filesystem::path& path);
void write_mdp_file(const TabularMdp& mdp, const std::filesystem::path& path);

/// Reals that may be infinite are written as the string "inf".
nlohmann::json real_or_inf(double x);

/// 64-bit FNV-1a of the given bytes, as "fnv1a64:<16 hex digits>".
std::string fnv1a64_hex(const std::string& bytes);

std::string read_file(const std::filesystem::path& path);

}  // namespace mdpx
