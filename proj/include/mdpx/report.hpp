#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "mdpx/bounds.hpp"
#include "mdpx/learn.hpp"
#include "mdpx/sim.hpp"
#include "mdpx/spectral.hpp"
#include "mdpx/sweep.hpp"

namespace mdpx {

inline constexpr const char* kToolName = "mdpx";
inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr int kSchemaVersion = 1;

/// Common provenance block shared by every report.
nlohmann::json report_header(const std::string& command, const std::string& input_hash, std::uint64_t master_seed,
                             const std::map<std::string, double>& constants);

nlohmann::json to_json(const StationaryDistribution& phi);
nlohmann::json to_json(const CheegerResult& c);
nlohmann::json to_json(const SymmetryCheck& s);
nlohmann::json to_json(const SubmatrixBound& b);
nlohmann::json to_json(const HardnessReport& r);
nlohmann::json to_json(const CoverLengthEstimate& e);
nlohmann::json to_json(const ExploitReport& r);
nlohmann::json to_json(const SweepResult& r);

/// Constants that determine a hardness report, by name.
std::map<std::string, double> constants_of(const HardnessOptions& o);

/// Columns: size,S,A,metric_value,censored
std::string sweep_csv(const SweepResult& r);

}  // namespace mdpx
