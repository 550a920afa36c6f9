#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mdpx/domains.hpp"

namespace mdpx {

/// Parametric domain families. Size meaning: chain -> n; grid -> k for a
/// k x k open grid; two_room -> k for a (2k+1) x k two-room layout.
enum class SweepFamily { Chain, Grid, TwoRoom };
enum class SweepMetric { InvPhiMin, LambdaInv, LaplacianCoverBound, EmpiricalCover, Diameter };

SweepFamily parse_family(const std::string& name);
SweepMetric parse_metric(const std::string& name);
std::string to_string(SweepFamily f);
std::string to_string(SweepMetric m);

DomainSpec family_member(SweepFamily family, int size, double gamma = kDefaultGamma);

struct SweepOptions {
    double gamma = kDefaultGamma;
    // empirical_cover only
    std::size_t cover_trials = 64;
    std::size_t cover_horizon = 1'000'000;
    std::uint64_t seed = 0;
};

struct SweepPoint {
    int size = 0;
    std::size_t num_states = 0;
    std::size_t num_actions = 0;
    double value = 0.0;
    bool censored = false;
};

/// Least-squares fits over finite, positive, uncensored points:
/// log2(value) against size, and ln(value) against ln(S).
struct SweepResult {
    SweepFamily family = SweepFamily::Chain;
    SweepMetric metric = SweepMetric::InvPhiMin;
    std::vector<SweepPoint> points;
    double log2_slope = 0.0;
    double loglog_exponent = 0.0;
    std::vector<double> log2_residuals;
    std::vector<double> loglog_residuals;
    std::string classification;  // "exponential-like" if log2_slope > 0.5, else "polynomial-like"
};

/// Sizes must be strictly ascending. Throws ReducibleChainError for reducible
/// members and std::invalid_argument for unusable inputs.
SweepResult run_sweep(SweepFamily family, const std::vector<int>& sizes, SweepMetric metric,
                      const SweepOptions& options = {});

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    std::vector<double> residuals;
};
LinearFit least_squares(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace mdpx
