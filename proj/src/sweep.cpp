#include "mdpx/sweep.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "mdpx/bounds.hpp"
#include "mdpx/parallel.hpp"
#include "mdpx/sim.hpp"
#include "mdpx/spectral.hpp"

namespace mdpx {

SweepFamily parse_family(const std::string& name) {
    if (name == "chain") return SweepFamily::Chain;
    if (name == "grid") return SweepFamily::Grid;
    if (name == "two_room" || name == "two-room") return SweepFamily::TwoRoom;
    throw std::invalid_argument("unknown family '" + name + "' (chain, grid, two_room)");
}

SweepMetric parse_metric(const std::string& name) {
    if (name == "inv_phi_min") return SweepMetric::InvPhiMin;
    if (name == "lambda_inv") return SweepMetric::LambdaInv;
    if (name == "laplacian_cover_bound") return SweepMetric::LaplacianCoverBound;
    if (name == "empirical_cover") return SweepMetric::EmpiricalCover;
    if (name == "diameter") return SweepMetric::Diameter;
    throw std::invalid_argument("unknown metric '" + name +
                                "' (inv_phi_min, lambda_inv, laplacian_cover_bound, empirical_cover, diameter)");
}

std::string to_string(SweepFamily f) {
    switch (f) {
        case SweepFamily::Chain:
            return "chain";
        case SweepFamily::Grid:
            return "grid";
        case SweepFamily::TwoRoom:
            return "two_room";
    }
    return "?";
}

std::string to_string(SweepMetric m) {
    switch (m) {
        case SweepMetric::InvPhiMin:
            return "inv_phi_min";
        case SweepMetric::LambdaInv:
            return "lambda_inv";
        case SweepMetric::LaplacianCoverBound:
            return "laplacian_cover_bound";
        case SweepMetric::EmpiricalCover:
            return "empirical_cover";
        case SweepMetric::Diameter:
            return "diameter";
    }
    return "?";
}

DomainSpec family_member(SweepFamily family, int size, double gamma) {
    switch (family) {
        case SweepFamily::Chain:
            return ChainParams{size, gamma};
        case SweepFamily::Grid: {
            GridParams g;
            g.width = g.height = size;
            g.gamma = gamma;
            return g;
        }
        case SweepFamily::TwoRoom: {
            GridParams g = two_room_layout(2 * size + 1, size);
            g.gamma = gamma;
            return g;
        }
    }
    throw std::invalid_argument("unknown family");
}

LinearFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) throw std::invalid_argument("least_squares: size mismatch");
    LinearFit fit;
    const auto n = static_cast<double>(x.size());
    if (x.size() < 2) {
        fit.slope = fit.intercept = std::numeric_limits<double>::quiet_NaN();
        return fit;
    }
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    fit.slope = sxx > 0.0 ? sxy / sxx : std::numeric_limits<double>::quiet_NaN();
    fit.intercept = my - fit.slope * mx;
    for (std::size_t i = 0; i < x.size(); ++i) fit.residuals.push_back(y[i] - (fit.intercept + fit.slope * x[i]));
    return fit;
}

namespace {

SweepPoint evaluate(SweepFamily family, int size, SweepMetric metric, const SweepOptions& options) {
    const TabularMdp mdp = generate(family_member(family, size, options.gamma));
    SweepPoint pt;
    pt.size = size;
    pt.num_states = mdp.num_states();
    pt.num_actions = mdp.num_actions();
    switch (metric) {
        case SweepMetric::Diameter:
            pt.value = diameter(mdp);
            return pt;
        case SweepMetric::EmpiricalCover: {
            auto est = estimate_cover_length(mdp, options.cover_trials, options.cover_horizon,
                                             options.seed + static_cast<std::uint64_t>(size));
            pt.value = est.estimate;
            pt.censored = est.censored;
            return pt;
        }
        default:
            break;
    }
    const TransitionMatrix p = random_walk_matrix(mdp);
    const StationaryDistribution phi = stationary_distribution(p);
    if (metric == SweepMetric::InvPhiMin) {
        pt.value = 1.0 / phi.phi_min;
        return pt;
    }
    const double lambda = chung_laplacian(p, phi).lambda;
    if (metric == SweepMetric::LambdaInv) {
        pt.value = 1.0 / lambda;
    } else {
        pt.value = laplacian_cover_bound(phi.phi, lambda, mdp.num_states(), mdp.num_actions());
    }
    return pt;
}

}  // namespace

SweepResult run_sweep(SweepFamily family, const std::vector<int>& sizes, SweepMetric metric,
                      const SweepOptions& options) {
    if (sizes.empty()) throw std::invalid_argument("sweep needs at least one size");
    for (std::size_t i = 1; i < sizes.size(); ++i) {
        if (sizes[i] <= sizes[i - 1]) throw std::invalid_argument("sweep sizes must be strictly ascending");
    }
    SweepResult result;
    result.family = family;
    result.metric = metric;
    result.points.resize(sizes.size());
    parallel_for(sizes.size(), [&](std::size_t i) { result.points[i] = evaluate(family, sizes[i], metric, options); });

    std::vector<double> size_x, log2_y, logs_x, ln_y;
    for (const auto& pt : result.points) {
        if (!std::isfinite(pt.value) || !(pt.value > 0.0) || pt.censored) continue;
        size_x.push_back(pt.size);
        log2_y.push_back(std::log2(pt.value));
        logs_x.push_back(std::log(static_cast<double>(pt.num_states)));
        ln_y.push_back(std::log(pt.value));
    }
    const LinearFit exp_fit = least_squares(size_x, log2_y);
    const LinearFit poly_fit = least_squares(logs_x, ln_y);
    result.log2_slope = exp_fit.slope;
    result.loglog_exponent = poly_fit.slope;
    result.log2_residuals = exp_fit.residuals;
    result.loglog_residuals = poly_fit.residuals;
    result.classification = result.log2_slope > 0.5 ? "exponential-like" : "polynomial-like";
    return result;
}

}  // namespace mdpx
