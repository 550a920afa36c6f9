#include "mdpx/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "mdpx/bounds.hpp"
#include "mdpx/domains.hpp"
#include "mdpx/io.hpp"
#include "mdpx/learn.hpp"
#include "mdpx/parallel.hpp"
#include "mdpx/report.hpp"
#include "mdpx/sim.hpp"
#include "mdpx/spectral.hpp"
#include "mdpx/sweep.hpp"

namespace mdpx {

using nlohmann::json;

namespace {

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct LoadedMdp {
    TabularMdp mdp;
    std::string hash;
    json component = nullptr;
};

LoadedMdp load_mdp(const RunConfig& cfg) {
    const std::string text = read_file(cfg.input);
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(cfg.input + ": " + e.what());
    }
    TabularMdp mdp = mdp_from_json(j);
    if (cfg.renormalize) mdp = mdp.renormalized();
    auto report = validate_mdp(mdp);
    if (!report.ok()) throw InvalidMdpError(std::move(report));
    LoadedMdp loaded{std::move(mdp), fnv1a64_hex(text)};
    if (cfg.component) {
        const auto cs = component_structure(random_walk_matrix(loaded.mdp));
        if (*cfg.component >= cs.closed_components.size()) {
            throw std::invalid_argument("--component " + std::to_string(*cfg.component) + " out of range: " +
                                        cs.describe());
        }
        const auto& states = cs.closed_components[*cfg.component];
        loaded.mdp = restrict_to_states(loaded.mdp, states);
        loaded.component = {{"index", *cfg.component},
                            {"states", states},
                            {"note", "analysis restricted to one closed strongly connected component"}};
    }
    return loaded;
}

void emit(const RunConfig& cfg, const std::string& text, std::ostream& out) {
    if (cfg.output_path.empty()) {
        out << text;
        return;
    }
    std::ofstream file(cfg.output_path, std::ios::binary);
    if (!file) throw std::runtime_error("cannot write " + cfg.output_path);
    file << text;
}

void emit_json(const RunConfig& cfg, const json& j, std::ostream& out) { emit(cfg, j.dump(2) + "\n", out); }

void require_format(const RunConfig& cfg, std::initializer_list<const char*> allowed) {
    for (const char* f : allowed)
        if (cfg.format == f) return;
    throw UsageError("--format " + cfg.format + " is not supported by '" + cfg.command + "'");
}

std::string fmt_double(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

Cell parse_cell(const std::string& text) {
    Cell c;
    char comma = 0;
    std::istringstream is(text);
    if (!(is >> c.x >> comma >> c.y) || comma != ',') throw UsageError("expected x,y but got '" + text + "'");
    return c;
}

int cmd_generate(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    DomainSpec spec;
    const std::string& kind = cfg.input;
    if (kind == "chain") {
        spec = ChainParams{cfg.n, cfg.gamma};
    } else if (kind == "grid" || kind == "two_room") {
        GridParams g = kind == "grid" ? GridParams{} : two_room_layout(cfg.width, cfg.height);
        g.width = cfg.width;
        g.height = cfg.height;
        g.slip = cfg.slip;
        g.gamma = cfg.gamma;
        if (!cfg.walls_file.empty()) {
            json walls = json::parse(read_file(cfg.walls_file));
            for (const auto& w : walls) g.walls.push_back({w.at(0).get<int>(), w.at(1).get<int>()});
        }
        for (const auto& goal : cfg.goals) g.goals.push_back(parse_cell(goal));
        spec = g;
    } else if (kind == "taxi") {
        spec = TaxiParams{cfg.gamma};
    } else if (kind == "random") {
        RandomParams r;
        r.num_states = cfg.states;
        r.num_actions = cfg.actions;
        r.density = cfg.density;
        r.seed = cfg.master_seed;
        r.gamma = cfg.gamma;
        spec = r;
    } else {
        throw UsageError("unknown generator kind '" + kind + "' (chain, grid, two_room, taxi, random)");
    }
    std::vector<std::string> warnings;
    const TabularMdp mdp = generate(spec, &warnings);
    for (const auto& w : warnings) err << "warning: " << w << "\n";
    emit(cfg, mdp_to_json(mdp).dump() + "\n", out);
    return 0;
}

int cmd_analyze(const RunConfig& cfg, std::ostream& out) {
    require_format(cfg, {"json", "csv"});
    const auto loaded = load_mdp(cfg);
    const auto& mdp = loaded.mdp;
    const TransitionMatrix p = random_walk_matrix(mdp);
    const auto cs = component_structure(p);
    const StationaryDistribution phi = stationary_distribution(p);
    const SpectralSummary spectrum = chung_laplacian(p, phi);

    if (cfg.format == "csv") {
        std::ostringstream os;
        os << "state,label,phi\n";
        for (StateId s = 0; s < mdp.num_states(); ++s)
            os << s << "," << mdp.label(s) << "," << fmt_double(phi[s]) << "\n";
        emit(cfg, os.str(), out);
        return 0;
    }

    json j = report_header("analyze", loaded.hash, cfg.master_seed,
                           {{"probability_tol", kProbabilityTolerance},
                            {"zero_eigenvalue_tol", kZeroEigenvalueTolerance}});
    j["mdp"] = {{"num_states", mdp.num_states()},
                {"num_actions", mdp.num_actions()},
                {"gamma", mdp.gamma()},
                {"r_max", mdp.r_max()}};
    j["component"] = loaded.component;
    j["irreducible"] = cs.is_strongly_connected;
    j["stationary"] = to_json(phi);
    j["lambda"] = spectrum.lambda;
    if (cfg.spectrum) {
        std::vector<double> ev(spectrum.eigenvalues.data(), spectrum.eigenvalues.data() + spectrum.eigenvalues.size());
        j["eigenvalues"] = ev;
    }
    if (cfg.cheeger) {
        const CheegerResult c = cheeger_constant(p, phi);
        const CheegerSandwich sw = check_cheeger_sandwich(c.h, spectrum.lambda);
        j["cheeger"] = to_json(c);
        j["cheeger_sandwich"] = {{"chung_form_2h_ge_lambda_ge_h2_over_2", sw.chung_form_holds},
                                 {"stated_form_h_ge_lambda_ge_h2_over_2", sw.strict_form_holds},
                                 {"stated_form_violated", !sw.strict_form_holds}};
    }
    if (cfg.symmetry) {
        const SymmetryCheck sym = locally_symmetric(mdp);
        j["symmetry"] = to_json(sym);
        if (sym.symmetric) {
            const WeightedGraph g = undirected_equivalent(mdp);
            std::vector<double> dist(g.distribution.data(), g.distribution.data() + g.distribution.size());
            j["symmetry"]["undirected_distribution"] = dist;
        }
    }
    emit_json(cfg, j, out);
    return 0;
}

HardnessOptions hardness_options(const RunConfig& cfg) {
    HardnessOptions o;
    auto get = [&](const char* name, double& target) {
        if (auto it = cfg.constants.find(name); it != cfg.constants.end()) target = it->second;
    };
    get("constant_c1", o.action_variation_c);
    get("constant_c2", o.t0_c);
    get("omega", o.omega);
    get("epsilon", o.epsilon);
    get("delta", o.delta);
    if (auto it = cfg.constants.find("vmax"); it != cfg.constants.end()) o.v_max = it->second;
    return o;
}

void flatten(const json& j, const std::string& prefix, std::ostream& os) {
    if (j.is_object()) {
        for (const auto& [k, v] : j.items()) flatten(v, prefix.empty() ? k : prefix + "." + k, os);
    } else if (j.is_array()) {
        for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], prefix + "." + std::to_string(i), os);
    } else if (j.is_number_float()) {
        os << prefix << "," << fmt_double(j.get<double>()) << "\n";
    } else {
        os << prefix << "," << (j.is_string() ? j.get<std::string>() : j.dump()) << "\n";
    }
}

int cmd_bounds(const RunConfig& cfg, std::ostream& out) {
    require_format(cfg, {"json", "csv"});
    const auto loaded = load_mdp(cfg);
    const HardnessOptions options = hardness_options(cfg);
    const HardnessReport report = hardness_report(loaded.mdp, options);
    auto constants = constants_of(options);
    constants["vmax"] = report.v_max;
    json j = report_header("bounds", loaded.hash, cfg.master_seed, constants);
    j["component"] = loaded.component;
    j["report"] = to_json(report);
    if (cfg.format == "csv") {
        std::ostringstream os;
        os << "key,value\n";
        flatten(j, "", os);
        emit(cfg, os.str(), out);
    } else {
        emit_json(cfg, j, out);
    }
    return 0;
}

int cmd_cover(const RunConfig& cfg, std::ostream& out) {
    require_format(cfg, {"json", "csv"});
    const auto loaded = load_mdp(cfg);
    const CoverLengthEstimate est = estimate_cover_length(loaded.mdp, cfg.trials, cfg.horizon, cfg.master_seed);
    if (cfg.format == "csv") {
        std::ostringstream os;
        os << "state,action,median,censored\n";
        for (std::size_t i = 0; i < est.per_start_median.size(); ++i) {
            os << i / est.num_actions << "," << i % est.num_actions << "," << fmt_double(est.per_start_median[i])
               << "," << (est.per_start_median[i] > static_cast<double>(est.horizon) ? "true" : "false") << "\n";
        }
        emit(cfg, os.str(), out);
        return 0;
    }
    json j = report_header("cover", loaded.hash, cfg.master_seed,
                           {{"trials", static_cast<double>(cfg.trials)}, {"horizon", static_cast<double>(cfg.horizon)}});
    j["component"] = loaded.component;
    j["cover"] = to_json(est);
    emit_json(cfg, j, out);
    return 0;
}

int cmd_reach(const RunConfig& cfg, std::ostream& out) {
    require_format(cfg, {"json"});
    const auto loaded = load_mdp(cfg);
    const TransitionMatrix p = random_walk_matrix(loaded.mdp);
    if (cfg.from >= p.size() || cfg.to >= p.size()) throw std::invalid_argument("--from/--to out of range");
    json j = report_header("reach", loaded.hash, cfg.master_seed, {{"k", static_cast<double>(cfg.k)}});
    j["component"] = loaded.component;
    j["from"] = cfg.from;
    j["to"] = cfg.to;
    j["k"] = cfg.k;
    j["exact_reach_prob"] = exact_reach_prob(p, cfg.from, cfg.to, cfg.k);
    const StationaryDistribution phi = stationary_distribution(p);
    const double lambda = chung_laplacian(p, phi).lambda;
    j["lower_bound"] = reach_prob_lower_bound(cfg.from, cfg.to, static_cast<double>(cfg.k), phi.phi, lambda);
    j["k0"] = k0(phi.phi_min, lambda);
    emit_json(cfg, j, out);
    return 0;
}

int cmd_learn(const RunConfig& cfg, std::ostream& out) {
    require_format(cfg, {"json"});
    const auto loaded = load_mdp(cfg);
    const auto& mdp = loaded.mdp;
    const double v_max = mdp.r_max() / (1.0 - mdp.gamma());
    const double epsilon = cfg.epsilon.value_or(0.1 * v_max);
    double omega = kDefaultOmega;
    if (auto it = cfg.constants.find("omega"); it != cfg.constants.end()) omega = it->second;
    if (cfg.seeds < 1) throw UsageError("--seeds must be >= 1");

    std::vector<ExploitReport> runs(cfg.seeds);
    // Each run is single-threaded; parallelism is across seeds.
    parallel_for(cfg.seeds, [&](std::size_t i) {
        runs[i] = explore_then_exploit(mdp, cfg.steps, omega, epsilon, cfg.master_seed + i);
    });
    json j = report_header("learn", loaded.hash, cfg.master_seed,
                           {{"steps", static_cast<double>(cfg.steps)},
                            {"omega", omega},
                            {"epsilon", epsilon},
                            {"v_max", v_max},
                            {"seeds", static_cast<double>(cfg.seeds)}});
    j["component"] = loaded.component;
    j["start_state"] = "uniform";
    json list = json::array();
    std::size_t successes = 0;
    for (const auto& r : runs) {
        list.push_back(to_json(r));
        successes += r.success ? 1 : 0;
    }
    j["runs"] = std::move(list);
    j["success_count"] = successes;
    emit_json(cfg, j, out);
    return 0;
}

std::vector<int> parse_sizes(const std::string& text) {
    std::vector<int> sizes;
    if (auto dots = text.find(".."); dots != std::string::npos) {
        int lo = 0, hi = 0;
        try {
            lo = std::stoi(text.substr(0, dots));
            hi = std::stoi(text.substr(dots + 2));
        } catch (const std::exception&) {
            throw UsageError("--sizes expects A..B or a comma list, got '" + text + "'");
        }
        if (hi < lo) throw UsageError("--sizes range is empty");
        for (int s = lo; s <= hi; ++s) sizes.push_back(s);
        return sizes;
    }
    std::istringstream is(text);
    std::string item;
    while (std::getline(is, item, ',')) {
        try {
            sizes.push_back(std::stoi(item));
        } catch (const std::exception&) {
            throw UsageError("--sizes expects A..B or a comma list, got '" + text + "'");
        }
    }
    if (sizes.empty()) throw UsageError("--sizes is empty");
    return sizes;
}

int cmd_sweep(const RunConfig& cfg, std::ostream& out) {
    require_format(cfg, {"json", "csv"});
    SweepFamily family;
    SweepMetric metric;
    try {
        family = parse_family(cfg.input);
        metric = parse_metric(cfg.metric);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    SweepOptions options;
    options.gamma = cfg.gamma;
    options.cover_trials = cfg.trials;
    options.cover_horizon = cfg.horizon;
    options.seed = cfg.master_seed;
    const SweepResult result = run_sweep(family, parse_sizes(cfg.sizes), metric, options);
    if (cfg.format == "csv") {
        emit(cfg, sweep_csv(result), out);
        return 0;
    }
    json j = report_header("sweep", "", cfg.master_seed,
                           {{"gamma", options.gamma},
                            {"cover_trials", static_cast<double>(options.cover_trials)},
                            {"cover_horizon", static_cast<double>(options.cover_horizon)},
                            {"exponential_threshold_log2_slope", 0.5}});
    j["sweep"] = to_json(result);
    emit_json(cfg, j, out);
    return 0;
}

int cmd_report(const RunConfig& cfg, std::ostream& out) {
    require_format(cfg, {"json"});
    const auto loaded = load_mdp(cfg);
    const HardnessOptions options = hardness_options(cfg);
    const HardnessReport report = hardness_report(loaded.mdp, options);
    const CoverLengthEstimate est = estimate_cover_length(loaded.mdp, cfg.trials, cfg.horizon, cfg.master_seed);
    auto constants = constants_of(options);
    constants["vmax"] = report.v_max;
    constants["trials"] = static_cast<double>(cfg.trials);
    constants["horizon"] = static_cast<double>(cfg.horizon);
    json j = report_header("report", loaded.hash, cfg.master_seed, constants);
    j["component"] = loaded.component;
    j["report"] = to_json(report);
    j["cover"] = to_json(est);
    j["empirical_vs_bounds"] = {
        {"empirical_le_laplacian_bound", est.estimate <= report.laplacian_cover_bound},
        {"empirical_le_submatrix_bound", est.estimate <= report.submatrix_cover_bound.value},
        {"empirical_censored", est.censored}};
    emit_json(cfg, j, out);
    return 0;
}

}  // namespace

int dispatch(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    try {
        if (cfg.workers) set_worker_count(*cfg.workers);
        if (cfg.command == "generate") return cmd_generate(cfg, out, err);
        if (cfg.command == "analyze") return cmd_analyze(cfg, out);
        if (cfg.command == "bounds") return cmd_bounds(cfg, out);
        if (cfg.command == "cover") return cmd_cover(cfg, out);
        if (cfg.command == "reach") return cmd_reach(cfg, out);
        if (cfg.command == "learn") return cmd_learn(cfg, out);
        if (cfg.command == "sweep") return cmd_sweep(cfg, out);
        if (cfg.command == "report") return cmd_report(cfg, out);
        err << "unknown command '" << cfg.command << "'\n";
        return 2;
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const ReducibleChainError& e) {
        err << "error: " << e.what() << "\n"
            << "hint: rerun with --component K to analyze closed component K\n";
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    RunConfig cfg;
    CLI::App app{"Exploration-hardness analysis of tabular MDPs under random-walk exploration", "mdpx"};
    app.require_subcommand(1, 1);
    std::size_t workers = 0;
    app.add_option("--workers", workers, "worker threads (default: hardware concurrency)");

    auto add_common = [&](CLI::App* sub, bool mdp_input) {
        sub->add_option("-o,--output", cfg.output_path, "output file (default: standard output)");
        sub->add_option("--seed", cfg.master_seed, "master seed");
        if (mdp_input) {
            sub->add_option("mdp", cfg.input, "MDP JSON file")->required();
            sub->add_flag("--renormalize", cfg.renormalize, "rescale transition rows to sum to one");
            sub->add_option("--component", cfg.component, "restrict to closed component K");
        }
    };
    auto add_format = [&](CLI::App* sub, std::vector<std::string> allowed) {
        sub->add_option("--format", cfg.format, "output format")->check(CLI::IsMember(allowed));
    };
    auto add_constant = [&](CLI::App* sub, const std::string& flag, const std::string& key, const std::string& help) {
        sub->add_option_function<double>(flag, [&cfg, key](double v) { cfg.constants[key] = v; }, help);
    };

    auto* gen = app.add_subcommand("generate", "write a benchmark or random MDP");
    add_common(gen, false);
    gen->add_option("kind", cfg.input, "chain | grid | two_room | taxi | random")->required();
    gen->add_option("--n", cfg.n, "chain length");
    gen->add_option("--width", cfg.width);
    gen->add_option("--height", cfg.height);
    gen->add_option("--walls", cfg.walls_file, "JSON file with a list of [x, y] wall cells");
    gen->add_option("--goal", cfg.goals, "goal cell x,y (repeatable)");
    gen->add_option("--slip", cfg.slip);
    gen->add_option("--density", cfg.density);
    gen->add_option("--states", cfg.states);
    gen->add_option("--actions", cfg.actions);
    gen->add_option("--gamma", cfg.gamma);

    auto* analyze = app.add_subcommand("analyze", "stationary distribution, Laplacian spectrum, Cheeger, symmetry");
    add_common(analyze, true);
    add_format(analyze, {"json", "csv"});
    analyze->add_flag("--cheeger", cfg.cheeger);
    analyze->add_flag("--spectrum", cfg.spectrum);
    analyze->add_flag("--symmetry", cfg.symmetry);

    auto add_bound_constants = [&](CLI::App* sub) {
        add_constant(sub, "--constant-c1", "constant_c1", "action-variation bound constant");
        add_constant(sub, "--constant-c2", "constant_c2", "T0 constant");
        add_constant(sub, "--omega", "omega", "learning-rate exponent");
        add_constant(sub, "--epsilon", "epsilon", "accuracy");
        add_constant(sub, "--delta", "delta", "failure probability");
        add_constant(sub, "--vmax", "vmax", "value bound (default r_max/(1-gamma))");
    };
    auto* bounds = app.add_subcommand("bounds", "hardness report with all covering-length bounds");
    add_common(bounds, true);
    add_format(bounds, {"json", "csv"});
    add_bound_constants(bounds);

    auto* cover = app.add_subcommand("cover", "empirical covering length");
    add_common(cover, true);
    add_format(cover, {"json", "csv"});
    cover->add_option("--trials", cfg.trials)->check(CLI::PositiveNumber);
    cover->add_option("--horizon", cfg.horizon)->check(CLI::PositiveNumber);

    auto* reach = app.add_subcommand("reach", "exact within-k reach probability and its lower bound");
    add_common(reach, true);
    add_format(reach, {"json"});
    reach->add_option("--from", cfg.from)->required();
    reach->add_option("--to", cfg.to)->required();
    reach->add_option("--k", cfg.k)->required();

    auto* learn = app.add_subcommand("learn", "explore-then-exploit Q-learning");
    add_common(learn, true);
    add_format(learn, {"json"});
    learn->add_option("--steps", cfg.steps)->check(CLI::PositiveNumber);
    add_constant(learn, "--omega", "omega", "learning-rate exponent");
    learn->add_option("--epsilon", cfg.epsilon, "success threshold (default 0.1 * V_max)");
    learn->add_option("--seeds", cfg.seeds, "number of seeds")->check(CLI::PositiveNumber);

    auto* sweep = app.add_subcommand("sweep", "growth of a metric across a domain family");
    add_common(sweep, false);
    add_format(sweep, {"json", "csv"});
    sweep->add_option("family", cfg.input, "chain | grid | two_room")->required();
    sweep->add_option("--sizes", cfg.sizes, "A..B or a,b,c")->required();
    sweep->add_option("--metric", cfg.metric,
                      "inv_phi_min | lambda_inv | laplacian_cover_bound | empirical_cover | diameter")
        ->required();
    sweep->add_option("--trials", cfg.trials);
    sweep->add_option("--horizon", cfg.horizon);
    sweep->add_option("--gamma", cfg.gamma);

    auto* report = app.add_subcommand("report", "bounds plus an empirical covering-length estimate");
    add_common(report, true);
    add_format(report, {"json"});
    add_bound_constants(report);
    report->add_option("--trials", cfg.trials)->check(CLI::PositiveNumber);
    report->add_option("--horizon", cfg.horizon)->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, err, err);
        err << app.help();
        return 2;
    }

    cfg.command = app.get_subcommands().front()->get_name();
    if (workers > 0) cfg.workers = workers;
    if (const char* env = std::getenv("MDPX_SEED")) {
        try {
            cfg.master_seed = std::stoull(env);
        } catch (const std::exception&) {
            err << "usage error: MDPX_SEED must be an unsigned integer\n";
            return 2;
        }
    }
    if (const char* env = std::getenv("MDPX_WORKERS")) {
        try {
            cfg.workers = std::stoull(env);
        } catch (const std::exception&) {
            err << "usage error: MDPX_WORKERS must be an unsigned integer\n";
            return 2;
        }
    }
    return dispatch(cfg, out, err);
}

}  // namespace mdpx
