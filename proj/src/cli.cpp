#include "tsembed/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "tsembed/embeddings.hpp"
#include "tsembed/io.hpp"
#include "tsembed/lagrangian.hpp"
#include "tsembed/solvers.hpp"

namespace tsembed::cli {

namespace {

std::vector<double> parse_numbers(const std::string& csv, const std::string& what) {
    std::vector<double> out;
    std::stringstream ss(csv);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        try {
            std::size_t pos = 0;
            out.push_back(std::stod(cell, &pos));
            if (pos != cell.size()) throw std::invalid_argument(cell);
        } catch (const std::exception&) {
            throw DomainError("cannot parse number '" + cell + "' in " + what);
        }
    }
    return out;
}

long long as_integer(double v, const std::string& what) {
    if (std::floor(v) != v) throw DomainError(what + " must be an integer");
    return static_cast<long long>(v);
}

std::string default_scale(const std::string& command) {
    if (command == "coherence") return "random:50,0.01,0.05,7";
    if (command == "energy") return "uniform:0,100,10000";
    if (command == "compare") return "uniform:0,10,100";
    if (command == "order") return "uniform:0,1,10";
    return "uniform:0,1,100";
}

std::string dump(const nlohmann::json& j) { return j.dump(2) + "\n"; }

template <typename Writer>
void write_with(const std::filesystem::path& path, Writer&& w) {
    std::ostringstream os;
    w(os);
    io::write_file(path, os.str());
}

nlohmann::json scale_info(const std::string& spec, const TimeScale& ts) {
    return {{"spec", spec},
            {"points", ts.size()},
            {"a", ts.front()},
            {"b", ts.back()},
            {"uniform", ts.is_uniform()}};
}

double seed_x1(const ExperimentConfig& cfg, const Potential& p, const TimeScale& ts) {
    if (cfg.x1) return *cfg.x1;
    const double t[2] = {ts[0], ts[1]};
    return reference_solution(p, cfg.x0, cfg.v0, t)[1];
}

Trajectory simulate(const ExperimentConfig& cfg, Scheme scheme, const Potential& p,
                    const TimeScale& ts) {
    switch (scheme) {
        case Scheme::differential:
            return solve_differential_scheme(ts, p, cfg.x0, seed_x1(cfg, p, ts));
        case Scheme::variational:
            return solve_variational(ts, mechanical(p), cfg.x0, seed_x1(cfg, p, ts),
                                     {cfg.newton_tol, cfg.newton_max_iter});
        case Scheme::reference:
            return {ts, reference_solution(p, cfg.x0, cfg.v0, ts.points()), Scheme::reference,
                    p.name, {cfg.x0, cfg.v0}};
    }
    throw DomainError("unknown scheme");
}

double max_momentum(const TimeScale& ts, const Lagrangian& l, const GridFunction& x) {
    double m = 1.0;
    for (double p : apply_along(l, ts, x, Partial::d3).values()) m = std::max(m, std::abs(p));
    return m;
}

}  // namespace

TimeScale random_scale(std::size_t n, double mu_min, double mu_max, std::uint64_t seed, double a) {
    if (n < 3) throw DomainError("random scale needs at least 3 points");
    if (!(mu_min > 0.0) || !(mu_max >= mu_min)) {
        throw DomainError("random scale needs 0 < mu_min <= mu_max");
    }
    std::mt19937_64 gen(seed);
    std::vector<double> pts(n);
    pts[0] = a;
    for (std::size_t k = 1; k < n; ++k) {
        // Top 53 bits give a uniform double in [0, 1) independent of the
        // standard library's distribution implementation.
        const double u = static_cast<double>(gen() >> 11) * 0x1.0p-53;
        pts[k] = pts[k - 1] + mu_min + (mu_max - mu_min) * u;
    }
    return TimeScale::arbitrary(std::move(pts));
}

TimeScale parse_scale(const std::string& spec, std::optional<std::uint64_t> seed_override) {
    const auto colon = spec.find(':');
    if (colon == std::string::npos) throw DomainError("scale spec '" + spec + "' lacks a kind");
    const std::string kind = spec.substr(0, colon);
    const std::string args = spec.substr(colon + 1);
    if (kind == "file") return io::load_timescale(args);

    const auto v = parse_numbers(args, "scale spec '" + spec + "'");
    if (kind == "uniform") {
        if (v.size() != 3) throw DomainError("uniform spec needs a,b,N");
        const long long n = as_integer(v[2], "N");
        if (n < 2) throw DomainError("uniform scale requires N >= 2");
        return TimeScale::uniform(v[0], v[1], static_cast<std::size_t>(n));
    }
    if (kind == "qscale") {
        if (v.size() != 3) throw DomainError("qscale spec needs q,kmin,kmax");
        return TimeScale::qscale(v[0], static_cast<int>(as_integer(v[1], "kmin")),
                                 static_cast<int>(as_integer(v[2], "kmax")));
    }
    if (kind == "random") {
        if (v.size() != 4) throw DomainError("random spec needs n,mumin,mumax,seed");
        const long long n = as_integer(v[0], "n");
        const long long seed = as_integer(v[3], "seed");
        if (n < 3) throw DomainError("random scale needs at least 3 points");
        if (seed < 0) throw DomainError("seed must be non-negative");
        return random_scale(static_cast<std::size_t>(n), v[1], v[2],
                            seed_override.value_or(static_cast<std::uint64_t>(seed)));
    }
    throw DomainError("unknown scale kind '" + kind + "'");
}

void ExperimentConfig::merge_json(const nlohmann::json& j) {
    if (!j.is_object()) throw DomainError("config must be a JSON object");
    try {
        if (j.contains("command")) command = j["command"].get<std::string>();
        if (j.contains("problem")) problem = j["problem"].get<std::string>();
        if (j.contains("scale")) scale = j["scale"].get<std::string>();
        if (j.contains("scheme")) scheme = j["scheme"].get<std::string>();
        if (j.contains("x0")) x0 = j["x0"].get<double>();
        if (j.contains("x1")) x1 = j["x1"].get<double>();
        if (j.contains("v0")) v0 = j["v0"].get<double>();
        if (j.contains("h_list")) h_list = j["h_list"].get<std::vector<double>>();
        if (j.contains("tol")) newton_tol = j["tol"].get<double>();
        if (j.contains("max_iter")) newton_max_iter = j["max_iter"].get<int>();
        if (j.contains("coherence_tol")) coherence_tol = j["coherence_tol"].get<double>();
        if (j.contains("band")) {
            const auto b = j["band"].get<std::vector<double>>();
            if (b.size() != 2) throw DomainError("band must have two entries");
            band = std::pair{b[0], b[1]};
        }
        if (j.contains("seed")) seed = j["seed"].get<std::uint64_t>();
        if (j.contains("perturb")) perturb = j["perturb"].get<bool>();
        if (j.contains("perturb_size")) perturb_size = j["perturb_size"].get<double>();
        if (j.contains("out")) out = j["out"].get<std::string>();
    } catch (const nlohmann::json::exception& e) {
        throw DomainError(std::string("bad config value: ") + e.what());
    }
}

std::pair<double, double> default_band(const std::string& scheme) {
    if (scheme == "differential") return {0.85, 1.15};
    if (scheme == "variational") return {1.85, 2.15};
    throw DomainError("no default order band for scheme '" + scheme + "'");
}

int cmd_simulate(const ExperimentConfig& cfg, std::ostream& out, std::ostream&) {
    const std::string spec = cfg.scale.value_or(default_scale(cfg.command));
    const TimeScale ts = parse_scale(spec, cfg.seed);
    const Potential p = find_potential(cfg.problem);
    const Lagrangian l = mechanical(p);
    const Scheme scheme = parse_scheme(cfg.scheme.value_or("variational"));

    const Trajectory tr = simulate(cfg, scheme, p, ts);
    const Residual r_diff = residual_differential(ts, l, tr.x);
    const Residual r_var = residual_variational_backward(ts, l, tr.x);
    const Residual r_int = residual_integral(ts, l, tr.x);
    const EnergySeries energy = energy_series(tr, l);

    write_with(cfg.out / "trajectory.csv", [&](std::ostream& os) { io::write_trajectory_csv(os, tr, l); });
    for (const Residual* r : {&r_diff, &r_var, &r_int}) {
        write_with(cfg.out / ("residual_" + to_string(r->kind) + ".csv"),
                   [&](std::ostream& os) { io::write_residual_csv(os, ts, *r); });
    }

    nlohmann::json summary;
    summary["command"] = "simulate";
    summary["problem"] = cfg.problem;
    summary["scheme"] = to_string(scheme);
    summary["scale"] = scale_info(spec, ts);
    summary["seed_data"] = {tr.seed_data.first, tr.seed_data.second};
    summary["residuals"] = {{"differential", io::residual_summary(ts, r_diff)},
                            {"variational_backward", io::residual_summary(ts, r_var)},
                            {"integral", io::residual_summary(ts, r_int)}};
    summary["action"] = action(ts, l, tr.x);
    summary["action_usual"] = action_usual(ts, l, tr.x);
    summary["energy_drift"] = energy.drift;
    io::write_file(cfg.out / "summary.json", dump(summary));
    out << dump(summary);
    return kSuccess;
}

int cmd_order(const ExperimentConfig& cfg, std::ostream& out, std::ostream& err) {
    const std::string spec = cfg.scale.value_or(default_scale(cfg.command));
    const TimeScale interval = parse_scale(spec, cfg.seed);
    const Potential p = find_potential(cfg.problem);
    const std::string scheme_name = cfg.scheme.value_or("variational");
    const Scheme scheme = parse_scheme(scheme_name);
    const auto band = cfg.band.value_or(default_band(scheme_name));

    const ConvergenceReport rep =
        convergence_order(scheme, p, interval.front(), interval.back(), cfg.x0, cfg.v0, cfg.h_list);

    nlohmann::json j = io::to_json(rep);
    j["band"] = {band.first, band.second};
    const bool in_band = !rep.degenerate && rep.slope >= band.first && rep.slope <= band.second;
    j["in_band"] = in_band;
    io::write_file(cfg.out / ("order_" + scheme_name + ".json"), dump(j));
    write_with(cfg.out / ("order_" + scheme_name + "_loglog.csv"),
               [&](std::ostream& os) { io::write_loglog_csv(os, rep); });
    out << dump(j);

    if (rep.degenerate) {
        err << "warning: errors at rounding level, slope fit is degenerate\n";
        return kSuccess;
    }
    if (!in_band) {
        err << "slope " << io::format_double(rep.slope) << " outside band [" << band.first << ", "
            << band.second << "]\n";
        return kBandFailure;
    }
    return kSuccess;
}

int cmd_coherence(const ExperimentConfig& cfg, std::ostream& out, std::ostream& err) {
    const std::string spec = cfg.scale.value_or(default_scale(cfg.command));
    const TimeScale ts = parse_scale(spec, cfg.seed);
    const Potential p = find_potential(cfg.problem);
    const Lagrangian l = mechanical(p);

    const Trajectory tr = simulate(cfg, Scheme::variational, p, ts);
    std::vector<double> x(tr.x.values().begin(), tr.x.values().end());
    if (cfg.perturb) {
        std::mt19937_64 gen(cfg.seed.value_or(0));
        for (std::size_t k = 1; k + 1 < x.size(); ++k) {
            x[k] += (gen() & 1U) ? cfg.perturb_size : -cfg.perturb_size;
        }
    }
    const GridFunction xs(Domain::full, std::move(x));

    const Residual grad{action_gradient(ts, l, xs), ResidualKind::variational_backward, std::nullopt};
    const double grad_norm = grad.inf_norm();
    const double int_norm = residual_integral(ts, l, xs).inf_norm();
    const double diff_norm = residual_differential(ts, l, xs).inf_norm();
    const double threshold = cfg.coherence_tol * max_momentum(ts, l, xs);
    const bool grad_ok = grad_norm <= threshold;
    const bool int_ok = int_norm <= threshold;

    nlohmann::json j;
    j["command"] = "coherence";
    j["problem"] = cfg.problem;
    j["scale"] = scale_info(spec, ts);
    j["perturbed"] = cfg.perturb;
    j["gradient_inf_norm"] = grad_norm;
    j["integral_inf_norm"] = int_norm;
    j["differential_inf_norm"] = diff_norm;
    j["threshold"] = threshold;
    j["coherent"] = grad_ok && int_ok;
    j["biconditional_holds"] = grad_ok == int_ok;
    io::write_file(cfg.out / "coherence.json", dump(j));
    out << dump(j);

    if (grad_ok && int_ok) return kSuccess;
    err << "coherence norms above threshold " << io::format_double(threshold) << "\n";
    return kBandFailure;
}

int cmd_energy(const ExperimentConfig& cfg, std::ostream& out, std::ostream&) {
    const std::string spec = cfg.scale.value_or(default_scale(cfg.command));
    const TimeScale ts = parse_scale(spec, cfg.seed);
    if (!ts.is_uniform()) throw DomainError("energy comparison requires a uniform scale");
    const Potential p = find_potential(cfg.problem);
    const Lagrangian l = mechanical(p);

    const EnergySeries e_diff = energy_series(simulate(cfg, Scheme::differential, p, ts), l);
    const EnergySeries e_var = energy_series(simulate(cfg, Scheme::variational, p, ts), l);

    write_with(cfg.out / "energy_differential.csv", [&](std::ostream& os) { io::write_energy_csv(os, e_diff); });
    write_with(cfg.out / "energy_variational.csv", [&](std::ostream& os) { io::write_energy_csv(os, e_var); });

    nlohmann::json j;
    j["command"] = "energy";
    j["problem"] = cfg.problem;
    j["scale"] = scale_info(spec, ts);
    j["drift_differential"] = e_diff.drift;
    j["drift_variational"] = e_var.drift;
    j["ratio"] = e_var.drift > 0.0 ? nlohmann::json(e_diff.drift / e_var.drift) : nlohmann::json(nullptr);
    j["sign_changes_variational"] = e_var.sign_changes();
    io::write_file(cfg.out / "energy.json", dump(j));
    out << dump(j);
    return kSuccess;
}

int cmd_compare(const ExperimentConfig& cfg, std::ostream& out, std::ostream&) {
    const std::string spec = cfg.scale.value_or(default_scale(cfg.command));
    const TimeScale ts = parse_scale(spec, cfg.seed);
    if (!ts.is_uniform()) throw DomainError("compare requires a uniform scale (differential scheme)");
    const Potential p = find_potential(cfg.problem);

    const Trajectory diff = simulate(cfg, Scheme::differential, p, ts);
    const Trajectory var = simulate(cfg, Scheme::variational, p, ts);
    const GridFunction ref = reference_solution(p, cfg.x0, cfg.v0, ts.points());

    double max_diff = 0.0;
    double max_var = 0.0;
    write_with(cfg.out / "compare.csv", [&](std::ostream& os) {
        os << "t,x_differential,x_variational,x_reference,err_differential,err_variational\n";
        for (std::size_t k = 0; k <= ts.last(); ++k) {
            const double ed = std::abs(diff.x[k] - ref[k]);
            const double ev = std::abs(var.x[k] - ref[k]);
            max_diff = std::max(max_diff, ed);
            max_var = std::max(max_var, ev);
            os << io::format_double(ts[k]) << ',' << io::format_double(diff.x[k]) << ','
               << io::format_double(var.x[k]) << ',' << io::format_double(ref[k]) << ','
               << io::format_double(ed) << ',' << io::format_double(ev) << '\n';
        }
    });

    nlohmann::json j;
    j["command"] = "compare";
    j["problem"] = cfg.problem;
    j["scale"] = scale_info(spec, ts);
    j["max_err_differential"] = max_diff;
    j["max_err_variational"] = max_var;
    io::write_file(cfg.out / "compare.json", dump(j));
    out << dump(j);
    return kSuccess;
}

int execute(const ExperimentConfig& cfg, std::ostream& out, std::ostream& err) {
    try {
        if (cfg.command == "simulate") return cmd_simulate(cfg, out, err);
        if (cfg.command == "order") return cmd_order(cfg, out, err);
        if (cfg.command == "coherence") return cmd_coherence(cfg, out, err);
        if (cfg.command == "energy") return cmd_energy(cfg, out, err);
        if (cfg.command == "compare") return cmd_compare(cfg, out, err);
        err << "error: unknown command '" << cfg.command << "'\n";
        return kValidation;
    } catch (const SolverError& e) {
        err << "solver error at step " << e.step() << ": " << e.what()
            << " (last residual " << io::format_double(e.last_residual()) << ")\n";
        return kSolverFailure;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << "\n";
        return kValidation;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "error: " << e.what() << "\n";
        return kValidation;
    }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Delta-calculus embeddings of Lagrangian systems: experiments"};
    app.set_help_flag("-h,--help", "Print this help message and exit");

    std::string command;
    std::string problem;
    std::string scale;
    std::string scheme;
    double x0 = 0.0;
    double x1 = 0.0;
    double v0 = 0.0;
    std::string h_list;
    double tol = 0.0;
    double coherence_tol = 0.0;
    std::string band;
    std::uint64_t seed = 0;
    std::string out_dir;
    std::string config_path;

    app.add_option("command", command, "simulate | order | coherence | energy | compare")
        ->required()
        ->check(CLI::IsMember({"simulate", "order", "coherence", "energy", "compare"}));
    auto* o_problem = app.add_option("--problem", problem, "free | harmonic | quartic | pendulum");
    auto* o_scale = app.add_option("--scale", scale,
                                   "uniform:a,b,N | qscale:q,kmin,kmax | random:n,mumin,mumax,seed | file:PATH");
    auto* o_scheme = app.add_option("--scheme", scheme, "differential | variational | reference");
    auto* o_x0 = app.add_option("--x0", x0, "initial position");
    auto* o_x1 = app.add_option("--x1", x1, "second startup value (default: from the reference solution)");
    auto* o_v0 = app.add_option("--v0", v0, "initial velocity used to seed x1 and the reference");
    auto* o_h = app.add_option("--h-list", h_list, "comma-separated decreasing step sizes");
    auto* o_tol = app.add_option("--tol", tol, "Newton tolerance");
    auto* o_ctol = app.add_option("--coherence-tol", coherence_tol, "coherence threshold (scaled by max |p|)");
    auto* o_band = app.add_option("--band", band, "order acceptance band lo,hi");
    auto* o_seed = app.add_option("--seed", seed, "seed for random scales and perturbations");
    auto* o_perturb = app.add_flag("--perturb", "perturb interior points before the coherence check");
    auto* o_out = app.add_option("--out", out_dir, "output directory");
    app.add_option("--config", config_path, "JSON config mirroring the options");

    std::vector<const char*> argv{"tsembed"};
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? kSuccess : kValidation;
    }

    ExperimentConfig cfg;
    try {
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            if (!in) throw DomainError("cannot open config " + config_path);
            nlohmann::json j;
            try {
                in >> j;
            } catch (const nlohmann::json::exception& e) {
                throw DomainError(std::string("invalid config JSON: ") + e.what());
            }
            cfg.merge_json(j);
        }
        cfg.command = command;
        if (o_problem->count()) cfg.problem = problem;
        if (o_scale->count()) cfg.scale = scale;
        if (o_scheme->count()) cfg.scheme = scheme;
        if (o_x0->count()) cfg.x0 = x0;
        if (o_x1->count()) cfg.x1 = x1;
        if (o_v0->count()) cfg.v0 = v0;
        if (o_h->count()) cfg.h_list = parse_numbers(h_list, "--h-list");
        if (o_tol->count()) cfg.newton_tol = tol;
        if (o_ctol->count()) cfg.coherence_tol = coherence_tol;
        if (o_band->count()) {
            const auto b = parse_numbers(band, "--band");
            if (b.size() != 2 || !(b[0] <= b[1])) throw DomainError("--band needs lo,hi with lo <= hi");
            cfg.band = std::pair{b[0], b[1]};
        }
        if (o_seed->count()) cfg.seed = seed;
        if (o_perturb->count()) cfg.perturb = true;
        if (o_out->count()) cfg.out = out_dir;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << "\n";
        return kValidation;
    }
    return execute(cfg, out, err);
}

}  // namespace tsembed::cli
