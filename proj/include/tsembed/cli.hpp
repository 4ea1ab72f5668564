#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "tsembed/timescale.hpp"

namespace tsembed::cli {

enum ExitCode : int {
    kSuccess = 0,
    kValidation = 1,
    kSolverFailure = 2,
    kBandFailure = 3,
};

/// Parses `uniform:a,b,N | qscale:q,kmin,kmax | random:n,mumin,mumax,seed | file:PATH`.
/// A seed override, when given, replaces the seed of a random spec.
TimeScale parse_scale(const std::string& spec, std::optional<std::uint64_t> seed_override = {});

/// n points starting at a, graininesses drawn uniformly from [mu_min, mu_max].
TimeScale random_scale(std::size_t n, double mu_min, double mu_max, std::uint64_t seed,
                       double a = 0.0);

struct ExperimentConfig {
    std::string command;
    std::string problem = "harmonic";
    std::optional<std::string> scale;   // per-command default when unset
    std::optional<std::string> scheme;  // per-command default when unset
    double x0 = 1.0;
    std::optional<double> x1;  // seeded from the reference solution when unset
    double v0 = 0.0;
    std::vector<double> h_list{0.1, 0.05, 0.025, 0.0125};
    double newton_tol = 1e-12;
    int newton_max_iter = 50;
    double coherence_tol = 1e-9;
    std::optional<std::pair<double, double>> band;  // order acceptance band
    std::optional<std::uint64_t> seed;
    bool perturb = false;
    double perturb_size = 1e-3;
    std::filesystem::path out = "out";

    /// Overlays keys present in a JSON object mirroring this struct.
    void merge_json(const nlohmann::json& j);
};

/// Default slope band for the order command.
std::pair<double, double> default_band(const std::string& scheme);

int cmd_simulate(const ExperimentConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_order(const ExperimentConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_coherence(const ExperimentConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_energy(const ExperimentConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_compare(const ExperimentConfig& cfg, std::ostream& out, std::ostream& err);

/// Dispatches a validated config; maps library exceptions onto exit codes.
int execute(const ExperimentConfig& cfg, std::ostream& out, std::ostream& err);

/// Full command-line entry point; args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace tsembed::cli
