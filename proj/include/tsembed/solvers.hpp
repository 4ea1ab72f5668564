#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "tsembed/lagrangian.hpp"
#include "tsembed/timescale.hpp"

namespace tsembed {

/// A solver could not produce the next value.
class SolverError : public std::runtime_error {
public:
    SolverError(const std::string& what, std::size_t step, double last_residual)
        : std::runtime_error(what), step_(step), last_residual_(last_residual) {}

    [[nodiscard]] std::size_t step() const noexcept { return step_; }
    [[nodiscard]] double last_residual() const noexcept { return last_residual_; }

private:
    std::size_t step_;
    double last_residual_;
};

enum class Scheme { differential, variational, reference };

std::string to_string(Scheme s);
Scheme parse_scheme(const std::string& name);

struct Trajectory {
    TimeScale ts;
    GridFunction x;
    Scheme scheme;
    std::string problem;
    /// (x0, x1) for the two-step schemes, (x0, v0) for the reference.
    std::pair<double, double> seed_data;
};

/// x_{k+2} = 2 x_{k+1} - x_k - h^2 U'(x_k) on a uniform scale.
Trajectory solve_differential_scheme(const TimeScale& ts, const Potential& p, double x0, double x1);

struct NewtonOptions {
    double tol = 1e-12;
    int max_iter = 50;
};

/// Steps the discrete Euler-Lagrange equation
///   d3(t_k, x_k, v_k) - mu_k d2(t_k, x_k, v_k) = d3(t_{k-1}, x_{k-1}, v_{k-1})
/// for v_k = (x_{k+1} - x_k)/mu_k by scalar Newton iteration, k = 1..N-1.
Trajectory solve_variational(const TimeScale& ts, const Lagrangian& l, double x0, double x1,
                             NewtonOptions newton = {});

/// Default accuracy of the continuous reference solution.
inline constexpr double kReferenceRtol = 1e-10;

/// Integrates x'' = -U'(x), x(t_grid[0]) = x0, x'(t_grid[0]) = v0 with an
/// adaptive Dormand-Prince pair and samples it at t_grid (increasing).
GridFunction reference_solution(const Potential& p, double x0, double v0,
                                std::span<const double> t_grid, double rtol = kReferenceRtol);

/// Same, returning velocities alongside positions.
std::pair<std::vector<double>, std::vector<double>> reference_state(
    const Potential& p, double x0, double v0, std::span<const double> t_grid,
    double rtol = kReferenceRtol);

struct ConvergenceReport {
    Scheme scheme;
    std::string problem;
    std::vector<double> steps;
    std::vector<double> errors;
    double slope = 0.0;
    bool degenerate = false;
};

/// Least-squares slope of log(errors) against log(steps).
double loglog_slope(std::span<const double> steps, std::span<const double> errors);

/// Global max-norm error against the reference for each h, and the fitted
/// order. x1 is seeded from the reference at t_1.
ConvergenceReport convergence_order(Scheme scheme, const Potential& p, double a, double b,
                                    double x0, double v0, std::span<const double> h_list);

struct EnergySeries {
    std::vector<double> t;
    std::vector<double> e;
    double drift = 0.0;

    /// Number of sign changes in E_k - E_0 (ignoring exact zeros).
    [[nodiscard]] std::size_t sign_changes() const noexcept;
    /// max |E_k - E_0| over t_k <= t_end.
    [[nodiscard]] double drift_until(double t_end) const noexcept;
};

/// Discrete Legendre energy E_k = v_k d3 - L at (t_k, x_k, (Delta x)_k).
EnergySeries energy_series(const Trajectory& tr, const Lagrangian& l);

}  // namespace tsembed
