#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tsembed/timescale.hpp"

namespace tsembed {

/// Scalar function of (t, x, v).
using PhaseFn = std::function<double(double, double, double)>;

/// L(t, x, v) together with its partials. d2 is dL/dx, d3 is dL/dv; the
/// second partials are optional and finite-differenced when missing.
struct Lagrangian {
    std::string name;
    PhaseFn eval;
    PhaseFn d2;
    PhaseFn d3;
    PhaseFn d33;  // may be empty
    PhaseFn d23;  // may be empty

    [[nodiscard]] bool has_d33() const noexcept { return static_cast<bool>(d33); }
    [[nodiscard]] bool has_d23() const noexcept { return static_cast<bool>(d23); }

    /// d33, or a central difference of d3 in v.
    [[nodiscard]] double second_vv(double t, double x, double v) const;
    /// d23, or a central difference of d2 in v.
    [[nodiscard]] double second_xv(double t, double x, double v) const;
};

/// Potential energy U(x) with derivative U'(x).
struct Potential {
    std::string name;
    std::function<double(double)> u;
    std::function<double(double)> du;
};

/// L = v^2/2 - U(x).
Lagrangian mechanical(const Potential& p);

namespace potentials {
Potential free();
Potential harmonic();  // x^2/2
Potential quartic();   // x^4/4
Potential pendulum();  // 1 - cos x
}  // namespace potentials

/// Names accepted by find_potential, in registry order.
std::span<const std::string_view> registry_names();
/// Built-in potential by name; throws DomainError for unknown names.
Potential find_potential(std::string_view name);

/// Finite-difference step used for partial validation.
double fd_step(double arg) noexcept;

struct Sample {
    double t;
    double x;
    double v;
};

struct PartialCheck {
    std::string partial;  // "d2", "d3", "d33", "d23"
    double max_deviation = 0.0;
    bool pass = true;
};

struct PartialsReport {
    std::vector<PartialCheck> checks;
    double tol = 0.0;
    [[nodiscard]] bool pass() const noexcept;
    [[nodiscard]] const PartialCheck* find(std::string_view partial) const noexcept;
};

/// Compares supplied partials against central differences at each sample.
PartialsReport check_partials(const Lagrangian& l, std::span<const Sample> samples, double tol);

enum class Partial { eval, d2, d3 };

/// g_k = which(t_k, x_k, (Delta x)_k) for k = 0..N-1.
GridFunction apply_along(const Lagrangian& l, const TimeScale& ts, const GridFunction& x,
                         Partial which);

}  // namespace tsembed
