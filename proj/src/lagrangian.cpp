#include "tsembed/lagrangian.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace tsembed {

namespace {

template <typename F>
double central(F&& f, double arg) {
    const double h = fd_step(arg);
    return (f(arg + h) - f(arg - h)) / (2.0 * h);
}

}  // namespace

double fd_step(double arg) noexcept {
    return std::sqrt(std::numeric_limits<double>::epsilon()) * (1.0 + std::abs(arg));
}

double Lagrangian::second_vv(double t, double x, double v) const {
    if (d33) return d33(t, x, v);
    return central([&](double w) { return d3(t, x, w); }, v);
}

double Lagrangian::second_xv(double t, double x, double v) const {
    if (d23) return d23(t, x, v);
    return central([&](double w) { return d2(t, x, w); }, v);
}

Lagrangian mechanical(const Potential& p) {
    Lagrangian l;
    l.name = p.name;
    l.eval = [u = p.u](double, double x, double v) { return 0.5 * v * v - u(x); };
    l.d2 = [du = p.du](double, double x, double) { return -du(x); };
    l.d3 = [](double, double, double v) { return v; };
    l.d33 = [](double, double, double) { return 1.0; };
    l.d23 = [](double, double, double) { return 0.0; };
    return l;
}

namespace potentials {

Potential free() {
    return {"free", [](double) { return 0.0; }, [](double) { return 0.0; }};
}

Potential harmonic() {
    return {"harmonic", [](double x) { return 0.5 * x * x; }, [](double x) { return x; }};
}

Potential quartic() {
    return {"quartic", [](double x) { return 0.25 * x * x * x * x; },
            [](double x) { return x * x * x; }};
}

Potential pendulum() {
    return {"pendulum", [](double x) { return 1.0 - std::cos(x); },
            [](double x) { return std::sin(x); }};
}

}  // namespace potentials

std::span<const std::string_view> registry_names() {
    static constexpr std::array<std::string_view, 4> names{"free", "harmonic", "quartic",
                                                           "pendulum"};
    return names;
}

Potential find_potential(std::string_view name) {
    if (name == "free") return potentials::free();
    if (name == "harmonic") return potentials::harmonic();
    if (name == "quartic") return potentials::quartic();
    if (name == "pendulum") return potentials::pendulum();
    throw DomainError("unknown problem '" + std::string(name) +
                      "' (expected free, harmonic, quartic or pendulum)");
}

bool PartialsReport::pass() const noexcept {
    return std::all_of(checks.begin(), checks.end(), [](const PartialCheck& c) { return c.pass; });
}

const PartialCheck* PartialsReport::find(std::string_view partial) const noexcept {
    for (const auto& c : checks) {
        if (c.partial == partial) return &c;
    }
    return nullptr;
}

PartialsReport check_partials(const Lagrangian& l, std::span<const Sample> samples, double tol) {
    if (!(tol > 0.0)) throw DomainError("check_partials requires tol > 0");
    if (samples.empty()) throw DomainError("check_partials requires at least one sample");

    PartialsReport report;
    report.tol = tol;

    // Absolute deviation is reported; pass/fail scales it by 1 + |exact| so
    // that rounding in large Lagrangian values does not trip the check.
    auto run = [&](std::string name, auto&& exact_fn, auto&& fd_fn) {
        PartialCheck c{std::move(name)};
        for (const auto& s : samples) {
            const double exact = exact_fn(s);
            const double dev = std::abs(exact - fd_fn(s));
            c.max_deviation = std::max(c.max_deviation, dev);
            if (!(dev <= tol * (1.0 + std::abs(exact)))) c.pass = false;
        }
        report.checks.push_back(std::move(c));
    };

    run("d2", [&](const Sample& s) { return l.d2(s.t, s.x, s.v); },
        [&](const Sample& s) { return central([&](double w) { return l.eval(s.t, w, s.v); }, s.x); });
    run("d3", [&](const Sample& s) { return l.d3(s.t, s.x, s.v); },
        [&](const Sample& s) { return central([&](double w) { return l.eval(s.t, s.x, w); }, s.v); });
    if (l.has_d33()) {
        run("d33", [&](const Sample& s) { return l.d33(s.t, s.x, s.v); },
            [&](const Sample& s) { return central([&](double w) { return l.d3(s.t, s.x, w); }, s.v); });
    }
    if (l.has_d23()) {
        run("d23", [&](const Sample& s) { return l.d23(s.t, s.x, s.v); },
            [&](const Sample& s) { return central([&](double w) { return l.d3(s.t, w, s.v); }, s.x); });
    }
    return report;
}

GridFunction apply_along(const Lagrangian& l, const TimeScale& ts, const GridFunction& x,
                         Partial which) {
    const GridFunction dx = delta_derivative(ts, x);
    const PhaseFn& fn = which == Partial::eval ? l.eval : which == Partial::d2 ? l.d2 : l.d3;
    std::vector<double> g(ts.last());
    for (std::size_t k = 0; k < g.size(); ++k) g[k] = fn(ts[k], x[k], dx[k]);
    return GridFunction(Domain::kappa, std::move(g));
}

}  // namespace tsembed
