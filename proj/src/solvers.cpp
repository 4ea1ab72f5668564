#include "tsembed/solvers.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>

#include <boost/numeric/odeint.hpp>

namespace tsembed {

std::string to_string(Scheme s) {
    switch (s) {
        case Scheme::differential: return "differential";
        case Scheme::variational: return "variational";
        case Scheme::reference: return "reference";
    }
    return "unknown";
}

Scheme parse_scheme(const std::string& name) {
    if (name == "differential") return Scheme::differential;
    if (name == "variational") return Scheme::variational;
    if (name == "reference") return Scheme::reference;
    throw DomainError("unknown scheme '" + name + "' (expected differential, variational or reference)");
}

Trajectory solve_differential_scheme(const TimeScale& ts, const Potential& p, double x0, double x1) {
    const auto step = ts.uniform_step();
    if (!step) throw DomainError("differential scheme requires a uniform time scale");
    const double h2 = *step * *step;
    const std::size_t n = ts.last();
    std::vector<double> x(n + 1);
    x[0] = x0;
    x[1] = x1;
    for (std::size_t k = 0; k + 2 <= n; ++k) {
        x[k + 2] = 2.0 * x[k + 1] - x[k] - h2 * p.du(x[k]);
        if (!std::isfinite(x[k + 2])) {
            throw SolverError("differential scheme produced a non-finite value", k + 2, x[k + 2]);
        }
    }
    return {ts, GridFunction(Domain::full, std::move(x)), Scheme::differential, p.name, {x0, x1}};
}

Trajectory solve_variational(const TimeScale& ts, const Lagrangian& l, double x0, double x1,
                             NewtonOptions newton) {
    if (!(newton.tol > 0.0) || newton.max_iter < 1) {
        throw DomainError("Newton options need tol > 0 and max_iter >= 1");
    }
    const std::size_t n = ts.last();
    std::vector<double> x(n + 1);
    x[0] = x0;
    x[1] = x1;

    for (std::size_t k = 1; k < n; ++k) {
        const double mu = ts.mu(k);
        const double mu_prev = ts.mu(k - 1);
        const double t = ts[k];
        const double xk = x[k];
        const double v_prev = (x[k] - x[k - 1]) / mu_prev;
        const double p_prev = l.d3(ts[k - 1], x[k - 1], v_prev);
        const double scale = std::max(1.0, std::abs(p_prev));

        auto residual = [&](double v) { return l.d3(t, xk, v) - mu * l.d2(t, xk, v) - p_prev; };

        double v = v_prev;  // predictor x_{k+1} = x_k + mu_k v_{k-1}
        double g = residual(v);
        int iter = 0;
        while (!(std::abs(g) <= newton.tol * scale)) {
            if (!std::isfinite(g)) {
                throw SolverError("Newton residual became non-finite", k + 1, g);
            }
            if (iter == newton.max_iter) {
                throw SolverError("Newton did not converge in " + std::to_string(newton.max_iter) +
                                      " iterations",
                                  k + 1, g);
            }
            const double dg = l.second_vv(t, xk, v) - mu * l.second_xv(t, xk, v);
            if (!(std::abs(dg) > 1e-14)) {
                throw SolverError("Newton derivative d33 - mu*d23 vanished", k + 1, g);
            }
            v -= g / dg;
            g = residual(v);
            ++iter;
        }
        x[k + 1] = xk + mu * v;
    }
    return {ts, GridFunction(Domain::full, std::move(x)), Scheme::variational, l.name, {x0, x1}};
}

namespace {

using State = std::array<double, 2>;

}  // namespace

std::pair<std::vector<double>, std::vector<double>> reference_state(
    const Potential& p, double x0, double v0, std::span<const double> t_grid, double rtol) {
    namespace ode = boost::numeric::odeint;
    if (!(rtol > 0.0)) throw DomainError("reference solution requires rtol > 0");
    if (t_grid.empty()) throw DomainError("reference solution needs at least one time");
    for (std::size_t i = 1; i < t_grid.size(); ++i) {
        if (!(t_grid[i] > t_grid[i - 1])) throw DomainError("reference time grid must increase");
    }

    std::vector<double> xs;
    std::vector<double> vs;
    xs.reserve(t_grid.size());
    vs.reserve(t_grid.size());
    if (t_grid.size() == 1) {
        xs.push_back(x0);
        vs.push_back(v0);
        return {xs, vs};
    }

    auto rhs = [&p](const State& s, State& ds, double) {
        ds[0] = s[1];
        ds[1] = -p.du(s[0]);
    };
    auto observer = [&](const State& s, double) {
        xs.push_back(s[0]);
        vs.push_back(s[1]);
    };

    // Local tolerances two orders tighter than the per-unit-time budget.
    const double tol = rtol * 1e-2;
    auto stepper = ode::make_controlled(tol, tol, ode::runge_kutta_dopri5<State>());
    State s{x0, v0};
    const double span = t_grid.back() - t_grid.front();
    const double dt0 = std::min(1e-3, span / static_cast<double>(t_grid.size()));
    try {
        ode::integrate_times(stepper, rhs, s, t_grid.begin(), t_grid.end(), dt0, observer,
                             ode::max_step_checker(1000000));
    } catch (const std::runtime_error& e) {
        throw SolverError(std::string("reference step control failed: ") + e.what(), xs.size(),
                          std::numeric_limits<double>::quiet_NaN());
    }
    return {xs, vs};
}

GridFunction reference_solution(const Potential& p, double x0, double v0,
                                std::span<const double> t_grid, double rtol) {
    return GridFunction(Domain::full, reference_state(p, x0, v0, t_grid, rtol).first);
}

double loglog_slope(std::span<const double> steps, std::span<const double> errors) {
    if (steps.size() != errors.size() || steps.size() < 2) {
        throw DomainError("slope fit needs matching step/error lists of length >= 2");
    }
    const std::size_t n = steps.size();
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += std::log(steps[i]);
        my += std::log(errors[i]);
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxy = 0.0;
    double sxx = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = std::log(steps[i]) - mx;
        sxy += dx * (std::log(errors[i]) - my);
        sxx += dx * dx;
    }
    return sxy / sxx;
}

ConvergenceReport convergence_order(Scheme scheme, const Potential& p, double a, double b,
                                    double x0, double v0, std::span<const double> h_list) {
    if (scheme == Scheme::reference) throw DomainError("convergence order needs a discrete scheme");
    if (!(b > a)) throw DomainError("convergence interval requires b > a");
    if (h_list.size() < 3) throw DomainError("convergence study needs at least 3 step sizes");
    for (std::size_t i = 0; i < h_list.size(); ++i) {
        if (!(h_list[i] > 0.0)) throw DomainError("step sizes must be positive");
        if (i > 0 && !(h_list[i] < h_list[i - 1])) {
            throw DomainError("step sizes must be strictly decreasing");
        }
    }

    ConvergenceReport report{scheme, p.name, {}, {}, 0.0, false};
    const Lagrangian l = mechanical(p);
    double magnitude = 1.0;
    for (double h : h_list) {
        const double ratio = (b - a) / h;
        const auto n = static_cast<std::size_t>(std::llround(ratio));
        if (std::abs(ratio - static_cast<double>(n)) > 1e-9 * ratio) {
            throw DomainError("step " + std::to_string(h) + " does not divide the interval");
        }
        const TimeScale ts = TimeScale::uniform(a, b, n);
        const GridFunction ref = reference_solution(p, x0, v0, ts.points());
        const Trajectory tr = scheme == Scheme::differential
                                  ? solve_differential_scheme(ts, p, x0, ref[1])
                                  : solve_variational(ts, l, x0, ref[1]);
        double err = 0.0;
        for (std::size_t k = 0; k <= n; ++k) {
            err = std::max(err, std::abs(tr.x[k] - ref[k]));
            magnitude = std::max(magnitude, std::abs(ref[k]));
        }
        report.steps.push_back(h);
        report.errors.push_back(err);
    }

    const double floor = 100.0 * std::numeric_limits<double>::epsilon() * magnitude;
    report.degenerate = std::any_of(report.errors.begin(), report.errors.end(),
                                    [floor](double e) { return e <= floor; });
    report.slope = report.degenerate ? std::numeric_limits<double>::quiet_NaN()
                                     : loglog_slope(report.steps, report.errors);
    return report;
}

std::size_t EnergySeries::sign_changes() const noexcept {
    std::size_t changes = 0;
    int last_sign = 0;
    for (double ek : e) {
        const double d = ek - e.front();
        const int s = (d > 0.0) - (d < 0.0);
        if (s == 0) continue;
        if (last_sign != 0 && s != last_sign) ++changes;
        last_sign = s;
    }
    return changes;
}

double EnergySeries::drift_until(double t_end) const noexcept {
    double d = 0.0;
    for (std::size_t k = 0; k < e.size() && t[k] <= t_end; ++k) d = std::max(d, std::abs(e[k] - e.front()));
    return d;
}

EnergySeries energy_series(const Trajectory& tr, const Lagrangian& l) {
    const GridFunction dx = delta_derivative(tr.ts, tr.x);
    EnergySeries s;
    const std::size_t n = tr.ts.last();
    s.t.assign(tr.ts.points().begin(), tr.ts.points().begin() + static_cast<std::ptrdiff_t>(n));
    s.e.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double t = tr.ts[k];
        const double x = tr.x[k];
        const double v = dx[k];
        s.e[k] = v * l.d3(t, x, v) - l.eval(t, x, v);
        s.drift = std::max(s.drift, std::abs(s.e[k] - s.e[0]));
    }
    return s;
}

}  // namespace tsembed
