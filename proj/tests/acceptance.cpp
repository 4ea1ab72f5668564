// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "tsembed/cli.hpp"
#include "tsembed/embeddings.hpp"
#include "tsembed/solvers.hpp"

using namespace tsembed;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

struct Criterion {
    int id;
    std::string name;
    double budget_s;
    std::function<Outcome()> body;
};

std::string fmt(const char* f, double a) {
    char buf[128];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

std::string fmt(const char* f, double a, double b) {
    char buf[160];
    std::snprintf(buf, sizeof buf, f, a, b);
    return buf;
}

const std::vector<double> kSteps{0.1, 0.05, 0.025, 0.0125};

Outcome order_criterion(Scheme scheme, double lo, double hi) {
    const auto rep = convergence_order(scheme, potentials::harmonic(), 0.0, 1.0, 1.0, 0.0, kSteps);
    const bool ok = !rep.degenerate && rep.slope >= lo && rep.slope <= hi;
    return {ok, fmt("slope=%.4f", rep.slope) + fmt(" band=[%.2f, %.2f]", lo, hi)};
}

struct CoherenceCase {
    TimeScale ts;
    Lagrangian l;
    GridFunction x;
};

std::vector<CoherenceCase> coherence_cases() {
    std::vector<CoherenceCase> cases;
    for (const char* name : {"harmonic", "quartic", "pendulum"}) {
        const Potential p = find_potential(name);
        const Lagrangian l = mechanical(p);
        for (std::uint64_t seed = 1; seed <= 20; ++seed) {
            TimeScale ts = cli::random_scale(50, 0.01, 0.05, seed);
            const double t01[] = {ts[0], ts[1]};
            const double x1 = reference_solution(p, 1.0, 0.0, t01)[1];
            Trajectory tr = solve_variational(ts, l, 1.0, x1);
            cases.push_back({std::move(ts), l, std::move(tr.x)});
        }
    }
    return cases;
}

Outcome coherence_criterion() {
    double worst_grad = 0.0;
    double worst_int = 0.0;
    double weakest_perturbed = INFINITY;
    std::size_t violations = 0;
    for (const auto& c : coherence_cases()) {
        const double g = Residual{action_gradient(c.ts, c.l, c.x), ResidualKind::variational_backward, {}}.inf_norm();
        const double r = residual_integral(c.ts, c.l, c.x).inf_norm();
        worst_grad = std::max(worst_grad, g);
        worst_int = std::max(worst_int, r);
        if (g > 1e-9 || r > 1e-9) ++violations;

        std::vector<double> xv(c.x.values().begin(), c.x.values().end());
        for (std::size_t k = 1; k < c.ts.last(); ++k) {
            xv[k] += 1e-3;
            const GridFunction xp(Domain::full, xv);
            const double gp = Residual{action_gradient(c.ts, c.l, xp), ResidualKind::variational_backward, {}}.inf_norm();
            const double rp = residual_integral(c.ts, c.l, xp).inf_norm();
            weakest_perturbed = std::min({weakest_perturbed, gp, rp});
            if (!(gp > 1e-6 && rp > 1e-6)) ++violations;
            xv[k] -= 1e-3;
        }
    }
    return {violations == 0, fmt("max|grad|=%.3e", worst_grad) + fmt(" max|int|=%.3e", worst_int) +
                                 fmt(" min perturbed norm=%.3e violations=%.0f", weakest_perturbed,
                                     static_cast<double>(violations))};
}

Outcome noncoherence_criterion() {
    double min_ratio = INFINITY;
    for (const auto& c : coherence_cases()) {
        const double d = residual_differential(c.ts, c.l, c.x).inf_norm();
        const double r = residual_integral(c.ts, c.l, c.x).inf_norm();
        if (!(d >= 1e3 * r)) return {false, fmt("differential=%.3e integral=%.3e", d, r)};
        if (r > 0.0) min_ratio = std::min(min_ratio, d / r);
    }
    return {true, fmt("min differential/integral ratio=%.3e (need >= 1e3)", min_ratio)};
}

Outcome energy_criterion() {
    const auto ts = TimeScale::uniform(0.0, 100.0, 10000);
    const auto p = potentials::harmonic();
    const auto l = mechanical(p);
    const double t01[] = {ts[0], ts[1]};
    const double x1 = reference_solution(p, 1.0, 0.0, t01)[1];
    const auto var = energy_series(solve_variational(ts, l, 1.0, x1), l);
    const auto dif = energy_series(solve_differential_scheme(ts, p, 1.0, x1), l);
    const bool ok = var.drift <= 5e-3 && var.sign_changes() > 0 && dif.drift >= 10.0 * var.drift;
    return {ok, fmt("variational drift=%.4e", var.drift) + fmt(" differential drift=%.4e", dif.drift) +
                    fmt(" ratio=%.1f sign changes=%.0f", dif.drift / var.drift, static_cast<double>(var.sign_changes()))};
}

bool rel_ok(double a, double b, double scale) { return std::abs(a - b) <= 1e-12 * std::max(1.0, scale); }

Outcome delta_identity_criterion() {
    std::mt19937_64 gen(20240601);
    double worst = 0.0;
    std::size_t failures = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t count = 3 + gen() % 48;
        const auto ts = TimeScale::arbitrary(oracle::random_points(gen, count, 1e-3, 1.0, oracle::uniform(gen, -5, 5)));
        const GridFunction f(Domain::full, oracle::random_values(gen, count, -2, 2));
        const GridFunction g(Domain::full, oracle::random_values(gen, count, -2, 2));
        const auto df = delta_derivative(ts, f);
        const auto dg = delta_derivative(ts, g);
        const std::size_t n = ts.last();

        // Fundamental theorem on a random sub-interval.
        std::size_t c = gen() % (n + 1);
        std::size_t d = gen() % (n + 1);
        if (c > d) std::swap(c, d);
        const double ftc = delta_integral(ts, df, c, d);
        const double ftc_scale = std::abs(f[c]) + std::abs(f[d]);
        worst = std::max(worst, std::abs(ftc - (f[d] - f[c])) / std::max(1.0, ftc_scale));
        if (!rel_ok(ftc, f[d] - f[c], ftc_scale)) ++failures;

        // Both integration-by-parts forms over [t_c, t_d).
        std::vector<double> f_dg(n), df_gs(n), fs_dg(n), df_g(n);
        double scale = std::abs(f[d] * g[d]) + std::abs(f[c] * g[c]);
        for (std::size_t k = 0; k < n; ++k) {
            f_dg[k] = f[k] * dg[k];
            df_gs[k] = df[k] * g[k + 1];
            fs_dg[k] = f[k + 1] * dg[k];
            df_g[k] = df[k] * g[k];
            if (k >= c && k < d) {
                scale += ts.mu(k) * (std::abs(f_dg[k]) + std::abs(df_gs[k]) + std::abs(fs_dg[k]) + std::abs(df_g[k]));
            }
        }
        auto integral = [&](std::vector<double> v) {
            return delta_integral(ts, GridFunction(Domain::kappa, std::move(v)), c, d);
        };
        const double boundary = f[d] * g[d] - f[c] * g[c];
        const double lhs1 = integral(f_dg);
        const double rhs1 = boundary - integral(df_gs);
        const double lhs2 = integral(fs_dg);
        const double rhs2 = boundary - integral(df_g);
        worst = std::max({worst, std::abs(lhs1 - rhs1) / std::max(1.0, scale), std::abs(lhs2 - rhs2) / std::max(1.0, scale)});
        if (!rel_ok(lhs1, rhs1, scale) || !rel_ok(lhs2, rhs2, scale)) ++failures;
    }
    return {failures == 0, fmt("worst relative deviation=%.3e failures=%.0f", worst, static_cast<double>(failures))};
}

Outcome algebraic_identity_criterion() {
    std::mt19937_64 gen(777);
    double worst_grad = 0.0;
    double worst_diff = 0.0;
    std::size_t failures = 0;
    const char* names[] = {"harmonic", "quartic", "pendulum"};
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t count = 3 + gen() % 60;
        const auto ts = TimeScale::arbitrary(oracle::random_points(gen, count, 0.005, 0.2));
        const GridFunction x(Domain::full, oracle::random_values(gen, count, -1.5, 1.5));
        const auto l = mechanical(find_potential(names[trial % 3]));
        const auto grad = action_gradient(ts, l, x);
        const auto back = residual_variational_backward(ts, l, x);
        const auto raw = integral_raw(ts, l, x);
        for (std::size_t k = 1; k < ts.last(); ++k) {
            const double g = grad.at_index(k);
            const double r = back.values.at_index(k);
            const double mu = ts.mu(k);
            const double e1 = std::abs(g + mu * r) / std::max(1.0, std::abs(g));
            const double differenced = (raw[k] - raw[k - 1]) / mu;
            const double e2 = std::abs(r - differenced) / std::max(1.0, std::abs(r));
            worst_grad = std::max(worst_grad, e1);
            worst_diff = std::max(worst_diff, e2);
            if (e1 > 1e-12 || e2 > 1e-12) ++failures;
        }
    }
    return {failures == 0, fmt("gradient identity=%.3e", worst_grad) + fmt(" differenced identity=%.3e", worst_diff)};
}

Outcome gradient_fd_criterion() {
    std::mt19937_64 gen(4242);
    double worst = 0.0;
    const oracle::Mech mechs[] = {oracle::harmonic(), oracle::quartic(), oracle::pendulum()};
    const char* names[] = {"harmonic", "quartic", "pendulum"};
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t count = 3 + gen() % 30;
        const auto pts = oracle::random_points(gen, count, 0.02, 0.1);
        const auto xv = oracle::random_values(gen, count, -1, 1);
        const auto ts = TimeScale::arbitrary(pts);
        const auto grad = action_gradient(ts, mechanical(find_potential(names[trial % 3])), GridFunction(Domain::full, xv));
        const auto fd = oracle::fd_action_gradient(mechs[trial % 3], pts, xv);
        for (std::size_t i = 0; i < fd.size(); ++i) worst = std::max(worst, std::abs(grad[i] - fd[i]));
    }
    return {worst <= 1e-6, fmt("max |grad - fd|=%.3e (tol 1e-6)", worst)};
}

}  // namespace

int main() {
    const std::vector<Criterion> criteria{
        {1, "convergence order, differential embedding", 1.0,
         [] { return order_criterion(Scheme::differential, 0.85, 1.15); }},
        {2, "convergence order, variational embedding", 1.0,
         [] { return order_criterion(Scheme::variational, 1.85, 2.15); }},
        {3, "coherence of integral and variational embeddings", 5.0, coherence_criterion},
        {4, "non-coherence of the differential embedding", 5.0, noncoherence_criterion},
        {5, "energy behaviour", 5.0, energy_criterion},
        {6, "delta-calculus identities", 1.0, delta_identity_criterion},
        {7, "algebraic identities", 1.0, algebraic_identity_criterion},
        {8, "gradient vs finite differences", 1.0, gradient_fd_criterion},
    };

    int failed = 0;
    for (const auto& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o{false, ""};
        try {
            o = c.body();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const bool in_time = secs < c.budget_s;
        const bool pass = o.pass && in_time;
        if (!pass) ++failed;
        std::printf("[%s] %d. %s: %s; runtime %.3fs (budget %.0fs)\n", pass ? "PASS" : "FAIL", c.id,
                    c.name.c_str(), o.detail.c_str(), secs, c.budget_s);
    }
    std::printf("%zu/%zu criteria passed\n", criteria.size() - static_cast<std::size_t>(failed), criteria.size());
    return failed == 0 ? 0 : 1;
}
