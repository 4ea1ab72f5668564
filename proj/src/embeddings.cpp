#include "tsembed/embeddings.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace tsembed {

std::string to_string(ResidualKind k) {
    switch (k) {
        case ResidualKind::differential: return "differential";
        case ResidualKind::variational_backward: return "variational_backward";
        case ResidualKind::integral: return "integral";
    }
    return "unknown";
}

double Residual::inf_norm() const noexcept {
    double m = 0.0;
    for (double r : values.values()) m = std::max(m, std::abs(r));
    return m;
}

double Residual::l2_norm_weighted(const TimeScale& ts) const {
    double s = 0.0;
    const std::size_t first = values.first();
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double r = values[i];
        s += ts.mu(first + i) * r * r;
    }
    return std::sqrt(s);
}

namespace {

void require_full(const TimeScale& ts, const GridFunction& x) { x.require(ts, Domain::full); }

}  // namespace

Residual residual_differential(const TimeScale& ts, const Lagrangian& l, const GridFunction& x) {
    require_full(ts, x);
    const GridFunction p = apply_along(l, ts, x, Partial::d3);
    const GridFunction f = apply_along(l, ts, x, Partial::d2);
    const std::size_t n = ts.last();
    std::vector<double> r(n - 1);
    for (std::size_t k = 0; k + 1 < n; ++k) r[k] = (p[k + 1] - p[k]) / ts.mu(k) - f[k];
    return {GridFunction(Domain::kappa2, std::move(r)), ResidualKind::differential, std::nullopt};
}

Residual residual_variational_backward(const TimeScale& ts, const Lagrangian& l,
                                       const GridFunction& x) {
    require_full(ts, x);
    const GridFunction p = apply_along(l, ts, x, Partial::d3);
    const GridFunction f = apply_along(l, ts, x, Partial::d2);
    const std::size_t n = ts.last();
    std::vector<double> r(n - 1);
    for (std::size_t k = 1; k < n; ++k) r[k - 1] = (p[k] - p[k - 1]) / ts.mu(k) - f[k];
    return {GridFunction(Domain::kappa_kappa, std::move(r)), ResidualKind::variational_backward,
            std::nullopt};
}

GridFunction integral_raw(const TimeScale& ts, const Lagrangian& l, const GridFunction& x) {
    require_full(ts, x);
    const GridFunction p = apply_along(l, ts, x, Partial::d3);
    const GridFunction f = apply_along(l, ts, x, Partial::d2);
    const std::size_t n = ts.last();
    std::vector<double> raw(n);
    // Running form of integrate_to_sigma(ts, f, k).
    double acc = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        acc += ts.mu(k) * f[k];
        raw[k] = p[k] - acc;
    }
    return GridFunction(Domain::kappa, std::move(raw));
}

Residual residual_integral(const TimeScale& ts, const Lagrangian& l, const GridFunction& x,
                           ConstantMode mode) {
    const GridFunction raw = integral_raw(ts, l, x);
    const auto v = raw.values();
    const double c = mode == ConstantMode::first
                         ? v.front()
                         : std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
    std::vector<double> r(v.size());
    std::transform(v.begin(), v.end(), r.begin(), [c](double s) { return s - c; });
    return {GridFunction(Domain::kappa, std::move(r)), ResidualKind::integral, c};
}

double action(const TimeScale& ts, const Lagrangian& l, const GridFunction& x) {
    return delta_integral(ts, apply_along(l, ts, x, Partial::eval), 0, ts.last());
}

double action_usual(const TimeScale& ts, const Lagrangian& l, const GridFunction& x) {
    const GridFunction dx = delta_derivative(ts, x);
    double s = 0.0;
    for (std::size_t k = 0; k < ts.last(); ++k) s += ts.mu(k) * l.eval(ts[k], x[k + 1], dx[k]);
    return s;
}

GridFunction action_gradient(const TimeScale& ts, const Lagrangian& l, const GridFunction& x) {
    require_full(ts, x);
    const GridFunction p = apply_along(l, ts, x, Partial::d3);
    const GridFunction f = apply_along(l, ts, x, Partial::d2);
    const std::size_t n = ts.last();
    std::vector<double> g(n - 1);
    for (std::size_t k = 1; k < n; ++k) g[k - 1] = ts.mu(k) * f[k] + p[k - 1] - p[k];
    return GridFunction(Domain::kappa_kappa, std::move(g));
}

}  // namespace tsembed
