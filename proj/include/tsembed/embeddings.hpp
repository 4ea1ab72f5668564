#pragma once

#include <optional>
#include <string>

#include "tsembed/lagrangian.hpp"
#include "tsembed/timescale.hpp"

namespace tsembed {

enum class ResidualKind { differential, variational_backward, integral };

std::string to_string(ResidualKind k);

/// Expected domain for each residual kind.
constexpr Domain residual_domain(ResidualKind k) noexcept {
    switch (k) {
        case ResidualKind::differential: return Domain::kappa2;
        case ResidualKind::variational_backward: return Domain::kappa_kappa;
        case ResidualKind::integral: return Domain::kappa;
    }
    return Domain::full;
}

/// Embedded Euler-Lagrange residual, written as left side minus right side.
struct Residual {
    GridFunction values;
    ResidualKind kind;
    std::optional<double> c_estimate;  // integral kind only

    [[nodiscard]] double inf_norm() const noexcept;
    /// sqrt(sum_k mu(t_k) r_k^2) over the residual's domain.
    [[nodiscard]] double l2_norm_weighted(const TimeScale& ts) const;
};

/// How the Dubois-Reymond constant is estimated from the raw sequence.
enum class ConstantMode { first, mean };

/// Differential embedding: (p_{k+1} - p_k)/mu_k - d2_k on kappa2, with
/// p_k = d3(t_k, x_k, (Delta x)_k).
Residual residual_differential(const TimeScale& ts, const Lagrangian& l, const GridFunction& x);

/// Variational (backward) form: (p_k - p_{k-1})/mu_k - d2_k on kappa_kappa.
Residual residual_variational_backward(const TimeScale& ts, const Lagrangian& l,
                                       const GridFunction& x);

/// Raw integral-form sequence p_k - int_a^{sigma(t_k)} d2, k = 0..N-1.
GridFunction integral_raw(const TimeScale& ts, const Lagrangian& l, const GridFunction& x);

/// Integral embedding: raw_k - c with c picked per `mode`.
Residual residual_integral(const TimeScale& ts, const Lagrangian& l, const GridFunction& x,
                           ConstantMode mode = ConstantMode::first);

/// Embedded action sum_k mu(t_k) L(t_k, x_k, (Delta x)_k).
double action(const TimeScale& ts, const Lagrangian& l, const GridFunction& x);

/// sum_k mu(t_k) L(t_k, x_{k+1}, (Delta x)_k); comparison quantity only.
double action_usual(const TimeScale& ts, const Lagrangian& l, const GridFunction& x);

/// d(action)/d(x_k) for interior k = 1..N-1 with both endpoints held fixed.
GridFunction action_gradient(const TimeScale& ts, const Lagrangian& l, const GridFunction& x);

}  // namespace tsembed
