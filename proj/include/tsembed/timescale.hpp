#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace tsembed {

/// Raised when inputs violate a constructor or operation precondition.
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Relative tolerance used for identities that hold exactly up to rounding.
inline constexpr double kIdentityRelTol = 1e-12;

/// Bounded discrete time scale t_0 < t_1 < ... < t_N, N >= 2.
///
/// Every point except the maximum is right-scattered; the maximum b satisfies
/// sigma(b) = b, so mu(t_N) = 0. Indices are the canonical handles.
class TimeScale {
public:
    static TimeScale uniform(double a, double b, std::size_t n);
    static TimeScale qscale(double q, int k_min, int k_max);
    static TimeScale arbitrary(std::vector<double> points);

    /// N, the index of the maximum point.
    [[nodiscard]] std::size_t last() const noexcept { return points_.size() - 1; }
    [[nodiscard]] std::size_t size() const noexcept { return points_.size(); }
    [[nodiscard]] std::span<const double> points() const noexcept { return points_; }
    [[nodiscard]] double operator[](std::size_t k) const noexcept { return points_[k]; }
    [[nodiscard]] double at(std::size_t k) const;
    [[nodiscard]] double front() const noexcept { return points_.front(); }
    [[nodiscard]] double back() const noexcept { return points_.back(); }

    /// Forward jump: (min(k+1, N), t_{min(k+1, N)}).
    [[nodiscard]] std::pair<std::size_t, double> sigma(std::size_t k) const;
    /// Backward jump: (max(k-1, 0), t_{max(k-1, 0)}).
    [[nodiscard]] std::pair<std::size_t, double> rho(std::size_t k) const;
    /// Graininess sigma(t_k) - t_k; zero at k = N.
    [[nodiscard]] double mu(std::size_t k) const;

    /// Step h when the scale is uniform (all graininesses equal to 1e-9
    /// relative), std::nullopt otherwise.
    [[nodiscard]] std::optional<double> uniform_step() const noexcept { return step_; }
    [[nodiscard]] bool is_uniform() const noexcept { return step_.has_value(); }

    friend bool operator==(const TimeScale&, const TimeScale&) = default;

private:
    explicit TimeScale(std::vector<double> points);

    std::vector<double> points_;
    std::optional<double> step_;
};

/// Which trimmed subset of the scale a grid function covers.
enum class Domain {
    full,        // 0..N
    kappa,       // 0..N-1
    kappa2,      // 0..N-2
    kappa_kappa  // 1..N-1
};

std::string to_string(Domain d);

/// First scale index covered by a domain.
constexpr std::size_t first_index(Domain d) noexcept { return d == Domain::kappa_kappa ? 1 : 0; }

/// Number of points a domain covers on a scale with maximum index n.
std::size_t domain_size(Domain d, std::size_t n) noexcept;

/// Real values sampled on (a trimmed subset of) a time scale.
///
/// values()[i] sits at scale index first_index(domain()) + i.
class GridFunction {
public:
    GridFunction() = default;
    GridFunction(Domain domain, std::vector<double> values)
        : domain_(domain), values_(std::move(values)) {}

    /// Samples f at every point of the domain.
    template <typename F>
    static GridFunction sample(const TimeScale& ts, F&& f, Domain domain = Domain::full) {
        const std::size_t first = first_index(domain);
        const std::size_t count = domain_size(domain, ts.last());
        std::vector<double> v(count);
        for (std::size_t i = 0; i < count; ++i) v[i] = f(ts[first + i]);
        return GridFunction(domain, std::move(v));
    }

    [[nodiscard]] Domain domain() const noexcept { return domain_; }
    [[nodiscard]] std::span<const double> values() const& noexcept { return values_; }
    /// Rvalue overload hands over storage so range-for over a temporary is safe.
    [[nodiscard]] std::vector<double> values() && noexcept { return std::move(values_); }
    [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }
    [[nodiscard]] std::size_t first() const noexcept { return first_index(domain_); }

    /// Value at scale index k (not the storage offset).
    [[nodiscard]] double at_index(std::size_t k) const;
    [[nodiscard]] double operator[](std::size_t i) const noexcept { return values_[i]; }

    /// Throws DomainError unless this function covers `expected` on `ts`.
    void require(const TimeScale& ts, Domain expected) const;

    friend bool operator==(const GridFunction&, const GridFunction&) = default;

private:
    Domain domain_ = Domain::full;
    std::vector<double> values_;
};

/// (Delta f)_k = (f_{k+1} - f_k) / mu(t_k) for k = 0..N-1.
GridFunction delta_derivative(const TimeScale& ts, const GridFunction& f);

/// Delta integral over [t_c, t_d): sum_{k=c}^{d-1} mu(t_k) f_k.
///
/// f may live on any domain that covers indices c..d-1.
double delta_integral(const TimeScale& ts, const GridFunction& f, std::size_t c, std::size_t d);

/// Integral from a to sigma(t_k), i.e. over [t_0, t_{k+1}).
double integrate_to_sigma(const TimeScale& ts, const GridFunction& f, std::size_t k);

}  // namespace tsembed
