#include "tsembed/timescale.hpp"

#include <cmath>

namespace tsembed {

namespace {

constexpr double kUniformRelTol = 1e-9;

std::optional<double> detect_step(const std::vector<double>& p) {
    const std::size_t n = p.size() - 1;
    const double h = (p.back() - p.front()) / static_cast<double>(n);
    for (std::size_t k = 0; k < n; ++k) {
        if (std::abs((p[k + 1] - p[k]) - h) > kUniformRelTol * h) return std::nullopt;
    }
    return h;
}

void check_index(std::size_t k, std::size_t n) {
    if (k > n) {
        throw DomainError("time scale index " + std::to_string(k) + " out of range 0.." +
                          std::to_string(n));
    }
}

}  // namespace

TimeScale::TimeScale(std::vector<double> points) : points_(std::move(points)) {
    if (points_.size() < 3) {
        throw DomainError("time scale needs at least 3 points, got " +
                          std::to_string(points_.size()));
    }
    for (std::size_t k = 0; k < points_.size(); ++k) {
        if (!std::isfinite(points_[k])) throw DomainError("time scale point is not finite");
        if (k > 0 && !(points_[k] > points_[k - 1])) {
            throw DomainError("time scale points must be strictly increasing (index " +
                              std::to_string(k) + ")");
        }
    }
    step_ = detect_step(points_);
}

TimeScale TimeScale::uniform(double a, double b, std::size_t n) {
    if (!(b > a)) throw DomainError("uniform scale requires b > a");
    if (n < 2) throw DomainError("uniform scale requires N >= 2");
    const double h = (b - a) / static_cast<double>(n);
    std::vector<double> p(n + 1);
    for (std::size_t k = 0; k <= n; ++k) p[k] = a + static_cast<double>(k) * h;
    TimeScale ts(std::move(p));
    ts.step_ = h;
    return ts;
}

TimeScale TimeScale::qscale(double q, int k_min, int k_max) {
    if (!(q > 1.0)) throw DomainError("q-scale requires q > 1");
    if (k_min < 0) throw DomainError("q-scale requires k_min >= 0");
    if (k_max < k_min + 2) throw DomainError("q-scale needs at least 3 points");
    std::vector<double> p;
    p.reserve(static_cast<std::size_t>(k_max - k_min + 1));
    for (int j = k_min; j <= k_max; ++j) p.push_back(std::pow(q, j));
    return TimeScale(std::move(p));
}

TimeScale TimeScale::arbitrary(std::vector<double> points) { return TimeScale(std::move(points)); }

double TimeScale::at(std::size_t k) const {
    check_index(k, last());
    return points_[k];
}

std::pair<std::size_t, double> TimeScale::sigma(std::size_t k) const {
    check_index(k, last());
    const std::size_t j = k < last() ? k + 1 : last();
    return {j, points_[j]};
}

std::pair<std::size_t, double> TimeScale::rho(std::size_t k) const {
    check_index(k, last());
    const std::size_t j = k > 0 ? k - 1 : 0;
    return {j, points_[j]};
}

double TimeScale::mu(std::size_t k) const {
    check_index(k, last());
    return k < last() ? points_[k + 1] - points_[k] : 0.0;
}

std::string to_string(Domain d) {
    switch (d) {
        case Domain::full: return "full";
        case Domain::kappa: return "kappa";
        case Domain::kappa2: return "kappa2";
        case Domain::kappa_kappa: return "kappa_kappa";
    }
    return "unknown";
}

std::size_t domain_size(Domain d, std::size_t n) noexcept {
    switch (d) {
        case Domain::full: return n + 1;
        case Domain::kappa: return n;
        case Domain::kappa2: return n - 1;
        case Domain::kappa_kappa: return n - 1;
    }
    return 0;
}

double GridFunction::at_index(std::size_t k) const {
    const std::size_t f = first();
    if (k < f || k - f >= values_.size()) {
        throw DomainError("grid function (" + to_string(domain_) + ") has no value at index " +
                          std::to_string(k));
    }
    return values_[k - f];
}

void GridFunction::require(const TimeScale& ts, Domain expected) const {
    if (domain_ != expected) {
        throw DomainError("grid function domain is " + to_string(domain_) + ", expected " +
                          to_string(expected));
    }
    if (values_.size() != domain_size(expected, ts.last())) {
        throw DomainError("grid function has " + std::to_string(values_.size()) +
                          " values, scale domain " + to_string(expected) + " needs " +
                          std::to_string(domain_size(expected, ts.last())));
    }
}

GridFunction delta_derivative(const TimeScale& ts, const GridFunction& f) {
    f.require(ts, Domain::full);
    const std::size_t n = ts.last();
    std::vector<double> d(n);
    for (std::size_t k = 0; k < n; ++k) d[k] = (f[k + 1] - f[k]) / ts.mu(k);
    return GridFunction(Domain::kappa, std::move(d));
}

double delta_integral(const TimeScale& ts, const GridFunction& f, std::size_t c, std::size_t d) {
    if (c > d) throw DomainError("delta integral requires from <= to");
    if (d > ts.last()) throw DomainError("delta integral upper index beyond N");
    double sum = 0.0;
    for (std::size_t k = c; k < d; ++k) sum += ts.mu(k) * f.at_index(k);
    return sum;
}

double integrate_to_sigma(const TimeScale& ts, const GridFunction& f, std::size_t k) {
    if (k >= ts.last()) throw DomainError("integrate_to_sigma requires k <= N-1");
    return delta_integral(ts, f, 0, k) + ts.mu(k) * f.at_index(k);
}

}  // namespace tsembed
