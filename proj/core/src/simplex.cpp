#include "spathermo/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace spathermo {

namespace {

constexpr double kSumTol = 1e-12;

void check_lengths(std::size_t a, std::size_t b) {
    if (a != b)
        throw DomainError("length mismatch: distribution has " + std::to_string(a) +
                          " entries, spectrum has " + std::to_string(b));
}

void check_alpha(double alpha) {
    if (!(alpha > 0.0) || !std::isfinite(alpha))
        throw DomainError("escort order alpha must be positive and finite, got " +
                          std::to_string(alpha));
}

// Escort weights in log space: exp(alpha*ln p_i - M), zeros preserved.
// Returns the renormalized distribution vector.
std::vector<double> escort_weights(const std::vector<double>& p, double alpha) {
    const std::size_t n = p.size();
    std::vector<double> logw(n, -std::numeric_limits<double>::infinity());
    double m = -std::numeric_limits<double>::infinity();
    bool any = false;
    for (std::size_t i = 0; i < n; ++i) {
        if (p[i] > 0.0) {
            logw[i] = alpha * std::log(p[i]);
            m = std::max(m, logw[i]);
            any = true;
        }
    }
    if (!any) throw DomainError("escort of an all-zero vector");
    std::vector<double> w(n, 0.0);
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (p[i] > 0.0) {
            w[i] = std::exp(logw[i] - m);
            sum += w[i];
        }
    }
    for (auto& x : w) x /= sum;
    return w;
}

} // namespace

EnergySpectrum::EnergySpectrum(std::vector<double> levels) : levels_(std::move(levels)) {
    if (levels_.size() < 2)
        throw DomainError("energy spectrum needs at least two levels");
    for (double e : levels_)
        if (!std::isfinite(e)) throw DomainError("non-finite energy level");
    auto [lo, hi] = std::minmax_element(levels_.begin(), levels_.end());
    min_ = *lo;
    max_ = *hi;
    if (!(max_ > min_))
        throw DomainError("energy spectrum needs at least two distinct levels");
    mean_ = std::accumulate(levels_.begin(), levels_.end(), 0.0) /
            static_cast<double>(levels_.size());
}

Distribution::Distribution(std::vector<double> probs) : probs_(std::move(probs)) {
    if (probs_.empty()) throw DomainError("empty distribution");
    double sum = 0.0;
    for (double p : probs_) {
        if (!(p >= 0.0) || !std::isfinite(p))
            throw DomainError("distribution entries must be finite and nonnegative");
        sum += p;
    }
    if (std::abs(sum - 1.0) > kSumTol)
        throw DomainError("distribution must sum to 1 within 1e-12, got sum " +
                          std::to_string(sum));
}

Distribution Distribution::normalized(std::vector<double> weights) {
    double sum = 0.0;
    for (double w : weights) {
        if (!(w >= 0.0) || !std::isfinite(w))
            throw DomainError("weights must be finite and nonnegative");
        sum += w;
    }
    if (!(sum > 0.0)) throw DomainError("cannot normalize an all-zero vector");
    for (auto& w : weights) w /= sum;
    return Distribution(std::move(weights));
}

Distribution Distribution::uniform(std::size_t n) {
    if (n == 0) throw DomainError("empty distribution");
    return Distribution(std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

Distribution Distribution::point_mass(std::size_t n, std::size_t i) {
    if (i >= n) throw DomainError("point mass index out of range");
    std::vector<double> p(n, 0.0);
    p[i] = 1.0;
    return Distribution(std::move(p));
}

double linear_mean(const Distribution& p, const EnergySpectrum& eps) {
    check_lengths(p.size(), eps.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) acc += p[i] * eps[i];
    return acc;
}

Distribution escort(const Distribution& p, double alpha) {
    check_alpha(alpha);
    return Distribution(escort_weights(p.probs(), alpha));
}

Distribution escort_inverse(const Distribution& p, double alpha) {
    check_alpha(alpha);
    return Distribution(escort_weights(p.probs(), 1.0 / alpha));
}

double escort_mean(const Distribution& p, const EnergySpectrum& eps, double alpha) {
    check_lengths(p.size(), eps.size());
    check_alpha(alpha);
    const auto w = escort_weights(p.probs(), alpha);
    double acc = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) acc += w[i] * eps[i];
    return acc;
}

double total_variation(const Distribution& p, const Distribution& q) {
    check_lengths(p.size(), q.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) acc += std::abs(p[i] - q[i]);
    return 0.5 * acc;
}

} // namespace spathermo
