#include "spathermo/entropy.hpp"

#include <cmath>
#include <limits>

namespace spathermo {

namespace {

constexpr double kAlphaLimitEps = 1e-8;

double shannon(const std::vector<double>& p) {
    double acc = 0.0;
    for (double x : p)
        if (x > 0.0) acc -= x * std::log(x);
    return acc;
}

// ln sum_i p_i^alpha over positive entries, stable for large alpha.
double log_power_sum(const std::vector<double>& p, double alpha) {
    double m = -std::numeric_limits<double>::infinity();
    for (double x : p)
        if (x > 0.0) m = std::max(m, alpha * std::log(x));
    double acc = 0.0;
    for (double x : p)
        if (x > 0.0) acc += std::exp(alpha * std::log(x) - m);
    return m + std::log(acc);
}

} // namespace

EntropySpec::EntropySpec(double alpha_, MapPtr map_) : alpha(alpha_), map(std::move(map_)) {
    if (!(alpha > 0.0) || !std::isfinite(alpha))
        throw DomainError("entropy order alpha must be positive and finite");
    if (!map) throw DomainError("entropy spec requires a deformation map");
}

double renyi(const Distribution& p, double alpha) {
    if (!(alpha > 0.0) || !std::isfinite(alpha))
        throw DomainError("renyi order alpha must be positive and finite");
    if (std::abs(alpha - 1.0) < kAlphaLimitEps) return shannon(p.probs());
    return log_power_sum(p.probs(), alpha) / (1.0 - alpha);
}

double spa_entropy(const Distribution& p, const EntropySpec& spec) {
    return spec.map->eval(renyi(p, spec.alpha));
}

double sharma_mittal(const Distribution& p, double alpha, double q) {
    return spa_entropy(p, EntropySpec(alpha, make_hq(q)));
}

double supra_extensive(const Distribution& p, double alpha, double r) {
    return spa_entropy(p, EntropySpec(alpha, make_supra(alpha, r)));
}

} // namespace spathermo
