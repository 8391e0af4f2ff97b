#pragma once

#include <cstddef>
#include <vector>

#include "spathermo/errors.hpp"

namespace spathermo {

/// Ordered energy levels of an n-state system, n >= 2, not all equal.
class EnergySpectrum {
public:
    explicit EnergySpectrum(std::vector<double> levels);

    const std::vector<double>& levels() const { return levels_; }
    std::size_t size() const { return levels_.size(); }
    double operator[](std::size_t i) const { return levels_[i]; }

    double min_level() const { return min_; }
    double max_level() const { return max_; }
    /// max - min; strictly positive by construction.
    double spread() const { return max_ - min_; }
    /// Arithmetic mean of the levels (the degenerate energy where beta = 0).
    double uniform_mean() const { return mean_; }

private:
    std::vector<double> levels_;
    double min_, max_, mean_;
};

/// Point on the probability simplex: nonnegative entries summing to 1
/// within 1e-12.
class Distribution {
public:
    explicit Distribution(std::vector<double> probs);

    /// Rescale a nonnegative, nonzero vector onto the simplex.
    static Distribution normalized(std::vector<double> weights);
    static Distribution uniform(std::size_t n);
    static Distribution point_mass(std::size_t n, std::size_t i);

    const std::vector<double>& probs() const { return probs_; }
    std::size_t size() const { return probs_.size(); }
    double operator[](std::size_t i) const { return probs_[i]; }

private:
    std::vector<double> probs_;
};

/// Sum_i p_i * eps_i.
double linear_mean(const Distribution& p, const EnergySpectrum& eps);

/// The order-alpha escort transform (p_i^alpha / sum_j p_j^alpha).
/// Zero entries stay zero for every alpha > 0. The result is renormalized
/// so the simplex invariants hold exactly.
Distribution escort(const Distribution& p, double alpha);

/// Inverse of the escort transform: escort(escort_inverse(p, a), a) == p.
Distribution escort_inverse(const Distribution& p, double alpha);

/// Mean energy under the escort distribution of order alpha.
double escort_mean(const Distribution& p, const EnergySpectrum& eps, double alpha);

/// Total variation distance (1/2) sum |p_i - q_i|.
double total_variation(const Distribution& p, const Distribution& q);

} // namespace spathermo
