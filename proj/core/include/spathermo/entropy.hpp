#pragma once

#include "spathermo/deform.hpp"
#include "spathermo/simplex.hpp"

namespace spathermo {

/// One deformed entropy family: the Renyi order alpha plus the map h that
/// transforms Renyi entropy into the family member H = h(R_alpha).
struct EntropySpec {
    double alpha;
    MapPtr map;

    EntropySpec(double alpha_, MapPtr map_);
};

/// Renyi entropy in nats. Shannon at alpha = 1 (switch at |alpha-1| < 1e-8),
/// otherwise ln(sum p^alpha)/(1-alpha) via a log-sum-exp over positive
/// entries. Lies in [0, ln n].
double renyi(const Distribution& p, double alpha);

/// H(p) = h(R_alpha(p)). Throws DomainError when the Renyi value leaves the
/// map domain.
double spa_entropy(const Distribution& p, const EntropySpec& spec);

/// Two-parameter family through h_q: Shannon (q = alpha = 1),
/// Tsallis (q = alpha), Gaussian (alpha = 1), Renyi (q = 1).
double sharma_mittal(const Distribution& p, double alpha, double q);

/// Family through s_{alpha,r}: Renyi at r = alpha, Tsallis at r = 1.
double supra_extensive(const Distribution& p, double alpha, double r);

} // namespace spathermo
