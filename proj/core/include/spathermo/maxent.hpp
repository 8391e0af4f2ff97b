#pragma once

#include <optional>
#include <string>
#include <vector>

#include "spathermo/entropy.hpp"
#include "spathermo/simplex.hpp"

namespace spathermo {

/// Which mean-energy constraint pins the equilibrium: the plain linear
/// expectation or the expectation under the order-alpha escort distribution.
enum class ConstraintKind { Linear, Escort };

std::string to_string(ConstraintKind kind);
ConstraintKind constraint_from_string(const std::string& name);

struct SolverConfig {
    double beta_bracket_limit = 1e6;  // hard cap on |beta| during bracketing
    double root_tol = 1e-12;          // on the normalized constraint residual
    int max_iter = 200;
    double fd_step_rel = 1e-5;        // finite-difference step, times spread(eps)
    double limit_eps = 1e-8;          // |alpha-1| below this routes to the Shannon form

    void validate() const;
};

/// A solved constrained maximum-entropy problem. The distribution maximizes
/// R_alpha (equivalently any h(R_alpha)) subject to the declared constraint.
struct MaxEntSolution {
    EnergySpectrum eps;
    double U;
    double alpha;
    ConstraintKind constraint;
    Distribution P_hat;
    double R_hat;        // maximum Renyi entropy, equals renyi(P_hat, alpha)
    double beta_renyi;   // Lagrange coldness of the Renyi formalism
    std::vector<bool> support_mask;          // states surviving the cutoff
    std::optional<double> support_margin;    // min_i |bracket_i|; absent for the Shannon form
    bool degenerate;     // beta == 0 (U at the uniform mean)
};

/// Maximize R_alpha subject to sum p_i eps_i = U. Closed self-consistent
/// form with a bracketed root find on the coldness.
MaxEntSolution solve_linear_renyi(const EnergySpectrum& eps, double U, double alpha,
                                  const SolverConfig& cfg = {});

/// Maximize R_alpha subject to the escort-mean constraint. Default route:
/// solve the linear problem at order 1/alpha and escort-transform the
/// result; the direct self-consistent form is evaluated as a cross-check.
MaxEntSolution solve_escort_renyi(const EnergySpectrum& eps, double U, double alpha,
                                  const SolverConfig& cfg = {});

/// Escort solver that root-finds the escort constraint residual on the
/// closed form directly, with no recourse to the linear problem. Used for
/// independent verification of the duality route.
MaxEntSolution solve_escort_renyi_direct(const EnergySpectrum& eps, double U, double alpha,
                                         const SolverConfig& cfg = {});

/// Equilibrium for a deformed family h(R_alpha): same distribution as the
/// Renyi problem of matching kind. Validates that the solved entropy lies
/// inside the map domain.
MaxEntSolution solve_spa(const EnergySpectrum& eps, double U, const EntropySpec& spec,
                         ConstraintKind kind, const SolverConfig& cfg = {});

/// Brute-force reference: maximizes R_alpha over the simplex subject to the
/// selected constraint by multi-start projected ascent plus a Newton polish
/// of the first-order conditions. No shared machinery with the closed-form
/// solvers. Intended for small systems (n <= 6).
Distribution solve_oracle(const EnergySpectrum& eps, double U, double alpha,
                          ConstraintKind kind, const SolverConfig& cfg = {});

} // namespace spathermo
