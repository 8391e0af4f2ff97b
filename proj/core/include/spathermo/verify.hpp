#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "spathermo/thermo.hpp"

namespace spathermo::verify {

/// One randomized problem instance.
struct Instance {
    EnergySpectrum eps;
    double U;
    double alpha;
};

struct CheckResult {
    std::string name;
    bool pass = false;
    double worst = 0.0;   // worst observed discrepancy (metric depends on the check)
    double tol = 0.0;
    int count = 0;        // instances contributing
    std::string detail;
};

struct SuiteReport {
    std::string suite;
    std::vector<CheckResult> checks;
    bool pass = false;
};

/// One deformation family entering the randomized suites. A positive
/// forced_alpha pins the instance order (the supra family couples the map
/// to the entropy order).
struct MapSpec {
    std::string label;
    MapPtr map;
    double forced_alpha = 0.0;
};

struct VerifyOptions {
    std::uint64_t seed = 20250817;
    int oracle_count = 100;
    int diagram_count = 50;
    int duality_count = 100;
    int legendre_count = 20;
    int reduction_count = 200;
    SolverConfig solver{};
    std::vector<MapSpec> maps;  // empty selects the built-in default set
};

/// Closed-form solvers against the brute-force oracle, both constraint
/// kinds, total variation tolerance 1e-6.
SuiteReport run_oracle_suite(const VerifyOptions& opt);

/// Three-route agreement at the deformed-escort corner for the hq and
/// supra families; 1e-6 relative (1e-4 for the heat capacity).
SuiteReport run_diagram_suite(const VerifyOptions& opt);

/// Escort formalism at order alpha against linear at 1/alpha, each side
/// solved and differentiated independently; 1e-8 relative (1e-4 for C).
SuiteReport run_duality_suite(const VerifyOptions& opt);

/// Convergence-order test of the three Legendre identities: central
/// difference residuals must shrink by a factor in [3, 5] per step halving.
SuiteReport run_legendre_suite(const VerifyOptions& opt);

/// Family reduction identities on random distributions, 1e-12 absolute.
SuiteReport run_reduction_suite(const VerifyOptions& opt);

/// Exact-reduction check for a single family that collapses to Renyi
/// entropy (hq at q = 1, supra at r = alpha); nullopt when the family does
/// not reduce.
std::optional<CheckResult> run_reduction_focus(const MapSpec& spec, const VerifyOptions& opt);

std::vector<SuiteReport> run_all(const VerifyOptions& opt);
bool all_pass(const std::vector<SuiteReport>& reports);

} // namespace spathermo::verify
