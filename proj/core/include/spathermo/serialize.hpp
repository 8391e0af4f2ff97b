#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "spathermo/thermo.hpp"
#include "spathermo/verify.hpp"

namespace spathermo {

/// 17-significant-digit decimal form; round trips bit-faithfully.
std::string format_g17(double v);

/// Optional brute-force comparison attached to a solve result.
struct OracleComparison {
    Distribution P;
    double tv;
};

/// One equilibrium state as a single-line JSON object with the stable
/// "spa-thermo/1" schema. Absent quantities serialize as null with a reason
/// under "flags". Non-finite numbers are refused.
std::string to_json(const EquilibriumState& state,
                    const std::optional<OracleComparison>& oracle = {});

std::string to_json(const DiagramReport& report);

std::string to_json(const std::vector<verify::SuiteReport>& reports, std::uint64_t seed);

/// Machine-readable error object used by the CLI on failure.
std::string error_json(const std::string& type, const std::string& message);

/// Sweep CSV: fixed column set, one row per internal energy.
std::string sweep_csv_header();
std::string sweep_csv_row(const EquilibriumState& state);
std::string sweep_csv_error_row(double U, const std::string& error_type);

} // namespace spathermo
