// Command-line front end: solve single instances, sweep the internal
// energy, and run the randomized verification suites.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "spathermo/spathermo.hpp"

namespace {

using namespace spathermo;

int error_code(const Error& e) {
    if (dynamic_cast<const InfeasibleError*>(&e)) return 2;
    if (dynamic_cast<const HcViolationError*>(&e)) return 5;
    if (dynamic_cast<const ConsistencyError*>(&e)) return 5;
    if (dynamic_cast<const SolverError*>(&e)) return 4;
    if (dynamic_cast<const DomainError*>(&e)) return 3;
    return 1;
}

std::string error_type(const Error& e) {
    if (dynamic_cast<const InfeasibleError*>(&e)) return "infeasible_u";
    if (dynamic_cast<const HcViolationError*>(&e)) return "hc_violation";
    if (dynamic_cast<const ConsistencyError*>(&e)) return "consistency";
    if (dynamic_cast<const SolverError*>(&e)) return "solver_failure";
    if (dynamic_cast<const DomainError*>(&e)) return "domain";
    return "error";
}

struct CommonOptions {
    std::string spectrum;
    std::string spectrum_file;
    std::string family = "identity";
    double alpha = 1.0;
    double q = 1.0;
    double r = 1.0;
    bool q_set = false;
    bool r_set = false;
    std::string constraint = "linear";
    std::string format;
    std::string out;
    SolverConfig cfg{};
};

void add_common_flags(CLI::App* cmd, CommonOptions& o, bool need_spectrum) {
    if (need_spectrum) {
        cmd->add_option("--spectrum", o.spectrum, "Comma-separated energy levels, e.g. 0,1,2");
        cmd->add_option("--spectrum-file", o.spectrum_file,
                        "File with one energy level per line");
    }
    cmd->add_option("--family", o.family, "Entropy family: identity, hq, supra")
        ->check(CLI::IsMember({"identity", "hq", "supra"}));
    cmd->add_option("--alpha", o.alpha, "Entropy order alpha (> 0)");
    cmd->add_option("--q", o.q, "Deformation parameter q (hq family)")
        ->each([&o](const std::string&) { o.q_set = true; });
    cmd->add_option("--r", o.r, "Deformation parameter r (supra family)")
        ->each([&o](const std::string&) { o.r_set = true; });
    cmd->add_option("--constraint", o.constraint, "Energy constraint: linear or escort")
        ->check(CLI::IsMember({"linear", "escort"}));
    cmd->add_option("--format", o.format, "Output format: json or csv")
        ->check(CLI::IsMember({"json", "csv"}));
    cmd->add_option("--out", o.out, "Write output to this file instead of stdout");
    cmd->add_option("--root-tol", o.cfg.root_tol, "Constraint-residual tolerance");
    cmd->add_option("--max-iter", o.cfg.max_iter, "Root-finder iteration cap");
    cmd->add_option("--bracket-limit", o.cfg.beta_bracket_limit, "Coldness bracket cap");
    cmd->add_option("--fd-step", o.cfg.fd_step_rel, "Finite-difference step (relative)");
    cmd->add_option("--limit-eps", o.cfg.limit_eps, "Shannon-limit switch width");
}

EnergySpectrum load_spectrum(const CommonOptions& o) {
    std::vector<double> levels;
    if (!o.spectrum_file.empty()) {
        std::ifstream in(o.spectrum_file);
        if (!in) throw DomainError("cannot open spectrum file '" + o.spectrum_file + "'");
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            levels.push_back(std::stod(line));
        }
    } else if (!o.spectrum.empty()) {
        std::stringstream ss(o.spectrum);
        std::string tok;
        while (std::getline(ss, tok, ',')) levels.push_back(std::stod(tok));
    } else {
        throw DomainError("either --spectrum or --spectrum-file is required");
    }
    return EnergySpectrum(std::move(levels));
}

EntropySpec load_spec(const CommonOptions& o) {
    std::map<std::string, double> params;
    if (o.family == "hq") {
        if (!o.q_set) throw DomainError("--family hq requires --q");
        params["q"] = o.q;
    } else if (o.family == "supra") {
        if (!o.r_set) throw DomainError("--family supra requires --r");
        params["alpha"] = o.alpha;
        params["r"] = o.r;
    }
    return EntropySpec(o.alpha, make_map(o.family, params));
}

void emit(const CommonOptions& o, const std::string& text) {
    if (o.out.empty()) {
        std::cout << text << "\n";
    } else {
        std::ofstream out(o.out);
        if (!out) throw Error("cannot open output file '" + o.out + "'");
        out << text << "\n";
    }
}

int fail_with(const CommonOptions& o, const Error& e) {
    emit(o, error_json(error_type(e), e.what()));
    return error_code(e);
}

// ---------------------------------------------------------------------------

int cmd_solve(const CommonOptions& o, double U, bool with_oracle) {
    try {
        const EnergySpectrum eps = load_spectrum(o);
        const EntropySpec spec = load_spec(o);
        const ConstraintKind kind = constraint_from_string(o.constraint);
        const MaxEntSolution sol = solve_spa(eps, U, spec, kind, o.cfg);
        const EquilibriumState st = potentials(sol, spec, o.cfg);

        if (o.format == "csv") {
            emit(o, sweep_csv_header() + "\n" + sweep_csv_row(st));
            return 0;
        }
        std::optional<OracleComparison> cmp;
        if (with_oracle) {
            Distribution p = solve_oracle(eps, U, spec.alpha, kind, o.cfg);
            const double tv = total_variation(p, sol.P_hat);
            cmp = OracleComparison{std::move(p), tv};
        }
        emit(o, to_json(st, cmp));
        return 0;
    } catch (const Error& e) {
        return fail_with(o, e);
    }
}

int cmd_sweep(const CommonOptions& o, const std::string& range) {
    try {
        const EnergySpectrum eps = load_spectrum(o);
        const EntropySpec spec = load_spec(o);
        const ConstraintKind kind = constraint_from_string(o.constraint);

        double a, b, step;
        {
            std::stringstream ss(range);
            std::string tok;
            std::vector<double> parts;
            while (std::getline(ss, tok, ':')) parts.push_back(std::stod(tok));
            if (parts.size() != 3) throw DomainError("--U-range must be a:b:step");
            a = parts[0];
            b = parts[1];
            step = parts[2];
        }
        if (!(step > 0.0) || !(a < b)) throw DomainError("--U-range must satisfy a < b, step > 0");
        if (!(a > eps.min_level()) || !(b < eps.max_level()))
            throw InfeasibleError("sweep range must lie strictly inside (min eps, max eps)");

        std::vector<std::string> rows;
        std::vector<std::string> json_rows;
        for (double U = a; U <= b + 1e-12 * step; U += step) {
            try {
                const MaxEntSolution sol = solve_spa(eps, U, spec, kind, o.cfg);
                const EquilibriumState st = potentials(sol, spec, o.cfg);
                rows.push_back(sweep_csv_row(st));
                json_rows.push_back(to_json(st));
            } catch (const Error& e) {
                rows.push_back(sweep_csv_error_row(U, error_type(e)));
                json_rows.push_back(error_json(error_type(e), e.what()));
            }
        }

        if (o.format == "json") {
            std::string doc = "{\"schema\":\"spa-thermo/1\",\"kind\":\"sweep\",\"rows\":[";
            for (std::size_t i = 0; i < json_rows.size(); ++i) {
                if (i) doc += ',';
                doc += json_rows[i];
            }
            doc += "]}";
            emit(o, doc);
        } else {
            std::string doc = sweep_csv_header();
            for (const auto& row : rows) {
                doc += '\n';
                doc += row;
            }
            emit(o, doc);
        }
        return 0;
    } catch (const Error& e) {
        return fail_with(o, e);
    }
}

int cmd_verify(const CommonOptions& o, std::uint64_t seed, bool quick, bool family_given,
               const std::string& mutate) {
    try {
        set_transform_mutation(mutate);
        verify::VerifyOptions vo;
        vo.seed = seed;
        vo.solver = o.cfg;
        if (quick) {
            vo.oracle_count = 12;
            vo.diagram_count = 6;
            vo.duality_count = 12;
            vo.legendre_count = 4;
            vo.reduction_count = 40;
        }
        if (family_given) {
            const EntropySpec spec = load_spec(o);
            std::string label = o.family;
            for (const auto& [name, val] : spec.map->params())
                label += "," + name + "=" + format_g17(val);
            vo.maps = {{label, spec.map, o.family == "supra" ? o.alpha : 0.0}};
        }

        const std::vector<verify::SuiteReport> reports = verify::run_all(vo);
        for (const auto& rep : reports) {
            for (const auto& chk : rep.checks) {
                std::cout << (chk.pass ? "[PASS] " : "[FAIL] ") << chk.name << ": worst "
                          << chk.worst << " (tol " << chk.tol << ", " << chk.count
                          << " instances)";
                if (!chk.pass && !chk.detail.empty()) std::cout << "  <- " << chk.detail;
                std::cout << "\n";
            }
        }
        const bool pass = verify::all_pass(reports);
        std::cout << (pass ? "overall: PASS" : "overall: FAIL") << " (seed " << seed << ")\n";
        if (!o.out.empty() || o.format == "json") emit(o, to_json(reports, seed));
        return pass ? 0 : 1;
    } catch (const Error& e) {
        return fail_with(o, e);
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Maximum-entropy thermostatistics for deformed entropy families"};
    app.require_subcommand(1);

    CommonOptions so, wo, vo;
    double U = 0.0;
    bool with_oracle = false;
    std::string range;
    std::uint64_t seed = 20250817;
    bool quick = false;
    std::string mutate;

    CLI::App* solve = app.add_subcommand("solve", "Solve one equilibrium instance");
    add_common_flags(solve, so, true);
    solve->add_option("--U", U, "Internal energy")->required();
    solve->add_flag("--oracle", with_oracle, "Attach a brute-force comparison");

    CLI::App* sweep = app.add_subcommand("sweep", "Sweep the internal energy");
    add_common_flags(sweep, wo, true);
    sweep->add_option("--U-range", range, "Sweep range a:b:step")->required();

    CLI::App* verify_cmd =
        app.add_subcommand("verify", "Run the randomized verification suites");
    add_common_flags(verify_cmd, vo, false);
    verify_cmd->add_option("--seed", seed, "Seed for instance generation");
    verify_cmd->add_flag("--quick", quick, "Reduced instance counts");
    verify_cmd->add_option("--mutate", mutate,
                           "Self-test hook: corrupt one transform formula by 1e-3");

    CLI11_PARSE(app, argc, argv);

    if (solve->parsed()) return cmd_solve(so, U, with_oracle);
    if (sweep->parsed()) return cmd_sweep(wo, range);
    return cmd_verify(vo, seed, quick, vo.family != "identity" || vo.q_set || vo.r_set, mutate);
}
