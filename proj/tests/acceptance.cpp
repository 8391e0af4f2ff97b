// Acceptance suite: one pass/fail line per criterion, nonzero exit when any
// criterion fails. Criterion 9 drives the CLI binary named by SPATHERMO_CLI
// (or --cli <path>).

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "spathermo/spathermo.hpp"

using namespace spathermo;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

int g_failures = 0;

void run_criterion(int id, const std::string& label, const std::function<Outcome()>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome out{false, ""};
    try {
        out = body();
    } catch (const std::exception& e) {
        out = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!out.pass) ++g_failures;
    std::printf("[%s] criterion %d: %s — %s [%.1f s]\n", out.pass ? "PASS" : "FAIL", id,
                label.c_str(), out.detail.c_str(), secs);
    std::fflush(stdout);
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) : g_(seed) {}
    double unit() { return static_cast<double>(g_() >> 11) * 0x1.0p-53; }
    int index(int n) { return static_cast<int>(g_() % static_cast<std::uint64_t>(n)); }

private:
    std::mt19937_64 g_;
};

struct Instance {
    EnergySpectrum eps;
    double U;
    double alpha;
};

Instance draw_instance(Rng& rng, const std::vector<double>& alphas, int serial) {
    for (;;) {
        const int n = 2 + rng.index(4);
        std::vector<double> levels(n);
        for (auto& e : levels) e = 2.0 * rng.unit();
        const auto [lo, hi] = std::minmax_element(levels.begin(), levels.end());
        if (*hi - *lo < 0.25) continue;
        const double pct = serial % 2 == 0 ? 0.3 : 0.7;
        return Instance{EnergySpectrum(levels), *lo + pct * (*hi - *lo),
                        alphas[rng.index(static_cast<int>(alphas.size()))]};
    }
}

struct SuiteSummary {
    bool pass = true;
    double worst = 0.0;
    int count = 0;
};

SuiteSummary summarize(const verify::SuiteReport& rep, const std::string& prefix = "") {
    SuiteSummary s;
    s.pass = rep.pass;
    for (const auto& chk : rep.checks) {
        if (!prefix.empty() && chk.name.rfind(prefix, 0) != 0) continue;
        s.worst = std::max(s.worst, chk.worst);
        s.count += chk.count;
    }
    return s;
}

// ---------------------------------------------------------------------------
// criterion 6 helpers

struct HeatCheck {
    double worst_fd = 0.0;       // closed transform vs finite differences
    double worst_special = 0.0;  // family-closed formula vs generic transform
    int count = 0;
};

void heat_capacity_check(Rng& rng, const verify::MapSpec& spec, int want, HeatCheck& agg) {
    const SolverConfig cfg;
    const std::vector<double> alphas = {0.5, 0.8, 1.5, 2.0, 3.0};
    for (int serial = 0; agg.count < want && serial < 200 * want; ++serial) {
        Instance inst = draw_instance(rng, alphas, serial);
        if (spec.forced_alpha > 0.0) inst.alpha = spec.forced_alpha;
        try {
            const MaxEntSolution sol = solve_linear_renyi(inst.eps, inst.U, inst.alpha, cfg);
            if (std::abs(sol.beta_renyi) * inst.eps.spread() < 5e-2) continue;
            if (!spec.map->domain().contains(sol.R_hat, 5e-2)) continue;
            if (sol.support_margin && *sol.support_margin < 5e-2) continue;

            const EntropySpec espec(inst.alpha, spec.map);
            const EquilibriumState st = potentials(sol, espec, cfg);
            if (!st.C_renyi || !st.C_spa || !st.conditions.hc_margin) continue;
            if (std::abs(*st.conditions.hc_margin) <= 1e-6) continue;

            auto resolve = [&](double u) {
                return solve_linear_renyi(inst.eps, u, inst.alpha, cfg);
            };
            const SpaPotentials direct = spa_potentials_direct(sol, *spec.map, cfg, resolve);
            if (!direct.C) continue;
            agg.worst_fd =
                std::max(agg.worst_fd, relative_discrepancy(*st.C_spa, *direct.C));

            const double R = sol.R_hat;
            const double C = *st.C_renyi;
            double special;
            if (spec.map->family() == "hq") {
                const double q = spec.map->params()[0].second;
                special = std::exp((1.0 - q) * R) / (1.0 / C - (1.0 - q));
            } else {
                const double a = spec.map->params()[0].second;
                const double r = spec.map->params()[1].second;
                const double base = (1.0 - r) * R + 1.0;
                const double factor = std::pow(base, (1.0 - a) / (1.0 - r) - 1.0);
                special = factor / (1.0 / C - (r - a) / base);
            }
            agg.worst_special =
                std::max(agg.worst_special, relative_discrepancy(special, *st.C_spa));
            ++agg.count;
        } catch (const Error&) {
            continue;
        }
    }
}

// ---------------------------------------------------------------------------
// criterion 9 helper

std::string g_cli_path;

int run_cli(const std::string& args) {
    const std::string cmd = "\"" + g_cli_path + "\" " + args + " > acceptance_cli.tmp 2>&1";
    const int raw = std::system(cmd.c_str());
    std::remove("acceptance_cli.tmp");
    return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
}

} // namespace

int main(int argc, char** argv) {
    for (int i = 1; i + 1 < argc; ++i)
        if (std::string(argv[i]) == "--cli") g_cli_path = argv[i + 1];
    if (g_cli_path.empty())
        if (const char* env = std::getenv("SPATHERMO_CLI")) g_cli_path = env;

    const verify::VerifyOptions opt;  // defaults: seed 20250817, full counts

    run_criterion(1, "closed-form solvers match the brute-force reference", [&] {
        const auto t0 = std::chrono::steady_clock::now();
        const auto rep = verify::run_oracle_suite(opt);
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const auto s = summarize(rep);
        const bool in_time = secs <= 60.0;
        return Outcome{s.pass && in_time, "worst TV " + fmt(s.worst) + " over " +
                                              std::to_string(s.count) +
                                              " solves (tol 1e-06), runtime cap 60 s" +
                                              (in_time ? "" : " EXCEEDED")};
    });

    run_criterion(2, "equivalence diagram closes along all three routes", [&] {
        const auto t0 = std::chrono::steady_clock::now();
        const auto rep = verify::run_diagram_suite(opt);
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const auto scalars = summarize(rep, "diagram/");
        const auto heats = summarize(rep, "diagram-C/");
        const bool in_time = secs <= 120.0;
        return Outcome{rep.pass && in_time,
                       "worst rel " + fmt(scalars.worst) + " (tol 1e-06), C " +
                           fmt(heats.worst) + " (tol 1e-04), runtime cap 120 s" +
                           (in_time ? "" : " EXCEEDED")};
    });

    run_criterion(3, "escort/linear duality equalities", [&] {
        const auto rep = verify::run_duality_suite(opt);
        double worst_scalar = 0.0, worst_c = 0.0;
        for (const auto& chk : rep.checks)
            (chk.name == "duality/C" ? worst_c : worst_scalar) =
                std::max(chk.name == "duality/C" ? worst_c : worst_scalar, chk.worst);
        return Outcome{rep.pass, "worst rel " + fmt(worst_scalar) + " (tol 1e-08), C " +
                                     fmt(worst_c) + " (tol 1e-04)"};
    });

    run_criterion(4, "Legendre identities converge at second order", [&] {
        const auto rep = verify::run_legendre_suite(opt);
        std::string detail = "step-halving ratios within [3,5] for all families";
        for (const auto& chk : rep.checks)
            if (!chk.pass) detail = chk.name + ": " + chk.detail;
        return Outcome{rep.pass, detail};
    });

    run_criterion(5, "family reduction identities exact to 1e-12", [&] {
        const auto rep = verify::run_reduction_suite(opt);
        const auto s = summarize(rep);
        return Outcome{rep.pass, "worst abs " + fmt(s.worst) + " over " +
                                     std::to_string(s.count) + " checks"};
    });

    run_criterion(6, "heat-capacity transform: finite differences and closed family forms",
                  [&] {
                      Rng rng(opt.seed * 977 + 6);
                      HeatCheck agg;
                      const std::vector<verify::MapSpec> maps = {
                          {"hq(0.3)", make_hq(0.3), 0.0},
                          {"hq(0.7)", make_hq(0.7), 0.0},
                          {"hq(1.5)", make_hq(1.5), 0.0},
                          {"supra(2,0.5)", make_supra(2.0, 0.5), 2.0},
                          {"supra(0.5,2)", make_supra(0.5, 2.0), 0.5},
                      };
                      for (const auto& m : maps) heat_capacity_check(rng, m, 20, agg);
                      const bool pass = agg.count >= 100 && agg.worst_fd <= 1e-4 &&
                                        agg.worst_special <= 1e-10;
                      return Outcome{pass, "fd rel " + fmt(agg.worst_fd) +
                                               " (tol 1e-04), closed-form rel " +
                                               fmt(agg.worst_special) + " (tol 1e-10), " +
                                               std::to_string(agg.count) + " states"};
                  });

    run_criterion(7, "two-level analytic anchor", [&] {
        const EnergySpectrum eps({0.0, 1.0});
        const EntropySpec spec(1.0, make_identity());
        const MaxEntSolution sol = solve_linear_renyi(eps, 1.0 / 3.0, 1.0);
        const EquilibriumState st = potentials(sol, spec);
        const double beta_err = std::abs(sol.beta_renyi - std::log(2.0));
        const double lnz_err = std::abs(st.lnZ_renyi - std::log(1.5));
        const double c_ref = std::log(2.0) * std::log(2.0) * 2.0 / 9.0;
        const double c_err = st.C_renyi ? std::abs(*st.C_renyi - c_ref) : 1.0;
        const bool pass = beta_err <= 1e-9 && lnz_err <= 1e-9 && c_err <= 1e-5;
        return Outcome{pass, "|beta-ln2| " + fmt(beta_err) + ", |lnZ-ln(3/2)| " +
                                 fmt(lnz_err) + ", |C-(ln2)^2*2/9| " + fmt(c_err)};
    });

    run_criterion(8, "condition reporting: degenerate flag and hq margin", [&] {
        const EnergySpectrum eps({0.0, 1.0});
        const EntropySpec spec(2.0, make_hq(0.7));
        const MaxEntSolution sol = solve_spa(eps, 0.5, spec, ConstraintKind::Linear);
        const EquilibriumState st = potentials(sol, spec);
        const bool degenerate_ok =
            sol.degenerate && !st.conditions.lsr_ok && std::abs(sol.beta_renyi) <= 1e-9;

        Rng rng(opt.seed * 977 + 8);
        double worst = 0.0;
        int count = 0;
        for (int serial = 0; count < 40 && serial < 4000; ++serial) {
            const Instance inst = draw_instance(rng, {0.5, 0.8, 1.5, 2.0, 3.0}, serial);
            const double q = serial % 2 == 0 ? 0.3 : 1.5;
            try {
                const EntropySpec es(inst.alpha, make_hq(q));
                const MaxEntSolution s = solve_linear_renyi(inst.eps, inst.U, inst.alpha);
                if (std::abs(s.beta_renyi) * inst.eps.spread() < 5e-2) continue;
                const EquilibriumState t = potentials(s, es);
                if (!t.conditions.hc_margin || !t.C_renyi) continue;
                const double hp = std::exp((1.0 - q) * s.R_hat);
                const double closed = hp * (1.0 - (1.0 - q) * *t.C_renyi);
                worst = std::max(worst,
                                 std::abs(*t.conditions.hc_margin - closed) /
                                     std::max(1.0, std::abs(closed)));
                ++count;
            } catch (const Error&) {
                continue;
            }
        }
        const bool pass = degenerate_ok && count >= 40 && worst <= 1e-10;
        return Outcome{pass, std::string("degenerate flagged: ") +
                                 (degenerate_ok ? "yes" : "NO") + ", hq margin rel " +
                                 fmt(worst) + " (tol 1e-10)"};
    });

    run_criterion(9, "CLI verify passes clean and fails under every mutation", [&] {
        if (g_cli_path.empty())
            return Outcome{false, "CLI path missing: set SPATHERMO_CLI or pass --cli"};
        if (run_cli("verify") != 0) return Outcome{false, "default verify run exited nonzero"};
        std::string failed;
        for (const char* m :
             {"rspa_h", "rspa_beta", "rspa_lnz", "rspa_f", "rspa_c", "ec_escort"}) {
            if (run_cli(std::string("verify --quick --mutate ") + m) == 0)
                failed += std::string(failed.empty() ? "" : ",") + m;
        }
        return Outcome{failed.empty(),
                       failed.empty() ? "clean run exit 0; all 6 mutations detected"
                                      : "mutations NOT detected: " + failed};
    });

    std::printf("%s: %d/9 criteria passed\n", g_failures == 0 ? "ACCEPTANCE PASS"
                                                              : "ACCEPTANCE FAIL",
                9 - g_failures);
    return g_failures == 0 ? 0 : 1;
}
