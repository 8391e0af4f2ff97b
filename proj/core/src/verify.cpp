#include "spathermo/verify.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace spathermo::verify {

namespace {

// mt19937_64 driven through a fixed double mapping so that sequences are
// identical across standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : g_(seed) {}
    double unit() { return static_cast<double>(g_() >> 11) * 0x1.0p-53; }
    double uniform(double a, double b) { return a + (b - a) * unit(); }
    int index(int n) { return static_cast<int>(g_() % static_cast<std::uint64_t>(n)); }

private:
    std::mt19937_64 g_;
};

const std::vector<double> kAlphaSet = {0.5, 0.8, 1.0, 1.5, 2.0, 3.0};
const std::vector<double> kAlphaSetNoUnit = {0.5, 0.8, 1.5, 2.0, 3.0};

Instance random_instance(Rng& rng, const std::vector<double>& alphas, int serial) {
    for (;;) {
        const int n = 2 + rng.index(4);
        std::vector<double> levels(n);
        for (auto& e : levels) e = rng.uniform(0.0, 2.0);
        const auto [lo, hi] = std::minmax_element(levels.begin(), levels.end());
        if (*hi - *lo < 0.25) continue;  // keep the constraint well conditioned
        const double pct = (serial % 2 == 0) ? 0.3 : 0.7;
        const double U = *lo + pct * (*hi - *lo);
        const double alpha = alphas[rng.index(static_cast<int>(alphas.size()))];
        return Instance{EnergySpectrum(levels), U, alpha};
    }
}

std::vector<MapSpec> diagram_maps(const VerifyOptions& opt) {
    if (!opt.maps.empty()) return opt.maps;
    return {
        {"hq(q=0.3)", make_hq(0.3), 0.0},
        {"hq(q=0.7)", make_hq(0.7), 0.0},
        {"hq(q=1.5)", make_hq(1.5), 0.0},
        {"supra(alpha=2,r=0.5)", make_supra(2.0, 0.5), 2.0},
        {"supra(alpha=0.5,r=2)", make_supra(0.5, 2.0), 0.5},
    };
}

bool support_stable(const MaxEntSolution& a, const MaxEntSolution& b) {
    return a.support_mask == b.support_mask;
}

bool margin_ok(const MaxEntSolution& s) {
    return !s.support_margin || *s.support_margin > 5e-2;
}

// An instance is admissible for differentiated checks when both solvers
// succeed, beta is well away from zero, the map domain holds with margin,
// the HC margin is clear of zero, and no cutoff kink sits within the
// finite-difference stencil.
bool instance_ok(const Instance& inst, const MapPtr& map, const SolverConfig& cfg) {
    try {
        const double spread = inst.eps.spread();
        const MaxEntSolution solL = solve_linear_renyi(inst.eps, inst.U, 1.0 / inst.alpha, cfg);
        const MaxEntSolution solE = solve_escort_renyi_direct(inst.eps, inst.U, inst.alpha, cfg);

        const double babs = std::abs(solL.beta_renyi) * spread;
        if (babs < 5e-2 || babs > 1e3) return false;
        if (!map->domain().contains(solL.R_hat, 5e-2)) return false;
        if (!margin_ok(solL) || !margin_ok(solE)) return false;

        const double dc = 2.0 * std::max(cfg.fd_step_rel, 1e-4) * spread;
        for (const double u : {inst.U - dc, inst.U + dc}) {
            if (!(u > inst.eps.min_level()) || !(u < inst.eps.max_level())) return false;
            const MaxEntSolution l2 = solve_linear_renyi(inst.eps, u, 1.0 / inst.alpha, cfg);
            const MaxEntSolution e2 = solve_escort_renyi_direct(inst.eps, u, inst.alpha, cfg);
            if (!support_stable(solL, l2) || !support_stable(solE, e2)) return false;
            if (!margin_ok(l2) || !margin_ok(e2)) return false;
            if (!map->domain().contains(l2.R_hat, 5e-2)) return false;
        }

        // HC margin via the linear-side heat capacity
        const EntropySpec spec(1.0 / inst.alpha, map);
        const EquilibriumState st = potentials(solL, spec, cfg);
        if (!st.C_renyi || !st.conditions.hc_margin) return false;
        const double d1 = map->d1(solL.R_hat);
        if (std::abs(*st.conditions.hc_margin) < 1e-3 * std::max(1.0, std::abs(d1))) return false;
        return true;
    } catch (const Error&) {
        return false;
    }
}

Instance admissible_instance(Rng& rng, const std::vector<double>& alphas, double forced_alpha,
                             const MapPtr& map, const SolverConfig& cfg, int serial) {
    for (int tries = 0; tries < 5000; ++tries) {
        Instance inst = random_instance(rng, alphas, serial);
        if (forced_alpha > 0.0) inst.alpha = forced_alpha;
        if (instance_ok(inst, map, cfg)) return inst;
    }
    throw SolverError("failed to generate an admissible verification instance");
}

std::string describe(const Instance& inst) {
    std::ostringstream os;
    os << "n=" << inst.eps.size() << " U=" << inst.U << " alpha=" << inst.alpha;
    return os.str();
}

void finish(CheckResult& chk) { chk.pass = chk.worst <= chk.tol; }

} // namespace

SuiteReport run_oracle_suite(const VerifyOptions& opt) {
    Rng rng(opt.seed * 2654435761u + 1);
    SuiteReport rep;
    rep.suite = "oracle";
    CheckResult lin{"oracle/linear", false, 0.0, 1e-6, 0, ""};
    CheckResult esc{"oracle/escort", false, 0.0, 1e-6, 0, ""};
    for (int i = 0; i < opt.oracle_count; ++i) {
        const Instance inst = random_instance(rng, kAlphaSet, i);
        {
            const MaxEntSolution s = solve_linear_renyi(inst.eps, inst.U, inst.alpha, opt.solver);
            const Distribution o =
                solve_oracle(inst.eps, inst.U, inst.alpha, ConstraintKind::Linear, opt.solver);
            const double tv = total_variation(s.P_hat, o);
            if (tv > lin.worst) {
                lin.worst = tv;
                lin.detail = describe(inst);
            }
            ++lin.count;
        }
        {
            const MaxEntSolution s = solve_escort_renyi(inst.eps, inst.U, inst.alpha, opt.solver);
            const Distribution o =
                solve_oracle(inst.eps, inst.U, inst.alpha, ConstraintKind::Escort, opt.solver);
            const double tv = total_variation(s.P_hat, o);
            if (tv > esc.worst) {
                esc.worst = tv;
                esc.detail = describe(inst);
            }
            ++esc.count;
        }
    }
    finish(lin);
    finish(esc);
    rep.checks = {lin, esc};
    rep.pass = lin.pass && esc.pass;
    return rep;
}

SuiteReport run_diagram_suite(const VerifyOptions& opt) {
    Rng rng(opt.seed * 2654435761u + 2);
    SuiteReport rep;
    rep.suite = "diagram";
    rep.pass = true;
    for (const MapSpec& nm : diagram_maps(opt)) {
        CheckResult scalar{"diagram/" + nm.label, false, 0.0, 1e-6, 0, ""};
        CheckResult heat{"diagram-C/" + nm.label, false, 0.0, 1e-4, 0, ""};
        CheckResult phat{"diagram-P/" + nm.label, false, 0.0, 1e-6, 0, ""};
        bool structural_ok = true;
        for (int i = 0; i < opt.diagram_count; ++i) {
            const Instance inst =
                admissible_instance(rng, kAlphaSetNoUnit, nm.forced_alpha, nm.map, opt.solver, i);
            const DiagramReport dr =
                verify_diagram(inst.eps, inst.U, inst.alpha, nm.map, opt.solver);
            for (const auto& path : dr.paths) structural_ok = structural_ok && !path.error;
            for (const auto& chk : dr.checks) {
                if (chk.skipped) {
                    structural_ok = false;
                    continue;
                }
                CheckResult& target = chk.quantity == "C_spa" ? heat : scalar;
                if (chk.worst_rel > target.worst) {
                    target.worst = chk.worst_rel;
                    target.detail = describe(inst) + " [" + chk.quantity + "]";
                }
            }
            if (dr.p_hat_tv > phat.worst) {
                phat.worst = dr.p_hat_tv;
                phat.detail = describe(inst);
            }
            ++scalar.count;
            ++heat.count;
            ++phat.count;
        }
        finish(scalar);
        finish(heat);
        finish(phat);
        scalar.pass = scalar.pass && structural_ok;
        rep.checks.push_back(scalar);
        rep.checks.push_back(heat);
        rep.checks.push_back(phat);
        rep.pass = rep.pass && scalar.pass && heat.pass && phat.pass;
    }
    return rep;
}

SuiteReport run_duality_suite(const VerifyOptions& opt) {
    Rng rng(opt.seed * 2654435761u + 3);
    SuiteReport rep;
    rep.suite = "duality";
    CheckResult scalar{"duality/potentials", false, 0.0, 1e-8, 0, ""};
    CheckResult heat{"duality/C", false, 0.0, 1e-4, 0, ""};
    CheckResult phat{"duality/P-escort", false, 0.0, 1e-8, 0, ""};

    std::vector<MapSpec> maps = opt.maps;
    const bool dynamic_supra = maps.empty();
    if (maps.empty())
        maps = {
            {"identity", make_identity(), 0.0},
            {"hq(q=0.3)", make_hq(0.3), 0.0},
            {"hq(q=0.7)", make_hq(0.7), 0.0},
            {"hq(q=1.5)", make_hq(1.5), 0.0},
        };

    for (int i = 0; i < opt.duality_count; ++i) {
        MapSpec nm = maps[static_cast<std::size_t>(i) % maps.size()];
        const Instance inst =
            admissible_instance(rng, kAlphaSet, nm.forced_alpha, nm.map, opt.solver, i);
        // the remaining family: r < 1 keeps the domain unbounded above
        if (dynamic_supra && i % 5 == 4) nm = {"supra", make_supra(inst.alpha, 0.5), inst.alpha};

        const auto& eps = inst.eps;
        const double a = inst.alpha;

        const MaxEntSolution solE = solve_escort_renyi_direct(eps, inst.U, a, opt.solver);
        const EquilibriumState stE = potentials_with_resolver(
            solE, EntropySpec(a, nm.map), opt.solver,
            [&](double u) { return solve_escort_renyi_direct(eps, u, a, opt.solver); });

        const MaxEntSolution solL = solve_linear_renyi(eps, inst.U, 1.0 / a, opt.solver);
        const EquilibriumState stL = potentials_with_resolver(
            solL, EntropySpec(1.0 / a, nm.map), opt.solver,
            [&](double u) { return solve_linear_renyi(eps, u, 1.0 / a, opt.solver); });

        auto track = [&](CheckResult& target, double d, const char* what) {
            if (d > target.worst) {
                target.worst = d;
                target.detail = describe(inst) + " [" + what + ", " + nm.label + "]";
            }
        };
        track(scalar, relative_discrepancy(stE.solution.R_hat, stL.solution.R_hat), "R_hat");
        track(scalar, relative_discrepancy(stE.H_hat, stL.H_hat), "H_hat");
        track(scalar, relative_discrepancy(stE.beta_spa, stL.beta_spa), "beta_spa");
        track(scalar, relative_discrepancy(stE.lnZ_spa, stL.lnZ_spa), "lnZ_spa");
        if (stE.F_spa && stL.F_spa)
            track(scalar, relative_discrepancy(*stE.F_spa, *stL.F_spa), "F_spa");
        if (stE.C_spa && stL.C_spa)
            track(heat, relative_discrepancy(*stE.C_spa, *stL.C_spa), "C_spa");
        track(phat, total_variation(solE.P_hat, escort(solL.P_hat, 1.0 / a)), "P_hat");

        ++scalar.count;
        ++heat.count;
        ++phat.count;
    }
    finish(scalar);
    finish(heat);
    finish(phat);
    rep.checks = {scalar, heat, phat};
    rep.pass = scalar.pass && heat.pass && phat.pass;
    return rep;
}

SuiteReport run_legendre_suite(const VerifyOptions& opt) {
    Rng rng(opt.seed * 2654435761u + 4);
    SuiteReport rep;
    rep.suite = "legendre";
    rep.pass = true;

    std::vector<MapSpec> maps = opt.maps;
    if (maps.empty())
        maps = {
            {"identity", make_identity(), 0.0},
            {"hq(q=0.7)", make_hq(0.7), 0.0},
            {"hq(q=1.5)", make_hq(1.5), 0.0},
            {"supra(alpha=2,r=0.5)", make_supra(2.0, 0.5), 2.0},
            {"supra(alpha=0.5,r=2)", make_supra(0.5, 2.0), 0.5},
        };

    for (const MapSpec& nm : maps) {
        CheckResult chk{"legendre/" + nm.label, false, 0.0, 0.0, 0, ""};
        double lo_ratio = 1e300, hi_ratio = 0.0;
        int accepted = 0;
        for (int serial = 0; accepted < opt.legendre_count && serial < 50 * opt.legendre_count;
             ++serial) {
            const Instance inst =
                admissible_instance(rng, kAlphaSetNoUnit, nm.forced_alpha, nm.map, opt.solver,
                                    serial);
            const ConstraintKind kind =
                serial % 2 == 0 ? ConstraintKind::Linear : ConstraintKind::Escort;
            const auto& eps = inst.eps;
            const double a = inst.alpha;
            auto resolve = [&](double u) {
                return kind == ConstraintKind::Linear
                           ? solve_linear_renyi(eps, u, a, opt.solver)
                           : solve_escort_renyi_direct(eps, u, a, opt.solver);
            };
            const MaxEntSolution sol = resolve(inst.U);
            const DeformationMap& map = *nm.map;

            const double H0 = map.eval(sol.R_hat);
            const double b0 = map.d1(sol.R_hat) * sol.beta_renyi;
            const double lnZ0 = H0 - b0 * sol.U;
            (void)lnZ0;

            auto residuals = [&](double d, double out[3]) {
                const MaxEntSolution sp = resolve(sol.U + d);
                const MaxEntSolution sm = resolve(sol.U - d);
                const double Hp = map.eval(sp.R_hat), Hm = map.eval(sm.R_hat);
                const double bp = map.d1(sp.R_hat) * sp.beta_renyi;
                const double bm = map.d1(sm.R_hat) * sm.beta_renyi;
                const double Zp = Hp - bp * (sol.U + d);
                const double Zm = Hm - bm * (sol.U - d);
                const double Fp = -Zp / bp, Fm = -Zm / bm;
                const double db = bp - bm;
                out[0] = std::abs((Hp - Hm) - b0 * 2.0 * d) / std::abs(db);
                out[1] = std::abs(sol.U + (Zp - Zm) / db);
                out[2] = std::abs(H0 - b0 * b0 * (Fp - Fm) / db);
            };

            const double d0 =
                std::min(1e-3 * eps.spread(), 0.2 * std::min(sol.U - eps.min_level(),
                                                             eps.max_level() - sol.U));
            double r0[3], r1[3];
            residuals(d0, r0);
            residuals(0.5 * d0, r1);

            const double floor = 1e-11 * std::max(1.0, std::abs(H0));
            bool usable = true;
            for (int k = 0; k < 3; ++k) usable = usable && r1[k] > floor;
            if (!usable) continue;

            for (int k = 0; k < 3; ++k) {
                const double ratio = r0[k] / r1[k];
                lo_ratio = std::min(lo_ratio, ratio);
                hi_ratio = std::max(hi_ratio, ratio);
                const double outside =
                    ratio < 3.0 ? 3.0 - ratio : (ratio > 5.0 ? ratio - 5.0 : 0.0);
                if (outside > chk.worst) {
                    chk.worst = outside;
                    chk.detail = describe(inst) + " [identity " + std::to_string(k + 1) +
                                 ", ratio " + std::to_string(ratio) + "]";
                }
            }
            ++accepted;
            ++chk.count;
        }
        chk.pass = accepted >= opt.legendre_count && chk.worst == 0.0;
        if (chk.detail.empty()) {
            std::ostringstream os;
            os << "ratios in [" << lo_ratio << ", " << hi_ratio << "]";
            chk.detail = os.str();
        }
        rep.pass = rep.pass && chk.pass;
        rep.checks.push_back(chk);
    }
    return rep;
}

SuiteReport run_reduction_suite(const VerifyOptions& opt) {
    Rng rng(opt.seed * 2654435761u + 5);
    SuiteReport rep;
    rep.suite = "reduction";

    const std::vector<double> alpha_set = {0.3, 0.5, 0.8, 1.5, 2.0, 3.0};
    CheckResult sm_renyi{"reduction/SM(q=1)=Renyi", false, 0.0, 1e-12, 0, ""};
    CheckResult sm_tsallis{"reduction/SM(q=alpha)=Tsallis", false, 0.0, 1e-12, 0, ""};
    CheckResult sm_shannon{"reduction/SM(1,1)=Shannon", false, 0.0, 1e-12, 0, ""};
    CheckResult se_renyi{"reduction/SE(r=alpha)=Renyi", false, 0.0, 1e-12, 0, ""};
    CheckResult se_tsallis{"reduction/SE(r=1)=Tsallis", false, 0.0, 1e-12, 0, ""};

    auto tsallis_direct = [](const Distribution& p, double alpha) {
        double s = 0.0;
        for (double x : p.probs())
            if (x > 0.0) s += std::pow(x, alpha);
        return (1.0 - s) / (alpha - 1.0);
    };
    auto shannon_direct = [](const Distribution& p) {
        double s = 0.0;
        for (double x : p.probs())
            if (x > 0.0) s -= x * std::log(x);
        return s;
    };

    for (int i = 0; i < opt.reduction_count; ++i) {
        const int n = 2 + rng.index(5);
        std::vector<double> w(n);
        for (auto& x : w) x = -std::log(std::max(rng.unit(), 1e-16));
        const Distribution p = Distribution::normalized(w);
        const double alpha = alpha_set[rng.index(static_cast<int>(alpha_set.size()))];

        auto track = [&](CheckResult& chk, double diff) {
            if (diff > chk.worst) {
                chk.worst = diff;
                chk.detail = "n=" + std::to_string(n) + " alpha=" + std::to_string(alpha);
            }
            ++chk.count;
        };
        track(sm_renyi, std::abs(sharma_mittal(p, alpha, 1.0) - renyi(p, alpha)));
        track(sm_tsallis, std::abs(sharma_mittal(p, alpha, alpha) - tsallis_direct(p, alpha)));
        track(sm_shannon, std::abs(sharma_mittal(p, 1.0, 1.0) - shannon_direct(p)));
        track(se_renyi, std::abs(supra_extensive(p, alpha, alpha) - renyi(p, alpha)));
        track(se_tsallis, std::abs(supra_extensive(p, alpha, 1.0) - tsallis_direct(p, alpha)));
    }
    for (CheckResult* chk : {&sm_renyi, &sm_tsallis, &sm_shannon, &se_renyi, &se_tsallis}) {
        finish(*chk);
        rep.checks.push_back(*chk);
    }
    rep.pass = true;
    for (const auto& chk : rep.checks) rep.pass = rep.pass && chk.pass;
    return rep;
}

std::optional<CheckResult> run_reduction_focus(const MapSpec& spec, const VerifyOptions& opt) {
    bool reduces = false;
    if (const auto* hq = dynamic_cast<const HqMap*>(spec.map.get()))
        reduces = std::abs(hq->q() - 1.0) < 1e-12;
    else if (const auto* su = dynamic_cast<const SupraMap*>(spec.map.get()))
        reduces = std::abs(su->r() - su->alpha()) < 1e-12;
    else if (dynamic_cast<const IdentityMap*>(spec.map.get()))
        reduces = true;
    if (!reduces) return std::nullopt;

    Rng rng(opt.seed * 2654435761u + 6);
    CheckResult chk{"reduction-focus/" + spec.label + "=Renyi", false, 0.0, 1e-12, 0, ""};
    for (int i = 0; i < 50; ++i) {
        const int n = 2 + rng.index(5);
        std::vector<double> w(n);
        for (auto& x : w) x = -std::log(std::max(rng.unit(), 1e-16));
        const Distribution p = Distribution::normalized(w);
        const double alpha = spec.forced_alpha > 0.0
                                 ? spec.forced_alpha
                                 : kAlphaSet[static_cast<std::size_t>(
                                       rng.index(static_cast<int>(kAlphaSet.size())))];
        const double diff =
            std::abs(spa_entropy(p, EntropySpec(alpha, spec.map)) - renyi(p, alpha));
        if (diff > chk.worst) {
            chk.worst = diff;
            chk.detail = "n=" + std::to_string(n) + " alpha=" + std::to_string(alpha);
        }
        ++chk.count;
    }
    finish(chk);
    return chk;
}

std::vector<SuiteReport> run_all(const VerifyOptions& opt) {
    std::vector<SuiteReport> reports = {run_reduction_suite(opt), run_oracle_suite(opt),
                                        run_duality_suite(opt), run_diagram_suite(opt),
                                        run_legendre_suite(opt)};
    for (const MapSpec& spec : opt.maps) {
        if (auto chk = run_reduction_focus(spec, opt)) {
            SuiteReport rep;
            rep.suite = "reduction-focus";
            rep.checks = {*chk};
            rep.pass = chk->pass;
            reports.push_back(std::move(rep));
        }
    }
    return reports;
}

bool all_pass(const std::vector<SuiteReport>& reports) {
    for (const auto& r : reports)
        if (!r.pass) return false;
    return !reports.empty();
}

} // namespace spathermo::verify
