#include "spathermo/thermo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace spathermo {

namespace {

// F and C carry a 1/beta; below this |beta| they are reported as absent.
constexpr double kNearDegenerateBeta = 1e-6;
// |h' - h'' C| at or below this (times max(1,|h'|)) counts as an HC violation.
constexpr double kHcTol = 1e-10;
constexpr double kMutationBump = 1e-3;

std::string g_mutation;  // testing hook, see set_transform_mutation

double mutate(const char* name, double v) {
    return g_mutation == name ? v * (1.0 + kMutationBump) : v;
}

double clamp_fd_step(double step, const MaxEntSolution& sol) {
    const double lo = sol.U - sol.eps.min_level();
    const double hi = sol.eps.max_level() - sol.U;
    return std::min({step, 0.45 * lo, 0.45 * hi});
}

Distribution escort_dual_transform(const Distribution& p, double source_order) {
    return escort(p, mutate("ec_escort", source_order));
}

struct RenyiFd {
    RenyiPotentials rp;
    std::optional<double> dbeta_dU;
};

// Potentials of the undeformed formalism: beta from the Lagrange root,
// cross-checked against a central difference of R over U; C from the
// finite-difference slope of beta.
RenyiFd renyi_potentials_fd(const MaxEntSolution& sol, const SolverConfig& cfg,
                            const Resolver& resolve) {
    RenyiFd out;
    const double beta = sol.beta_renyi;
    out.rp.R_hat = sol.R_hat;
    out.rp.beta = beta;
    out.rp.lnZ = sol.R_hat - beta * sol.U;

    const double delta = clamp_fd_step(cfg.fd_step_rel * sol.eps.spread(), sol);
    const MaxEntSolution up = resolve(sol.U + delta);
    const MaxEntSolution dn = resolve(sol.U - delta);

    const double beta_fd = (up.R_hat - dn.R_hat) / (2.0 * delta);
    if (std::abs(beta) >= kNearDegenerateBeta &&
        std::abs(beta_fd - beta) > 1e-3 * std::max(1.0, std::abs(beta)))
        throw ConsistencyError("Lagrange coldness disagrees with dR/dU finite difference");

    const double dbeta = up.beta_renyi - dn.beta_renyi;
    out.dbeta_dU = dbeta / (2.0 * delta);

    if (std::abs(beta) >= kNearDegenerateBeta) {
        out.rp.F = -out.rp.lnZ / beta;
        if (std::abs(dbeta) > 0.0) out.rp.C = -beta * beta * (2.0 * delta) / dbeta;
    }
    return out;
}

} // namespace

void set_transform_mutation(const std::string& name) { g_mutation = name; }
const std::string& transform_mutation() { return g_mutation; }

double relative_discrepancy(double a, double b) {
    return std::abs(a - b) / std::max({1e-8, std::abs(a), std::abs(b)});
}

Resolver default_resolver(const MaxEntSolution& sol, const SolverConfig& cfg) {
    const EnergySpectrum eps = sol.eps;
    const double alpha = sol.alpha;
    const ConstraintKind kind = sol.constraint;
    return [eps, alpha, kind, cfg](double u) {
        return kind == ConstraintKind::Linear ? solve_linear_renyi(eps, u, alpha, cfg)
                                              : solve_escort_renyi(eps, u, alpha, cfg);
    };
}

SpaPotentials rspa_forward(const RenyiPotentials& rp, const DeformationMap& map) {
    const double h = map.eval(rp.R_hat);
    const double hp = map.d1(rp.R_hat);
    const double hpp = map.d2(rp.R_hat);

    SpaPotentials out;
    out.H_hat = mutate("rspa_h", h);
    out.beta = mutate("rspa_beta", hp * rp.beta);
    out.lnZ = mutate("rspa_lnz", h - hp * (rp.R_hat - rp.lnZ));
    if (rp.F && rp.beta != 0.0)
        out.F = mutate("rspa_f", -h / (hp * rp.beta) + rp.R_hat / rp.beta + *rp.F);
    if (rp.C) {
        const double margin = hp - hpp * *rp.C;
        if (std::abs(margin) <= kHcTol * std::max(1.0, std::abs(hp)))
            throw HcViolationError("heat-capacity transform margin h' - h''C vanished", margin);
        out.C = mutate("rspa_c", hp * hp * *rp.C / margin);
    }
    return out;
}

RenyiPotentials rspa_inverse(const SpaPotentials& sp, const DeformationMap& map) {
    const double R = map.inverse(sp.H_hat);
    const double hp = map.d1(R);
    const double hpp = map.d2(R);

    RenyiPotentials out;
    out.R_hat = R;
    out.beta = sp.beta / hp;
    out.lnZ = R - (sp.H_hat - sp.lnZ) / hp;
    if (sp.F && sp.beta != 0.0) out.F = -R * hp / sp.beta + sp.H_hat / sp.beta + *sp.F;
    if (sp.C) {
        const double den = hp * hp + hpp * *sp.C;
        if (std::abs(den) <= kHcTol * std::max(1.0, hp * hp))
            throw HcViolationError("inverse heat-capacity transform margin vanished", den);
        out.C = *sp.C * hp / den;
    }
    return out;
}

EquilibriumState potentials_with_resolver(const MaxEntSolution& sol, const EntropySpec& spec,
                                          const SolverConfig& cfg, const Resolver& resolve) {
    cfg.validate();
    const DeformationMap& map = *spec.map;
    if (!map.domain().contains(sol.R_hat))
        throw DomainError("equilibrium entropy lies outside the deformation-map domain");

    const RenyiFd fd = renyi_potentials_fd(sol, cfg, resolve);

    EquilibriumState st{sol,
                        spec,
                        0.0,
                        0.0,
                        fd.rp.lnZ,
                        0.0,
                        fd.rp.F,
                        {},
                        fd.rp.C,
                        {},
                        {}};

    std::optional<double> hc_margin;
    if (fd.rp.C) hc_margin = map.d1(sol.R_hat) - map.d2(sol.R_hat) * *fd.rp.C;

    try {
        const SpaPotentials sp = rspa_forward(fd.rp, map);
        st.H_hat = sp.H_hat;
        st.beta_spa = sp.beta;
        st.lnZ_spa = sp.lnZ;
        st.F_spa = sp.F;
        st.C_spa = sp.C;
    } catch (const HcViolationError&) {
        RenyiPotentials trimmed = fd.rp;
        trimmed.C.reset();
        const SpaPotentials sp = rspa_forward(trimmed, map);
        st.H_hat = sp.H_hat;
        st.beta_spa = sp.beta;
        st.lnZ_spa = sp.lnZ;
        st.F_spa = sp.F;
    }

    ConditionReport& cr = st.conditions;
    cr.beta = sol.beta_renyi;
    cr.dbeta_dU = fd.dbeta_dU;
    cr.hc_margin = hc_margin;
    cr.lsr_ok = std::abs(sol.beta_renyi) >= kNearDegenerateBeta && fd.dbeta_dU &&
               std::abs(*fd.dbeta_dU) > 1e-10;
    if (hc_margin)
        cr.hc_ok = std::abs(*hc_margin) > kHcTol * std::max(1.0, std::abs(map.d1(sol.R_hat)));
    if (cr.hc_ok) cr.lsh_implied = cr.lsr_ok && *cr.hc_ok;
    return st;
}

EquilibriumState potentials(const MaxEntSolution& sol, const EntropySpec& spec,
                            const SolverConfig& cfg) {
    return potentials_with_resolver(sol, spec, cfg, default_resolver(sol, cfg));
}

SpaPotentials spa_potentials_direct(const MaxEntSolution& sol, const DeformationMap& map,
                                    const SolverConfig& cfg, const Resolver& resolve) {
    const double H0 = map.eval(sol.R_hat);
    const double delta = clamp_fd_step(cfg.fd_step_rel * sol.eps.spread(), sol);
    const double up_H = map.eval(resolve(sol.U + delta).R_hat);
    const double dn_H = map.eval(resolve(sol.U - delta).R_hat);

    SpaPotentials out;
    out.H_hat = H0;
    out.beta = (up_H - dn_H) / (2.0 * delta);
    out.lnZ = H0 - out.beta * sol.U;
    if (std::abs(out.beta) >= kNearDegenerateBeta) {
        out.F = -out.lnZ / out.beta;
        // second difference for dbeta/dU = d2H/dU2; a larger step keeps the
        // roundoff of the second difference well below the 1e-4 tolerance
        const double dc = clamp_fd_step(std::max(cfg.fd_step_rel, 1e-4) * sol.eps.spread(), sol);
        const double up2 = map.eval(resolve(sol.U + dc).R_hat);
        const double dn2 = map.eval(resolve(sol.U - dc).R_hat);
        const double d2H = (up2 - 2.0 * H0 + dn2) / (dc * dc);
        if (std::abs(d2H) > 0.0) out.C = -out.beta * out.beta / d2H;
    }
    return out;
}

EquilibriumState ec_dual(const EquilibriumState& state) {
    const MaxEntSolution& s = state.solution;
    const double a = s.alpha;
    const ConstraintKind dual_kind = s.constraint == ConstraintKind::Linear
                                         ? ConstraintKind::Escort
                                         : ConstraintKind::Linear;
    MaxEntSolution dual{s.eps,
                        s.U,
                        1.0 / a,
                        dual_kind,
                        escort_dual_transform(s.P_hat, a),
                        s.R_hat,
                        s.beta_renyi,
                        s.support_mask,
                        s.support_margin,
                        s.degenerate};
    EquilibriumState out = state;
    out.solution = std::move(dual);
    out.spec = EntropySpec(1.0 / a, state.spec.map);
    return out;
}

ConditionReport check_conditions(const EquilibriumState& state, const SolverConfig& cfg) {
    cfg.validate();
    const DeformationMap& map = *state.spec.map;
    ConditionReport cr;
    cr.beta = state.solution.beta_renyi;
    cr.dbeta_dU = state.conditions.dbeta_dU;
    if (state.C_renyi)
        cr.hc_margin = map.d1(state.solution.R_hat) - map.d2(state.solution.R_hat) * *state.C_renyi;
    cr.lsr_ok = std::abs(cr.beta) >= kNearDegenerateBeta && cr.dbeta_dU &&
                std::abs(*cr.dbeta_dU) > 1e-10;
    if (cr.hc_margin)
        cr.hc_ok = std::abs(*cr.hc_margin) >
                   kHcTol * std::max(1.0, std::abs(map.d1(state.solution.R_hat)));
    if (cr.hc_ok) cr.lsh_implied = cr.lsr_ok && *cr.hc_ok;
    return cr;
}

DiagramReport verify_diagram(const EnergySpectrum& eps, double U, double alpha,
                             const MapPtr& map, const SolverConfig& cfg) {
    cfg.validate();
    DiagramReport rep;
    rep.p_hat_tol = 1e-6;

    std::vector<Distribution> p_variants;

    // path 1: the escort problem solved and differentiated on its own
    {
        DiagramPath pa{"direct", {}, {}};
        try {
            const MaxEntSolution solE = solve_escort_renyi_direct(eps, U, alpha, cfg);
            auto resolve = [&](double u) { return solve_escort_renyi_direct(eps, u, alpha, cfg); };
            pa.values = spa_potentials_direct(solE, *map, cfg, resolve);
            p_variants.push_back(solE.P_hat);
        } catch (const Error& e) {
            pa.error = e.what();
        }
        rep.paths.push_back(std::move(pa));
    }

    // shared corner for the two transform routes: the linear problem at 1/alpha
    std::optional<RenyiPotentials> rpL;
    std::optional<Distribution> pL;
    std::string corner_error;
    try {
        const MaxEntSolution solL = solve_linear_renyi(eps, U, 1.0 / alpha, cfg);
        auto resolve = [&](double u) { return solve_linear_renyi(eps, u, 1.0 / alpha, cfg); };
        rpL = renyi_potentials_fd(solL, cfg, resolve).rp;
        pL = solL.P_hat;
    } catch (const Error& e) {
        corner_error = e.what();
    }

    // path 2: escort duality at the undeformed level, then the deformation
    {
        DiagramPath pb{"duality-then-transform", {}, {}};
        if (!rpL) {
            pb.error = corner_error;
        } else {
            try {
                const RenyiPotentials rpE = *rpL;  // duality carries potentials over
                pb.values = rspa_forward(rpE, *map);
                p_variants.push_back(escort_dual_transform(*pL, 1.0 / alpha));
            } catch (const Error& e) {
                pb.error = e.what();
            }
        }
        rep.paths.push_back(std::move(pb));
    }

    // path 3: deformation at the linear corner, then escort duality
    {
        DiagramPath pc{"transform-then-duality", {}, {}};
        if (!rpL) {
            pc.error = corner_error;
        } else {
            try {
                const SpaPotentials spaL = rspa_forward(*rpL, *map);
                pc.values = spaL;  // duality carries the deformed potentials over
                p_variants.push_back(escort_dual_transform(*pL, 1.0 / alpha));

                // reconstruct the distribution from the closed deformed-escort
                // form and this path's potentials
                const double R = map->inverse(spaL.H_hat);
                const double beta_r = spaL.beta / map->d1(R);
                const std::size_t n = eps.size();
                std::vector<double> w(n, 0.0);
                if (std::abs(alpha - 1.0) < cfg.limit_eps) {
                    for (std::size_t i = 0; i < n; ++i)
                        w[i] = std::exp(-beta_r * (eps[i] - U));
                } else {
                    const double expo = 1.0 / (1.0 - alpha);
                    for (std::size_t i = 0; i < n; ++i) {
                        const double br = 1.0 - (1.0 - alpha) * beta_r * (eps[i] - U);
                        w[i] = br > 0.0 ? std::exp(expo * std::log(br)) : 0.0;
                    }
                }
                p_variants.push_back(Distribution::normalized(std::move(w)));
            } catch (const Error& e) {
                pc.error = e.what();
            }
        }
        rep.paths.push_back(std::move(pc));
    }

    for (std::size_t i = 0; i < p_variants.size(); ++i)
        for (std::size_t j = i + 1; j < p_variants.size(); ++j)
            rep.p_hat_tv = std::max(rep.p_hat_tv, total_variation(p_variants[i], p_variants[j]));
    rep.p_hat_pass = p_variants.size() >= 2 && rep.p_hat_tv <= rep.p_hat_tol;

    struct Q {
        const char* name;
        double tol;
        std::function<std::optional<double>(const SpaPotentials&)> get;
    };
    const std::vector<Q> quantities = {
        {"H_hat", 1e-6, [](const SpaPotentials& v) { return std::optional<double>(v.H_hat); }},
        {"beta_spa", 1e-6, [](const SpaPotentials& v) { return std::optional<double>(v.beta); }},
        {"lnZ_spa", 1e-6, [](const SpaPotentials& v) { return std::optional<double>(v.lnZ); }},
        {"F_spa", 1e-6, [](const SpaPotentials& v) { return v.F; }},
        {"C_spa", 1e-4, [](const SpaPotentials& v) { return v.C; }},
    };

    bool all_ok = rep.p_hat_pass;
    for (const auto& q : quantities) {
        DiagramCheck chk;
        chk.quantity = q.name;
        chk.tol = q.tol;
        for (const auto& path : rep.paths) {
            if (path.error) continue;
            if (auto v = q.get(path.values)) chk.values.push_back(*v);
        }
        if (chk.values.size() < 2) {
            chk.skipped = true;
            chk.pass = false;
        } else {
            for (std::size_t i = 0; i < chk.values.size(); ++i)
                for (std::size_t j = i + 1; j < chk.values.size(); ++j)
                    chk.worst_rel =
                        std::max(chk.worst_rel, relative_discrepancy(chk.values[i], chk.values[j]));
            chk.pass = chk.worst_rel <= chk.tol;
        }
        all_ok = all_ok && chk.pass;
        rep.checks.push_back(std::move(chk));
    }
    for (const auto& path : rep.paths) all_ok = all_ok && !path.error;
    rep.pass = all_ok;
    return rep;
}

} // namespace spathermo
