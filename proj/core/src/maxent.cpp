#include "spathermo/maxent.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

namespace spathermo {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// |beta| * spread below this marks the degenerate (beta = 0) solution.
constexpr double kDegenerateBetaTol = 1e-9;

// ---------------------------------------------------------------------------
// Bracket-power form
//
// Both closed forms share the shape  w_i = [1 - t*dE_i]_+^expo  with
//   linear constraint:  t = beta*(alpha-1)/alpha,  expo = 1/(alpha-1),
//                       residual weights = w (the distribution itself);
//   escort constraint:  t = beta*(1-alpha),        expo = 1/(1-alpha),
//                       residual weights = w^alpha (the escort of w).
// The Shannon limit uses ln w_i = -t*dE_i instead.

struct FormEval {
    std::vector<double> p;          // normalized probabilities
    std::vector<bool> mask;         // bracket_i > 0
    double logZ;                    // ln sum_i w_i
    double resid;                   // constraint residual (same units as dE)
    double margin;                  // min_i |bracket_i|; +inf for the Shannon form
};

// expo == 0 selects the Shannon form.
FormEval eval_form(const std::vector<double>& dE, double t, double expo, double resid_power) {
    const std::size_t n = dE.size();
    FormEval ev;
    ev.mask.assign(n, true);
    ev.margin = kInf;
    std::vector<double> logw(n, -kInf);
    for (std::size_t i = 0; i < n; ++i) {
        if (expo == 0.0) {
            logw[i] = -t * dE[i];
            continue;
        }
        const double br = 1.0 - t * dE[i];
        ev.margin = std::min(ev.margin, std::abs(br));
        if (br > 0.0) {
            logw[i] = expo * std::log(br);
        } else {
            if (expo < 0.0)
                throw SolverError("bracket form evaluated outside its feasible interval");
            ev.mask[i] = false;
        }
    }
    const double m = *std::max_element(logw.begin(), logw.end());
    if (!std::isfinite(m)) throw SolverError("all states cut off; no admissible distribution");

    ev.p.assign(n, 0.0);
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (ev.mask[i]) {
            ev.p[i] = std::exp(logw[i] - m);
            sum += ev.p[i];
        }
    }
    ev.logZ = m + std::log(sum);
    for (auto& x : ev.p) x /= sum;

    if (resid_power == 1.0) {
        ev.resid = std::inner_product(ev.p.begin(), ev.p.end(), dE.begin(), 0.0);
    } else {
        double mm = -kInf;
        for (std::size_t i = 0; i < n; ++i)
            if (ev.mask[i]) mm = std::max(mm, resid_power * logw[i]);
        double rs = 0.0, acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (!ev.mask[i]) continue;
            const double rw = std::exp(resid_power * logw[i] - mm);
            rs += rw;
            acc += rw * dE[i];
        }
        ev.resid = acc / rs;
    }
    return ev;
}

// Brent's method on [a, b] with f(a)*f(b) <= 0, run to machine-tight
// interval. Returns the best abscissa.
double brent_root(const std::function<double(double)>& f, double a, double b, double fa,
                  double fb, int max_iter) {
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if (fa * fb > 0.0) throw SolverError("root is not bracketed");
    double c = a, fc = fa, d = b - a, e = d;
    for (int it = 0; it < std::max(max_iter, 100); ++it) {
        if (std::abs(fc) < std::abs(fb)) {
            a = b; b = c; c = a;
            fa = fb; fb = fc; fc = fa;
        }
        const double tol1 = 2.0 * std::numeric_limits<double>::epsilon() * std::abs(b);
        const double xm = 0.5 * (c - b);
        if (std::abs(xm) <= tol1 || fb == 0.0) return b;
        if (std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb)) {
            double p, q, r;
            const double s = fb / fa;
            if (a == c) {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                q = fa / fc;
                r = fb / fc;
                p = s * (2.0 * xm * q * (q - r) - (b - a) * (r - 1.0));
                q = (q - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if (p > 0.0) q = -q;
            p = std::abs(p);
            if (2.0 * p < std::min(3.0 * xm * q - std::abs(tol1 * q), std::abs(e * q))) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += (std::abs(d) > tol1) ? d : (xm > 0.0 ? tol1 : -tol1);
        fb = f(b);
        if ((fb > 0.0) == (fc > 0.0)) {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
    }
    return b;
}

struct RootSolve {
    double t;
    FormEval ev;
};

// Root of the constraint residual over t. For expo < 0 the feasible set is
// the open interval (1/min dE, 1/max dE); otherwise t is unbounded and the
// bracket expands geometrically up to the beta cap.
RootSolve solve_form_root(const std::vector<double>& dE, double expo, double resid_power,
                          double spread, double abs_coeff, const SolverConfig& cfg) {
    auto f = [&](double t) { return eval_form(dE, t, expo, resid_power).resid; };

    double a, b, fa, fb;
    if (expo < 0.0) {
        const double dmin = *std::min_element(dE.begin(), dE.end());
        const double dmax = *std::max_element(dE.begin(), dE.end());
        const double tlo = 1.0 / dmin, thi = 1.0 / dmax;  // tlo < 0 < thi
        a = 0.5 * tlo;
        b = 0.5 * thi;
        fa = f(a);
        fb = f(b);
        int it = 0;
        while (fa * fb > 0.0) {
            // approach both asymptotes; the residual diverges to the two
            // extreme level gaps there, so a sign change must appear
            a = tlo + 0.5 * (a - tlo);
            b = thi - 0.5 * (thi - b);
            fa = f(a);
            fb = f(b);
            if (++it > 200)
                throw SolverError("failed to bracket the coldness root in the feasible interval");
        }
    } else {
        double s = 1.0 / std::max(spread, 1e-300);
        const double tcap = cfg.beta_bracket_limit * std::max(abs_coeff, 1e-300);
        a = -s;
        b = s;
        fa = f(a);
        fb = f(b);
        while (fa * fb > 0.0) {
            a *= 2.0;
            b *= 2.0;
            if (std::abs(a) > tcap)
                throw SolverError("coldness bracket expansion exhausted beta_bracket_limit");
            fa = f(a);
            fb = f(b);
        }
    }

    RootSolve out;
    out.t = brent_root(f, a, b, fa, fb, cfg.max_iter);
    out.ev = eval_form(dE, out.t, expo, resid_power);
    return out;
}

void check_feasible(const EnergySpectrum& eps, double U) {
    if (!std::isfinite(U) || !(U > eps.min_level()) || !(U < eps.max_level())) {
        std::ostringstream os;
        os << "internal energy U=" << U << " outside the feasible open interval ("
           << eps.min_level() << ", " << eps.max_level() << ")";
        throw InfeasibleError(os.str());
    }
}

std::vector<double> shifted_levels(const EnergySpectrum& eps, double U) {
    std::vector<double> dE(eps.levels());
    for (auto& x : dE) x -= U;
    return dE;
}

MaxEntSolution assemble_solution(const EnergySpectrum& eps, double U, double alpha,
                                 ConstraintKind kind, const FormEval& ev, double beta,
                                 bool shannon_form, const SolverConfig& cfg) {
    MaxEntSolution sol{eps,
                       U,
                       alpha,
                       kind,
                       Distribution(ev.p),
                       ev.logZ,
                       beta,
                       ev.mask,
                       shannon_form ? std::optional<double>{} : std::optional<double>{ev.margin},
                       std::abs(beta) * eps.spread() <= kDegenerateBetaTol};

    const double rcheck = renyi(sol.P_hat, alpha);
    if (std::abs(rcheck - sol.R_hat) > 1e-9)
        throw ConsistencyError("solved entropy does not match ln-normalizer self-consistency");
    const double mean = kind == ConstraintKind::Linear ? linear_mean(sol.P_hat, eps)
                                                       : escort_mean(sol.P_hat, eps, alpha);
    if (std::abs(mean - U) > cfg.root_tol * eps.spread())
        throw SolverError("constraint residual exceeds root_tol after solve");
    return sol;
}

MaxEntSolution solve_gibbs(const EnergySpectrum& eps, double U, double alpha,
                           ConstraintKind kind, const SolverConfig& cfg) {
    const auto dE = shifted_levels(eps, U);
    const auto rs = solve_form_root(dE, 0.0, 1.0, eps.spread(), 1.0, cfg);
    return assemble_solution(eps, U, alpha, kind, rs.ev, rs.t, true, cfg);
}

// ---------------------------------------------------------------------------
// Oracle: generic constrained ascent over the simplex.

struct OracleProblem {
    const std::vector<double>& e;
    double U;
    double alpha;
    bool escort_kind;
    bool shannon;

    double objective(const std::vector<double>& p) const {
        if (shannon) {
            double acc = 0.0;
            for (double x : p)
                if (x > 0.0) acc -= x * std::log(x);
            return acc;
        }
        double m = -kInf;
        for (double x : p)
            if (x > 0.0) m = std::max(m, alpha * std::log(x));
        double s = 0.0;
        for (double x : p)
            if (x > 0.0) s += std::exp(alpha * std::log(x) - m);
        return (m + std::log(s)) / (1.0 - alpha);
    }

    void objective_grad(const std::vector<double>& p, std::vector<double>& g) const {
        const std::size_t n = p.size();
        g.assign(n, 0.0);
        if (shannon) {
            for (std::size_t i = 0; i < n; ++i)
                g[i] = p[i] > 0.0 ? -(1.0 + std::log(p[i])) : 1e6;
            return;
        }
        double S = 0.0;
        for (double x : p)
            if (x > 0.0) S += std::pow(x, alpha);
        const double c = alpha / (1.0 - alpha);
        for (std::size_t i = 0; i < n; ++i)
            g[i] = p[i] > 0.0 ? c * std::pow(p[i], alpha - 1.0) / S
                              : (alpha > 1.0 ? 0.0 : 1e6 * c);
    }

    double constraint(const std::vector<double>& p) const {
        if (!escort_kind || shannon) {
            double acc = 0.0;
            for (std::size_t i = 0; i < p.size(); ++i) acc += p[i] * e[i];
            double sp = std::accumulate(p.begin(), p.end(), 0.0);
            return acc / sp - U;
        }
        double S = 0.0, acc = 0.0;
        for (std::size_t i = 0; i < p.size(); ++i) {
            if (p[i] > 0.0) {
                const double w = std::pow(p[i], alpha);
                S += w;
                acc += w * e[i];
            }
        }
        return acc / S - U;
    }

    void constraint_grad(const std::vector<double>& p, std::vector<double>& a) const {
        const std::size_t n = p.size();
        a.assign(n, 0.0);
        if (!escort_kind || shannon) {
            for (std::size_t i = 0; i < n; ++i) a[i] = e[i];
            return;
        }
        double S = 0.0, acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (p[i] > 0.0) {
                const double w = std::pow(p[i], alpha);
                S += w;
                acc += w * e[i];
            }
        }
        const double m = acc / S;
        for (std::size_t i = 0; i < n; ++i)
            a[i] = p[i] > 0.0 ? alpha * std::pow(p[i], alpha - 1.0) * (e[i] - m) / S
                              : (alpha > 1.0 ? 0.0 : 0.0);
    }
};

// Move along the mean-removed constraint gradient until |c| is tiny.
// Preserves the simplex sum and nonnegativity.
bool oracle_restore(const OracleProblem& prob, std::vector<double>& p, double scale) {
    std::vector<double> a;
    for (int it = 0; it < 80; ++it) {
        double sp = std::accumulate(p.begin(), p.end(), 0.0);
        for (auto& x : p) x /= sp;
        const double cv = prob.constraint(p);
        if (std::abs(cv) <= 1e-13 * scale) return true;
        prob.constraint_grad(p, a);
        double am = 0.0;
        int nf = 0;
        for (std::size_t i = 0; i < p.size(); ++i)
            if (p[i] > 0.0) {
                am += a[i];
                ++nf;
            }
        if (nf < 2) return false;
        am /= nf;
        double dcds = 0.0;
        for (std::size_t i = 0; i < p.size(); ++i)
            if (p[i] > 0.0) dcds += a[i] * (a[i] - am);
        if (std::abs(dcds) < 1e-300) return false;
        double s = -cv / dcds;
        // stay inside the simplex
        double cap = 1.0;
        for (std::size_t i = 0; i < p.size(); ++i) {
            if (p[i] > 0.0) {
                const double w = a[i] - am;
                if (s * w < 0.0) cap = std::min(cap, 0.9 * p[i] / (-s * w));
            }
        }
        s *= std::min(1.0, cap);
        for (std::size_t i = 0; i < p.size(); ++i)
            if (p[i] > 0.0) p[i] = std::max(0.0, p[i] + s * (a[i] - am));
    }
    return std::abs(prob.constraint(p)) <= 1e-10 * scale;
}

// Blend toward the extreme level that moves the mean the right way, then
// tighten with oracle_restore.
bool oracle_feasible_start(const OracleProblem& prob, std::vector<double>& p, double scale) {
    double sp = std::accumulate(p.begin(), p.end(), 0.0);
    for (auto& x : p) x /= sp;
    double cv = prob.constraint(p);
    if (std::abs(cv) > 1e-13 * scale) {
        const std::size_t k =
            static_cast<std::size_t>((cv < 0.0 ? std::max_element(prob.e.begin(), prob.e.end())
                                               : std::min_element(prob.e.begin(), prob.e.end())) -
                                     prob.e.begin());
        const std::vector<double> base = p;
        double lo = 0.0, hi = 1.0;
        auto blend = [&](double t) {
            for (std::size_t i = 0; i < p.size(); ++i)
                p[i] = (1.0 - t) * base[i] + (i == k ? t : 0.0);
            return prob.constraint(p);
        };
        double fhi = blend(hi);
        if (cv * fhi > 0.0) return false;
        for (int it = 0; it < 200 && hi - lo > 1e-16; ++it) {
            const double mid = 0.5 * (lo + hi);
            (blend(mid) * cv > 0.0 ? lo : hi) = mid;
        }
        blend(0.5 * (lo + hi));
    }
    return oracle_restore(prob, p, scale);
}

// Least-squares multipliers: minimize ||g - l*1 - m*a|| over the free set.
std::pair<double, double> oracle_multipliers(const std::vector<double>& p,
                                             const std::vector<double>& g,
                                             const std::vector<double>& a) {
    double n = 0, sa = 0, saa = 0, sg = 0, sag = 0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p[i] > 0.0) {
            n += 1;
            sa += a[i];
            saa += a[i] * a[i];
            sg += g[i];
            sag += a[i] * g[i];
        }
    }
    const double det = n * saa - sa * sa;
    if (std::abs(det) < 1e-14 * std::max(1.0, n * saa)) return {sg / std::max(n, 1.0), 0.0};
    return {(sg * saa - sa * sag) / det, (n * sag - sa * sg) / det};
}

// Projected ascent with an active set on the zero boundary.
void oracle_ascend(const OracleProblem& prob, std::vector<double>& p, double scale) {
    const std::size_t n = p.size();
    std::vector<double> g, a, d(n), ptry;
    double step = 0.1;
    const bool boundary_ok = prob.alpha > 1.0 && !prob.shannon;
    for (int it = 0; it < 4000; ++it) {
        prob.objective_grad(p, g);
        prob.constraint_grad(p, a);

        // orthonormal basis of the constraint normals on the free set
        double nf = 0, q1n = 0;
        for (std::size_t i = 0; i < n; ++i)
            if (p[i] > 0.0) nf += 1;
        if (nf < 3) break;  // nothing left to optimize
        q1n = std::sqrt(nf);
        double adotq1 = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            if (p[i] > 0.0) adotq1 += a[i] / q1n;
        std::vector<double> q2(n, 0.0);
        double q2n = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            if (p[i] > 0.0) {
                q2[i] = a[i] - adotq1 / q1n;
                q2n += q2[i] * q2[i];
            }
        q2n = std::sqrt(q2n);
        double gq1 = 0.0, gq2 = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            if (p[i] > 0.0) {
                gq1 += g[i] / q1n;
                if (q2n > 1e-300) gq2 += g[i] * q2[i] / q2n;
            }
        double dn = 0.0, gn = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            d[i] = 0.0;
            if (p[i] > 0.0) {
                d[i] = g[i] - gq1 / q1n;
                if (q2n > 1e-300) d[i] -= gq2 * q2[i] / q2n;
                dn = std::max(dn, std::abs(d[i]));
                gn = std::max(gn, std::abs(g[i]));
            }
        }

        if (dn <= 1e-11 * std::max(1.0, gn)) {
            if (!boundary_ok) break;
            // can a pinned state re-enter?
            auto [lam, mu] = oracle_multipliers(p, g, a);
            int rel = -1;
            double worst = 1e-9;
            for (std::size_t i = 0; i < n; ++i) {
                if (p[i] == 0.0) {
                    const double red = 0.0 - lam - mu * a[i];
                    if (red > worst) {
                        worst = red;
                        rel = static_cast<int>(i);
                    }
                }
            }
            if (rel < 0) break;
            p[rel] = 1e-10;
            oracle_restore(prob, p, scale);
            step = 1e-3;
            continue;
        }

        // largest step keeping nonnegativity
        double tmax = kInf;
        for (std::size_t i = 0; i < n; ++i)
            if (p[i] > 0.0 && d[i] < 0.0) tmax = std::min(tmax, -p[i] / d[i]);
        double t = std::min(step, boundary_ok ? tmax : 0.9 * tmax);
        const double f0 = prob.objective(p);
        bool accepted = false;
        for (int ls = 0; ls < 45 && t > 1e-18; ++ls) {
            ptry = p;
            for (std::size_t i = 0; i < n; ++i)
                if (p[i] > 0.0) ptry[i] = std::max(0.0, p[i] + t * d[i]);
            if (oracle_restore(prob, ptry, scale) && prob.objective(ptry) > f0) {
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if (!accepted) break;
        p = ptry;
        step = std::min(2.0 * t, 1.0);
        if (boundary_ok)
            for (auto& x : p)
                if (x > 0.0 && x < 1e-14) x = 0.0;
    }
}

// FD-Jacobian Newton on the first-order system over the free coordinates.
bool oracle_polish(const OracleProblem& prob, std::vector<double>& p, double scale) {
    const std::size_t n = p.size();
    for (int outer = 0; outer < 6; ++outer) {
        std::vector<std::size_t> free_ix;
        for (std::size_t i = 0; i < n; ++i)
            if (p[i] > 0.0) free_ix.push_back(i);
        const std::size_t m = free_ix.size();
        if (m < 2) return false;
        const std::size_t dim = m + 2;

        std::vector<double> g, a;
        prob.objective_grad(p, g);
        prob.constraint_grad(p, a);
        auto [lam, mu] = oracle_multipliers(p, g, a);

        std::vector<double> x(dim);
        for (std::size_t j = 0; j < m; ++j) x[j] = p[free_ix[j]];
        x[m] = lam;
        x[m + 1] = mu;

        auto residual = [&](const std::vector<double>& xv, std::vector<double>& r) {
            std::vector<double> pp(p);
            for (std::size_t j = 0; j < m; ++j) pp[free_ix[j]] = xv[j];
            std::vector<double> gg, aa;
            prob.objective_grad(pp, gg);
            prob.constraint_grad(pp, aa);
            r.assign(dim, 0.0);
            double sum = 0.0;
            for (std::size_t j = 0; j < m; ++j) {
                r[j] = gg[free_ix[j]] - xv[m] - xv[m + 1] * aa[free_ix[j]];
                sum += xv[j];
            }
            r[m] = sum - 1.0;
            r[m + 1] = prob.constraint(pp);
        };

        std::vector<double> r0;
        residual(x, r0);
        auto norm_inf = [](const std::vector<double>& v) {
            double nn = 0.0;
            for (double t : v) nn = std::max(nn, std::abs(t));
            return nn;
        };

        bool converged = false;
        for (int nit = 0; nit < 40; ++nit) {
            if (norm_inf(r0) <= 1e-12 * std::max(1.0, scale)) {
                converged = true;
                break;
            }
            // FD Jacobian, forward differences
            std::vector<double> J(dim * dim), rp;
            bool bad = false;
            for (std::size_t jcol = 0; jcol < dim; ++jcol) {
                double h = 1e-8 * std::max(1.0, std::abs(x[jcol]));
                if (jcol < m) h = std::min(h, 0.25 * x[jcol]);
                if (!(h > 0.0)) {
                    bad = true;
                    break;
                }
                auto xp = x;
                xp[jcol] += h;
                residual(xp, rp);
                for (std::size_t irow = 0; irow < dim; ++irow)
                    J[irow * dim + jcol] = (rp[irow] - r0[irow]) / h;
            }
            if (bad) break;
            // solve J * dx = -r0 by partial-pivot elimination
            std::vector<double> rhs(r0);
            for (auto& t : rhs) t = -t;
            std::vector<std::size_t> piv(dim);
            std::iota(piv.begin(), piv.end(), std::size_t{0});
            bool singular = false;
            for (std::size_t k = 0; k < dim; ++k) {
                std::size_t best = k;
                for (std::size_t irow = k + 1; irow < dim; ++irow)
                    if (std::abs(J[piv[irow] * dim + k]) > std::abs(J[piv[best] * dim + k]))
                        best = irow;
                std::swap(piv[k], piv[best]);
                const double pivot = J[piv[k] * dim + k];
                if (std::abs(pivot) < 1e-300) {
                    singular = true;
                    break;
                }
                for (std::size_t irow = k + 1; irow < dim; ++irow) {
                    const double fct = J[piv[irow] * dim + k] / pivot;
                    if (fct == 0.0) continue;
                    for (std::size_t jc = k; jc < dim; ++jc)
                        J[piv[irow] * dim + jc] -= fct * J[piv[k] * dim + jc];
                    rhs[piv[irow]] -= fct * rhs[piv[k]];
                }
            }
            if (singular) break;
            std::vector<double> dx(dim);
            for (std::size_t k = dim; k-- > 0;) {
                double acc = rhs[piv[k]];
                for (std::size_t jc = k + 1; jc < dim; ++jc) acc -= J[piv[k] * dim + jc] * dx[jc];
                dx[k] = acc / J[piv[k] * dim + k];
            }
            // damped update keeping probabilities positive
            double damp = 1.0;
            for (std::size_t j = 0; j < m; ++j)
                if (x[j] + dx[j] <= 0.0) damp = std::min(damp, -0.9 * x[j] / dx[j]);
            std::vector<double> r1;
            bool improved = false;
            for (int bt = 0; bt < 25; ++bt) {
                auto xt = x;
                for (std::size_t j = 0; j < dim; ++j) xt[j] += damp * dx[j];
                residual(xt, r1);
                if (norm_inf(r1) < norm_inf(r0)) {
                    x = xt;
                    r0 = r1;
                    improved = true;
                    break;
                }
                damp *= 0.5;
            }
            if (!improved) break;
        }

        for (std::size_t j = 0; j < m; ++j) p[free_ix[j]] = x[j];
        oracle_restore(prob, p, scale);

        // pin coordinates driven to zero, release pinned ones that want back in
        bool changed = false;
        for (std::size_t j = 0; j < m; ++j) {
            if (p[free_ix[j]] < 1e-13) {
                p[free_ix[j]] = 0.0;
                changed = true;
            }
        }
        if (!changed && prob.alpha > 1.0 && !prob.shannon) {
            prob.objective_grad(p, g);
            prob.constraint_grad(p, a);
            auto [l2, m2] = oracle_multipliers(p, g, a);
            for (std::size_t i = 0; i < n; ++i) {
                if (p[i] == 0.0 && (0.0 - l2 - m2 * a[i]) > 1e-9) {
                    p[i] = 1e-9;
                    changed = true;
                    break;
                }
            }
            if (changed) oracle_restore(prob, p, scale);
        }
        if (!changed) return converged;
    }
    return true;
}

} // namespace

// ---------------------------------------------------------------------------

std::string to_string(ConstraintKind kind) {
    return kind == ConstraintKind::Linear ? "linear" : "escort";
}

ConstraintKind constraint_from_string(const std::string& name) {
    if (name == "linear") return ConstraintKind::Linear;
    if (name == "escort") return ConstraintKind::Escort;
    throw DomainError("unknown constraint kind '" + name + "'");
}

void SolverConfig::validate() const {
    if (!(beta_bracket_limit > 0) || !(root_tol > 0) || max_iter <= 0 || !(fd_step_rel > 0) ||
        !(limit_eps > 0))
        throw DomainError("solver config fields must all be positive");
}

MaxEntSolution solve_linear_renyi(const EnergySpectrum& eps, double U, double alpha,
                                  const SolverConfig& cfg) {
    cfg.validate();
    if (!(alpha > 0.0) || !std::isfinite(alpha)) throw DomainError("alpha must be positive");
    check_feasible(eps, U);
    if (std::abs(alpha - 1.0) < cfg.limit_eps)
        return solve_gibbs(eps, U, alpha, ConstraintKind::Linear, cfg);

    const double coeff = (alpha - 1.0) / alpha;
    const double expo = 1.0 / (alpha - 1.0);
    const auto dE = shifted_levels(eps, U);
    const auto rs = solve_form_root(dE, expo, 1.0, eps.spread(), std::abs(coeff), cfg);
    return assemble_solution(eps, U, alpha, ConstraintKind::Linear, rs.ev, rs.t / coeff, false,
                             cfg);
}

MaxEntSolution solve_escort_renyi_direct(const EnergySpectrum& eps, double U, double alpha,
                                         const SolverConfig& cfg) {
    cfg.validate();
    if (!(alpha > 0.0) || !std::isfinite(alpha)) throw DomainError("alpha must be positive");
    check_feasible(eps, U);
    if (std::abs(alpha - 1.0) < cfg.limit_eps)
        return solve_gibbs(eps, U, alpha, ConstraintKind::Escort, cfg);

    const double coeff = 1.0 - alpha;
    const double expo = 1.0 / (1.0 - alpha);
    const auto dE = shifted_levels(eps, U);
    const auto rs = solve_form_root(dE, expo, alpha, eps.spread(), std::abs(coeff), cfg);
    return assemble_solution(eps, U, alpha, ConstraintKind::Escort, rs.ev, rs.t / coeff, false,
                             cfg);
}

MaxEntSolution solve_escort_renyi(const EnergySpectrum& eps, double U, double alpha,
                                  const SolverConfig& cfg) {
    cfg.validate();
    if (!(alpha > 0.0) || !std::isfinite(alpha)) throw DomainError("alpha must be positive");
    check_feasible(eps, U);
    if (std::abs(alpha - 1.0) < cfg.limit_eps)
        return solve_gibbs(eps, U, alpha, ConstraintKind::Escort, cfg);

    // duality route: linear problem at order 1/alpha, escorted back
    const MaxEntSolution lin = solve_linear_renyi(eps, U, 1.0 / alpha, cfg);
    Distribution p = escort(lin.P_hat, 1.0 / alpha);

    // cross-check against the closed self-consistent form at the same coldness
    const auto dE = shifted_levels(eps, U);
    const double expo = 1.0 / (1.0 - alpha);
    std::vector<double> direct(dE.size(), 0.0);
    double margin = kInf, msum = 0.0;
    std::vector<bool> mask(dE.size(), true);
    {
        std::vector<double> logw(dE.size(), -kInf);
        double mm = -kInf;
        for (std::size_t i = 0; i < dE.size(); ++i) {
            const double br = 1.0 - (1.0 - alpha) * lin.beta_renyi * dE[i];
            margin = std::min(margin, std::abs(br));
            if (br > 0.0) {
                logw[i] = expo * std::log(br);
                mm = std::max(mm, logw[i]);
            } else {
                mask[i] = false;
            }
        }
        for (std::size_t i = 0; i < dE.size(); ++i)
            if (mask[i]) {
                direct[i] = std::exp(logw[i] - mm);
                msum += direct[i];
            }
        for (auto& x : direct) x /= msum;
    }
    for (std::size_t i = 0; i < direct.size(); ++i)
        if (std::abs(direct[i] - p[i]) > 1e-8)
            throw ConsistencyError(
                "escort duality route disagrees with the direct closed form");

    MaxEntSolution sol{eps,   U,
                       alpha, ConstraintKind::Escort,
                       p,     lin.R_hat,
                       lin.beta_renyi, mask,
                       std::optional<double>{margin}, lin.degenerate};
    const double mean = escort_mean(sol.P_hat, eps, alpha);
    if (std::abs(mean - U) > cfg.root_tol * eps.spread())
        throw ConsistencyError("escort constraint residual exceeds tolerance after duality route");
    if (std::abs(renyi(sol.P_hat, alpha) - sol.R_hat) > 1e-9)
        throw ConsistencyError("escort entropy does not match the dual linear solve");
    return sol;
}

MaxEntSolution solve_spa(const EnergySpectrum& eps, double U, const EntropySpec& spec,
                         ConstraintKind kind, const SolverConfig& cfg) {
    MaxEntSolution sol = kind == ConstraintKind::Linear
                             ? solve_linear_renyi(eps, U, spec.alpha, cfg)
                             : solve_escort_renyi(eps, U, spec.alpha, cfg);
    if (!spec.map->domain().contains(sol.R_hat))
        throw DomainError("equilibrium entropy lies outside the deformation-map domain");
    return sol;
}

Distribution solve_oracle(const EnergySpectrum& eps, double U, double alpha,
                          ConstraintKind kind, const SolverConfig& cfg) {
    cfg.validate();
    if (!(alpha > 0.0) || !std::isfinite(alpha)) throw DomainError("alpha must be positive");
    check_feasible(eps, U);

    OracleProblem prob{eps.levels(), U, alpha, kind == ConstraintKind::Escort,
                       std::abs(alpha - 1.0) < cfg.limit_eps};
    const double scale = eps.spread();
    const std::size_t n = eps.size();

    std::mt19937_64 rng(0x5eedcafeULL);
    auto unit = [&rng]() { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };

    std::vector<double> best;
    double best_f = -kInf;
    const int starts = 8;
    for (int s = 0; s < starts; ++s) {
        std::vector<double> p(n, 1.0 / static_cast<double>(n));
        if (s > 0)
            for (auto& x : p) x = -std::log(std::max(unit(), 1e-16));
        if (!oracle_feasible_start(prob, p, scale)) continue;
        oracle_ascend(prob, p, scale);
        oracle_polish(prob, p, scale);
        if (std::abs(prob.constraint(p)) > 1e-9 * scale) continue;
        const double fv = prob.objective(p);
        if (fv > best_f) {
            best_f = fv;
            best = p;
        }
    }
    if (best.empty()) throw SolverError("oracle failed to locate a feasible maximizer");
    return Distribution::normalized(std::move(best));
}

} // namespace spathermo
