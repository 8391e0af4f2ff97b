#include "spathermo/deform.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace spathermo {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Parameter-limit switch: below this distance from 1 the analytic limit
// formula is used instead of the generic one.
constexpr double kParamLimitEps = 1e-8;

[[noreturn]] void domain_fail(const char* what, double x) {
    std::ostringstream os;
    os << what << " (argument " << x << ")";
    throw DomainError(os.str());
}

double clip_fd_step(double x, double step, const Interval& dom) {
    if (std::isfinite(dom.lo)) step = std::min(step, 0.45 * (x - dom.lo));
    if (std::isfinite(dom.hi)) step = std::min(step, 0.45 * (dom.hi - x));
    return step;
}

} // namespace

Interval Interval::all() { return {-kInf, kInf}; }
Interval Interval::above(double lo) { return {lo, kInf}; }
Interval Interval::below(double hi) { return {-kInf, hi}; }

bool Interval::contains(double x, double margin) const {
    return std::isfinite(x) && x > lo + margin && x < hi - margin;
}

// ---------------------------------------------------------------------------
// IdentityMap

double IdentityMap::eval(double x) const {
    if (!std::isfinite(x)) domain_fail("identity map: non-finite argument", x);
    return x;
}

double IdentityMap::inverse(double y) const {
    if (!std::isfinite(y)) domain_fail("identity map: non-finite argument", y);
    return y;
}

// ---------------------------------------------------------------------------
// HqMap

HqMap::HqMap(double q) : q_(q), is_identity_(std::abs(q - 1.0) < kParamLimitEps) {
    if (!(q > 0.0) || !std::isfinite(q))
        throw DomainError("hq map requires q > 0");
}

double HqMap::eval(double x) const {
    if (!std::isfinite(x)) domain_fail("hq map: non-finite argument", x);
    if (is_identity_) return x;
    return std::expm1((1.0 - q_) * x) / (1.0 - q_);
}

double HqMap::inverse(double y) const {
    if (is_identity_) {
        if (!std::isfinite(y)) domain_fail("hq map: non-finite argument", y);
        return y;
    }
    const double t = (1.0 - q_) * y;
    if (!(t > -1.0)) domain_fail("hq map: value outside range, (1-q)y + 1 must be positive", y);
    return std::log1p(t) / (1.0 - q_);
}

double HqMap::d1(double x) const {
    if (is_identity_) return 1.0;
    return std::exp((1.0 - q_) * x);
}

double HqMap::d2(double x) const {
    if (is_identity_) return 0.0;
    return (1.0 - q_) * std::exp((1.0 - q_) * x);
}

Interval HqMap::range() const {
    if (is_identity_) return Interval::all();
    const double bound = 1.0 / (q_ - 1.0);
    return q_ > 1.0 ? Interval::below(bound) : Interval::above(bound);
}

std::vector<std::pair<std::string, double>> HqMap::params() const {
    return {{"q", q_}};
}

// ---------------------------------------------------------------------------
// SupraMap
//
// Three-way branch: r near 1 degenerates to the hq form in alpha, alpha
// near 1 to the inverse hq form in r, otherwise the generic power form.
// r == alpha (away from 1) needs no branch: the exponent is exactly 1.

SupraMap::SupraMap(double alpha, double r) : alpha_(alpha), r_(r) {
    if (!(alpha > 0.0) || !std::isfinite(alpha))
        throw DomainError("supra map requires alpha > 0");
    if (!(r > 0.0) || !std::isfinite(r))
        throw DomainError("supra map requires r > 0");
}

double SupraMap::eval(double x) const {
    const bool a1 = std::abs(alpha_ - 1.0) < kParamLimitEps;
    const bool r1 = std::abs(r_ - 1.0) < kParamLimitEps;
    if (r1 && a1) {
        if (!std::isfinite(x)) domain_fail("supra map: non-finite argument", x);
        return x;
    }
    if (r1) return std::expm1((1.0 - alpha_) * x) / (1.0 - alpha_);
    const double t = (1.0 - r_) * x;
    if (!(t > -1.0))
        domain_fail("supra map: argument outside domain, (1-r)x + 1 must be positive", x);
    if (a1) return std::log1p(t) / (1.0 - r_);
    const double m = (1.0 - alpha_) / (1.0 - r_);
    return std::expm1(m * std::log1p(t)) / (1.0 - alpha_);
}

double SupraMap::inverse(double y) const {
    const bool a1 = std::abs(alpha_ - 1.0) < kParamLimitEps;
    const bool r1 = std::abs(r_ - 1.0) < kParamLimitEps;
    if (r1 && a1) {
        if (!std::isfinite(y)) domain_fail("supra map: non-finite argument", y);
        return y;
    }
    if (r1) {
        const double u = (1.0 - alpha_) * y;
        if (!(u > -1.0))
            domain_fail("supra map: value outside range, (1-alpha)y + 1 must be positive", y);
        return std::log1p(u) / (1.0 - alpha_);
    }
    if (a1) return std::expm1((1.0 - r_) * y) / (1.0 - r_);
    const double u = (1.0 - alpha_) * y;
    if (!(u > -1.0))
        domain_fail("supra map: value outside range, (1-alpha)y + 1 must be positive", y);
    const double minv = (1.0 - r_) / (1.0 - alpha_);
    return std::expm1(minv * std::log1p(u)) / (1.0 - r_);
}

double SupraMap::d1(double x) const {
    const bool a1 = std::abs(alpha_ - 1.0) < kParamLimitEps;
    const bool r1 = std::abs(r_ - 1.0) < kParamLimitEps;
    if (r1) return a1 ? 1.0 : std::exp((1.0 - alpha_) * x);
    const double t = (1.0 - r_) * x;
    if (!(t > -1.0))
        domain_fail("supra map: argument outside domain, (1-r)x + 1 must be positive", x);
    const double m = a1 ? 0.0 : (1.0 - alpha_) / (1.0 - r_);
    return std::exp((m - 1.0) * std::log1p(t));
}

double SupraMap::d2(double x) const {
    const bool a1 = std::abs(alpha_ - 1.0) < kParamLimitEps;
    const bool r1 = std::abs(r_ - 1.0) < kParamLimitEps;
    if (r1) return a1 ? 0.0 : (1.0 - alpha_) * std::exp((1.0 - alpha_) * x);
    const double t = (1.0 - r_) * x;
    if (!(t > -1.0))
        domain_fail("supra map: argument outside domain, (1-r)x + 1 must be positive", x);
    const double m = a1 ? 0.0 : (1.0 - alpha_) / (1.0 - r_);
    return (r_ - alpha_) * std::exp((m - 2.0) * std::log1p(t));
}

Interval SupraMap::domain() const {
    if (std::abs(r_ - 1.0) < kParamLimitEps) return Interval::all();
    const double bound = 1.0 / (r_ - 1.0);
    return r_ > 1.0 ? Interval::below(bound) : Interval::above(bound);
}

Interval SupraMap::range() const {
    if (std::abs(alpha_ - 1.0) < kParamLimitEps) return Interval::all();
    const double bound = 1.0 / (alpha_ - 1.0);
    return alpha_ > 1.0 ? Interval::below(bound) : Interval::above(bound);
}

std::vector<std::pair<std::string, double>> SupraMap::params() const {
    return {{"alpha", alpha_}, {"r", r_}};
}

// ---------------------------------------------------------------------------
// CustomMap

CustomMap::CustomMap(std::function<double(double)> eval)
    : CustomMap(std::move(eval), Options{}) {}

CustomMap::CustomMap(std::function<double(double)> eval, Options opts)
    : eval_(std::move(eval)), opts_(std::move(opts)) {
    if (!eval_) throw DomainError("custom map requires an eval function");
    if (!opts_.domain.contains(0.0))
        throw DomainError("custom map domain must contain 0");
    if (std::abs(eval_(0.0)) > 1e-12)
        throw DomainError("custom map must satisfy h(0) = 0");
}

double CustomMap::eval(double x) const {
    if (!opts_.domain.contains(x)) domain_fail("custom map: argument outside domain", x);
    return eval_(x);
}

double CustomMap::inverse(double y) const {
    if (opts_.inverse) return opts_.inverse(y);
    if (!opts_.range.contains(y)) domain_fail("custom map: value outside range", y);
    // Bracket around 0 using monotonicity, then bisect.
    double lo = 0.0, hi = 0.0;
    double step = 1.0;
    const Interval dom = opts_.domain;
    if (y >= 0.0) {
        while (eval_(hi) < y) {
            lo = hi;
            double next = hi + step;
            if (std::isfinite(dom.hi) && next >= dom.hi) next = hi + 0.5 * (dom.hi - hi);
            if (!(next > hi)) throw SolverError("custom map inverse: bracket collapsed");
            hi = next;
            step *= 2.0;
            if (step > 1e300) throw SolverError("custom map inverse: no bracket found");
        }
    } else {
        while (eval_(lo) > y) {
            hi = lo;
            double next = lo - step;
            if (std::isfinite(dom.lo) && next <= dom.lo) next = lo - 0.5 * (lo - dom.lo);
            if (!(next < lo)) throw SolverError("custom map inverse: bracket collapsed");
            lo = next;
            step *= 2.0;
            if (step > 1e300) throw SolverError("custom map inverse: no bracket found");
        }
    }
    for (int i = 0; i < 200 && hi - lo > 1e-15 * (1.0 + std::abs(lo) + std::abs(hi)); ++i) {
        const double mid = 0.5 * (lo + hi);
        (eval_(mid) < y ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

double CustomMap::d1(double x) const {
    if (opts_.d1) return opts_.d1(x);
    const double s = clip_fd_step(x, 1e-6 * std::max(1.0, std::abs(x)), opts_.domain);
    return (eval(x + s) - eval(x - s)) / (2.0 * s);
}

double CustomMap::d2(double x) const {
    if (opts_.d2) return opts_.d2(x);
    const double s = clip_fd_step(x, 1e-6 * std::max(1.0, std::abs(x)), opts_.domain);
    return (eval(x + s) - 2.0 * eval(x) + eval(x - s)) / (s * s);
}

// ---------------------------------------------------------------------------
// Factories

MapPtr make_identity() { return std::make_shared<IdentityMap>(); }
MapPtr make_hq(double q) { return std::make_shared<HqMap>(q); }
MapPtr make_supra(double alpha, double r) { return std::make_shared<SupraMap>(alpha, r); }

MapPtr make_map(const std::string& family, const std::map<std::string, double>& params) {
    auto get = [&](const char* name) {
        auto it = params.find(name);
        if (it == params.end())
            throw DomainError("map family '" + family + "' requires parameter '" + name + "'");
        return it->second;
    };
    if (family == "identity") return make_identity();
    if (family == "hq") return make_hq(get("q"));
    if (family == "supra") return make_supra(get("alpha"), get("r"));
    if (family == "custom")
        throw DomainError("custom maps are constructed in code, not from config");
    throw DomainError("unknown map family '" + family + "'");
}

// ---------------------------------------------------------------------------
// Deformed log / exp / addition

double generalized_log(const DeformationMap& map, double u) {
    if (!(u > 0.0) || !std::isfinite(u))
        throw DomainError("generalized log requires a positive finite argument");
    return map.eval(std::log(u));
}

double generalized_exp(const DeformationMap& map, double v) {
    return std::exp(map.inverse(v));
}

double pseudo_add(const DeformationMap& map, double a, double b) {
    return map.eval(map.inverse(a) + map.inverse(b));
}

} // namespace spathermo
