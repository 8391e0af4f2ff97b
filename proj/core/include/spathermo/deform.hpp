#pragma once

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "spathermo/errors.hpp"

namespace spathermo {

/// Open real interval, endpoints may be infinite.
struct Interval {
    double lo;
    double hi;

    static Interval all();
    static Interval above(double lo);
    static Interval below(double hi);

    /// Strict containment, optionally with a safety margin pulled inward.
    bool contains(double x, double margin = 0.0) const;
};

/// An increasing continuous map h with h(0) = 0, together with its inverse
/// and first two derivatives. One instance defines one deformed entropy
/// family H = h(R). Implementations are immutable and safe to share across
/// threads.
class DeformationMap {
public:
    virtual ~DeformationMap() = default;

    /// h(x); throws DomainError outside domain().
    virtual double eval(double x) const = 0;
    /// h^{-1}(y); throws DomainError outside range().
    virtual double inverse(double y) const = 0;
    virtual double d1(double x) const = 0;
    virtual double d2(double x) const = 0;

    /// Maximal open interval on which eval is defined.
    virtual Interval domain() const = 0;
    /// Image of domain() under eval (the domain of inverse()).
    virtual Interval range() const = 0;

    virtual std::string family() const = 0;
    virtual std::vector<std::pair<std::string, double>> params() const = 0;
};

using MapPtr = std::shared_ptr<const DeformationMap>;

/// h(x) = x. The undeformed family.
class IdentityMap final : public DeformationMap {
public:
    double eval(double x) const override;
    double inverse(double y) const override;
    double d1(double x) const override { return (void)x, 1.0; }
    double d2(double x) const override { return (void)x, 0.0; }
    Interval domain() const override { return Interval::all(); }
    Interval range() const override { return Interval::all(); }
    std::string family() const override { return "identity"; }
    std::vector<std::pair<std::string, double>> params() const override { return {}; }
};

/// h_q(x) = (e^{(1-q)x} - 1)/(1-q), identity at q = 1.
/// Defined on all of R; range bounded on one side by 1/(q-1) for q != 1.
class HqMap final : public DeformationMap {
public:
    explicit HqMap(double q);

    double eval(double x) const override;
    double inverse(double y) const override;
    double d1(double x) const override;
    double d2(double x) const override;
    Interval domain() const override { return Interval::all(); }
    Interval range() const override;
    std::string family() const override { return "hq"; }
    std::vector<std::pair<std::string, double>> params() const override;

    double q() const { return q_; }

private:
    double q_;
    bool is_identity_;
};

/// s_{alpha,r}(x) = ((1 + (1-r)x)^{(1-alpha)/(1-r)} - 1)/(1-alpha),
/// the composition h_alpha(h_r^{-1}(x)). Identity when r = alpha.
/// Domain restricted to (1-r)x + 1 > 0, range to (1-alpha)y + 1 > 0.
class SupraMap final : public DeformationMap {
public:
    SupraMap(double alpha, double r);

    double eval(double x) const override;
    double inverse(double y) const override;
    double d1(double x) const override;
    double d2(double x) const override;
    Interval domain() const override;
    Interval range() const override;
    std::string family() const override { return "supra"; }
    std::vector<std::pair<std::string, double>> params() const override;

    double alpha() const { return alpha_; }
    double r() const { return r_; }

private:
    double alpha_, r_;
};

/// User-supplied map. Derivatives default to central differences with step
/// 1e-6 * max(1, |x|); the inverse defaults to bracketed root finding on
/// eval, relying on monotonicity.
class CustomMap final : public DeformationMap {
public:
    struct Options {
        std::function<double(double)> inverse;  // optional analytic inverse
        std::function<double(double)> d1;
        std::function<double(double)> d2;
        Interval domain = Interval::all();
        Interval range = Interval::all();
    };

    explicit CustomMap(std::function<double(double)> eval);
    CustomMap(std::function<double(double)> eval, Options opts);

    double eval(double x) const override;
    double inverse(double y) const override;
    double d1(double x) const override;
    double d2(double x) const override;
    Interval domain() const override { return opts_.domain; }
    Interval range() const override { return opts_.range; }
    std::string family() const override { return "custom"; }
    std::vector<std::pair<std::string, double>> params() const override { return {}; }

private:
    std::function<double(double)> eval_;
    Options opts_;
};

MapPtr make_identity();
MapPtr make_hq(double q);
MapPtr make_supra(double alpha, double r);

/// Construct a map from a config record {family, params}. Families:
/// "identity" (no params), "hq" (q), "supra" (alpha, r). Custom maps are
/// built in code via CustomMap, not from config.
MapPtr make_map(const std::string& family, const std::map<std::string, double>& params);

/// Log_h(u) = h(ln u); u must be positive with ln u inside the map domain.
double generalized_log(const DeformationMap& map, double u);

/// Exp_h(v) = e^{h^{-1}(v)}, the inverse of generalized_log.
double generalized_exp(const DeformationMap& map, double v);

/// a (+) b = h(h^{-1}(a) + h^{-1}(b)); 0 is the neutral element.
double pseudo_add(const DeformationMap& map, double a, double b);

} // namespace spathermo
