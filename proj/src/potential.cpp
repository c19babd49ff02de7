#include "kgm/potential.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace kgm {

namespace {

void require_finite(double value, const char* what)
{
    if (!std::isfinite(value)) {
        throw std::invalid_argument(std::string(what) + " must be finite");
    }
}

void require_finite_field(double phi)
{
    if (!std::isfinite(phi)) {
        throw std::domain_error("field value must be finite");
    }
}

double sign(double x) { return (x > 0.0) - (x < 0.0); }

}  // namespace

std::string_view to_string(PotentialFamily family)
{
    switch (family) {
    case PotentialFamily::PowerLaw: return "PowerLaw";
    case PotentialFamily::Quartic: return "Quartic";
    case PotentialFamily::Logarithmic: return "Logarithmic";
    case PotentialFamily::Polynomial: return "Polynomial";
    }
    return "?";
}

PotentialFamily potential_family_from_string(std::string_view name)
{
    for (auto f : {PotentialFamily::PowerLaw, PotentialFamily::Quartic, PotentialFamily::Logarithmic,
                   PotentialFamily::Polynomial}) {
        if (to_string(f) == name) return f;
    }
    throw std::invalid_argument("unknown potential family '" + std::string(name) + "'");
}

Potential Potential::power_law(double gamma, double p)
{
    require_finite(gamma, "gamma");
    require_finite(p, "p");
    if (!(p > 1.0)) throw std::invalid_argument("power-law exponent must satisfy p > 1");
    Potential v;
    v.family_ = PotentialFamily::PowerLaw;
    v.gamma_ = gamma;
    v.p_ = p;
    return v;
}

Potential Potential::quartic(double mu2, double g)
{
    require_finite(mu2, "mu2");
    require_finite(g, "g");
    if (mu2 < 0.0) throw std::invalid_argument("mu2 must be >= 0");
    if (g < 0.0) throw std::invalid_argument("quartic coupling g must be >= 0");
    Potential v;
    v.family_ = PotentialFamily::Quartic;
    v.mu2_ = mu2;
    v.g_ = g;
    return v;
}

Potential Potential::logarithmic(double mu2, double g)
{
    require_finite(mu2, "mu2");
    require_finite(g, "g");
    if (mu2 < 0.0) throw std::invalid_argument("mu2 must be >= 0");
    Potential v;
    v.family_ = PotentialFamily::Logarithmic;
    v.mu2_ = mu2;
    v.g_ = g;
    return v;
}

Potential Potential::polynomial(std::vector<Term> terms)
{
    if (terms.empty()) throw std::invalid_argument("polynomial potential needs at least one term");
    for (const auto& t : terms) {
        require_finite(t.coefficient, "polynomial coefficient");
        if (t.power < 2 || t.power % 2 != 0) {
            throw std::invalid_argument("polynomial powers must be even and >= 2, got "
                                        + std::to_string(t.power));
        }
    }
    std::sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) { return a.power < b.power; });
    Potential v;
    v.family_ = PotentialFamily::Polynomial;
    v.terms_ = std::move(terms);
    return v;
}

double Potential::quadratic_coefficient() const
{
    constexpr double inf = std::numeric_limits<double>::infinity();
    switch (family_) {
    case PotentialFamily::PowerLaw:
        if (gamma_ == 0.0 || p_ > 2.0) return 0.0;
        if (p_ == 2.0) return gamma_;
        return gamma_ > 0.0 ? inf : -inf;
    case PotentialFamily::Quartic: return mu2_;
    case PotentialFamily::Logarithmic:
        if (g_ == 0.0) return mu2_;
        return g_ > 0.0 ? inf : -inf;
    case PotentialFamily::Polynomial: {
        double c2 = 0.0;
        for (const auto& t : terms_) {
            if (t.power == 2) c2 += t.coefficient;
        }
        return c2;
    }
    }
    return 0.0;
}

ModelConfig ModelConfig::make(double omega, double m, double e, Potential potential)
{
    require_finite(omega, "omega");
    require_finite(m, "m");
    require_finite(e, "e");
    if (m < 0.0) throw std::invalid_argument("mass m must be >= 0");
    if (e < 0.0) throw std::invalid_argument("gauge coupling e must be >= 0");
    return ModelConfig{std::abs(omega), m, e, std::move(potential)};
}

double eval_V(const Potential& v, double phi)
{
    require_finite_field(phi);
    const double phi2 = phi * phi;
    switch (v.family()) {
    case PotentialFamily::PowerLaw:
        return v.gamma() * std::pow(std::abs(phi), v.p());
    case PotentialFamily::Quartic:
        return v.mu2() * phi2 - v.g() * v.g() * phi2 * phi2;
    case PotentialFamily::Logarithmic:
        if (phi == 0.0) return 0.0;
        return v.mu2() * phi2 - v.g() * phi2 * std::log(phi2);
    case PotentialFamily::Polynomial: {
        double sum = 0.0;
        for (const auto& t : v.terms()) sum += t.coefficient * std::pow(phi2, t.power / 2);
        return sum;
    }
    }
    return 0.0;
}

double eval_dV(const Potential& v, double phi)
{
    require_finite_field(phi);
    if (phi == 0.0) return 0.0;
    const double phi2 = phi * phi;
    switch (v.family()) {
    case PotentialFamily::PowerLaw:
        return v.gamma() * v.p() * std::pow(std::abs(phi), v.p() - 1.0) * sign(phi);
    case PotentialFamily::Quartic:
        return 2.0 * v.mu2() * phi - 4.0 * v.g() * v.g() * phi2 * phi;
    case PotentialFamily::Logarithmic:
        return 2.0 * phi * (v.mu2() - v.g() - v.g() * std::log(phi2));
    case PotentialFamily::Polynomial: {
        double sum = 0.0;
        for (const auto& t : v.terms()) {
            sum += t.coefficient * t.power * std::pow(phi2, t.power / 2 - 1) * phi;
        }
        return sum;
    }
    }
    return 0.0;
}

double eval_d2V(const Potential& v, double phi)
{
    require_finite_field(phi);
    const double phi2 = phi * phi;
    switch (v.family()) {
    case PotentialFamily::PowerLaw:
        if (phi == 0.0) {
            if (v.p() == 2.0) return 2.0 * v.gamma();
            if (v.p() > 2.0) return 0.0;
            return std::numeric_limits<double>::quiet_NaN();
        }
        return v.gamma() * v.p() * (v.p() - 1.0) * std::pow(std::abs(phi), v.p() - 2.0);
    case PotentialFamily::Quartic:
        return 2.0 * v.mu2() - 12.0 * v.g() * v.g() * phi2;
    case PotentialFamily::Logarithmic:
        if (phi == 0.0) return std::numeric_limits<double>::quiet_NaN();
        return 2.0 * v.mu2() - 6.0 * v.g() - 2.0 * v.g() * std::log(phi2);
    case PotentialFamily::Polynomial: {
        double sum = 0.0;
        for (const auto& t : v.terms()) {
            sum += t.coefficient * t.power * (t.power - 1) * std::pow(phi2, t.power / 2 - 1);
        }
        return sum;
    }
    }
    return 0.0;
}

std::string_view to_string(ConditionId id)
{
    switch (id) {
    case ConditionId::KGM1: return "KGM1";
    case ConditionId::KGM2: return "KGM2";
    case ConditionId::KGM3: return "KGM3";
    case ConditionId::AMP: return "AMP";
    case ConditionId::QB2: return "QB2";
    }
    return "?";
}

ConditionId condition_from_string(std::string_view name)
{
    for (auto c : {ConditionId::KGM1, ConditionId::KGM2, ConditionId::KGM3, ConditionId::AMP, ConditionId::QB2}) {
        if (to_string(c) == name) return c;
    }
    throw std::invalid_argument("unknown condition id '" + std::string(name) + "'");
}

double condition_expr(const ModelConfig& model, ConditionId condition, double phi)
{
    if (!std::isfinite(phi)) throw std::domain_error("field value must be finite");
    const double v = eval_V(model.potential, phi);
    const double dv_phi = eval_dV(model.potential, phi) * phi;
    const double phi2 = phi * phi;
    const double w2 = model.omega2();
    const double m2 = model.m2();
    switch (condition) {
    case ConditionId::KGM1: return dv_phi - 2.0 * v;
    case ConditionId::KGM2: return 4.0 * (m2 - w2) * phi2 - (dv_phi - 6.0 * v);
    case ConditionId::KGM3: return v - (w2 - m2) * phi2;
    case ConditionId::AMP: return dv_phi - 2.0 * (w2 - m2) * phi2;
    case ConditionId::QB2: return 4.0 * w2 * phi2 + dv_phi - 6.0 * v;
    }
    throw std::invalid_argument("unknown condition id");
}

double condition_scale(const ModelConfig& model, ConditionId condition, double phi)
{
    const double v = std::abs(eval_V(model.potential, phi));
    const double dv_phi = std::abs(eval_dV(model.potential, phi) * phi);
    const double phi2 = phi * phi;
    const double dw = std::abs(model.omega2() - model.m2());
    switch (condition) {
    case ConditionId::KGM1: return dv_phi + 2.0 * v;
    case ConditionId::KGM2: return 4.0 * dw * phi2 + dv_phi + 6.0 * v;
    case ConditionId::KGM3: return v + dw * phi2;
    case ConditionId::AMP: return dv_phi + 2.0 * dw * phi2;
    case ConditionId::QB2: return 4.0 * model.omega2() * phi2 + dv_phi + 6.0 * v;
    }
    throw std::invalid_argument("unknown condition id");
}

ColemanResult coleman_indicator(const Potential& potential, double phi_lo, double phi_hi, int n)
{
    if (!(phi_lo > 0.0) || !(phi_hi > phi_lo) || !std::isfinite(phi_hi)) {
        throw std::invalid_argument("coleman_indicator needs 0 < phi_lo < phi_hi");
    }
    if (n < 3) throw std::invalid_argument("coleman_indicator needs n >= 3");

    auto ratio = [&](double phi) { return eval_V(potential, phi) / (phi * phi); };

    const Eigen::ArrayXd grid = Eigen::ArrayXd::LinSpaced(n, std::log(phi_lo), std::log(phi_hi)).exp();
    Eigen::Index best = 0;
    const Eigen::ArrayXd values = grid.unaryExpr(ratio);
    values.minCoeff(&best);

    double a = grid(std::max<Eigen::Index>(best - 1, 0));
    double b = grid(std::min<Eigen::Index>(best + 1, n - 1));
    constexpr double inv_phi = 0.6180339887498949;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = ratio(c);
    double fd = ratio(d);
    for (int it = 0; it < 200 && (b - a) > 1e-14 * b; ++it) {
        if (fc <= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = ratio(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = ratio(d);
        }
    }

    double location = 0.5 * (a + b);
    double value = ratio(location);
    if (values(best) < value) {
        location = grid(best);
        value = values(best);
    }
    const bool interior = best > 0 && best < n - 1 && location > phi_lo && location < phi_hi;
    return {location, value, interior};
}

}  // namespace kgm
