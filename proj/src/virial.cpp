#include "kgm/virial.hpp"

#include "kgm/solver.hpp"

#include <cmath>
#include <stdexcept>

namespace kgm {

namespace {

// 4 pi int_R^inf r^2 f dr for an integrand decaying exponentially, with the
// rate fitted between 80% and 90% of the grid.
double exponential_tail(const Eigen::VectorXd& r, const Eigen::VectorXd& f)
{
    const Eigen::Index n = r.size();
    const Eigen::Index ia = (8 * (n - 1)) / 10;
    const Eigen::Index ib = (9 * (n - 1)) / 10;
    if (ib <= ia) return 0.0;
    const double ga = r(ia) * r(ia) * f(ia);
    const double gb = r(ib) * r(ib) * f(ib);
    if (ga == 0.0 || gb == 0.0 || (ga > 0.0) != (gb > 0.0) || std::abs(gb) >= std::abs(ga)) return 0.0;
    const double kappa = std::log(ga / gb) / (r(ib) - r(ia));
    const double R = r(n - 1);
    return 4.0 * M_PI * gb * std::exp(-kappa * (R - r(ib))) / kappa;
}

double integrate(const Eigen::VectorXd& weights, const Eigen::VectorXd& r, const Eigen::VectorXd& f)
{
    return grid::radial_integral(weights, f) + exponential_tail(r, f);
}

void check_tail(const RadialProfile& profile, const FunctionalOptions& opts)
{
    if (!opts.check_decay) return;
    const Eigen::Index n = profile.size();
    const double amp = profile.phi.cwiseAbs().maxCoeff();
    if (amp == 0.0) return;
    const Eigen::Index outer = n - std::max<Eigen::Index>(n / 20, 2);
    const double tail = profile.phi.tail(n - outer).cwiseAbs().maxCoeff();
    if (tail >= opts.decay_threshold * amp) {
        throw std::domain_error("profile does not decay within R_max (outer |phi|/max|phi| = "
                                + std::to_string(tail / amp) + ")");
    }
}

}  // namespace

FunctionalSet compute_functionals(const RadialProfile& profile, const FunctionalOptions& opts)
{
    profile.validate(5);
    check_tail(profile, opts);

    const auto& model = profile.model;
    const auto& r = profile.r;
    const auto& phi = profile.phi;
    const auto& a0 = profile.a0;
    const double h = profile.spacing();
    const double e = model.e;
    const Eigen::VectorXd w = grid::radial_weights(r);
    const Eigen::VectorXd dphi = grid::even_derivative(phi, h);
    const Eigen::VectorXd da = grid::even_derivative(a0, h);

    const Eigen::ArrayXd p = phi.array();
    const Eigen::ArrayXd p2 = p.square();

    FunctionalSet f;
    f.V1 = integrate(w, r, p2.matrix());
    f.Pi1 = integrate(w, r, dphi.cwiseAbs2());
    const double R = profile.r_max();
    const double coulomb = a0(a0.size() - 1) * R;
    f.Pi2 = 0.5 * grid::radial_integral(w, da.cwiseAbs2()) + 2.0 * M_PI * coulomb * coulomb / R;
    f.I2 = e * e * integrate(w, r, (a0.array().square() * p2).matrix());
    f.I1 = 2.0 * e * model.omega * integrate(w, r, (a0.array() * p2).matrix());
    f.V2 = integrate(w, r, eval_V(model.potential, p).matrix());
    f.J = integrate(w, r, (eval_dV(model.potential, p) * p).matrix());
    return f;
}

std::array<double, 6> virial_terms_power(const FunctionalSet& f, const ModelConfig& model, double alpha, double beta)
{
    if (model.potential.family() != PotentialFamily::PowerLaw) {
        throw std::invalid_argument("power-law virial identity requires a PowerLaw potential");
    }
    const double p = model.potential.p();
    const double dw = model.omega2() - model.m2();
    return {-(2.0 * alpha - 1.0) * f.Pi1,
            (2.0 * beta - 1.0) * f.Pi2,
            (2.0 * alpha - 3.0) * dw * f.V1,
            -(2.0 * alpha + beta - 3.0) * f.I1,
            (2.0 * alpha + 2.0 * beta - 3.0) * f.I2,
            -(p * alpha - 3.0) * f.V2};
}

std::array<double, 5> virial_terms_general(const FunctionalSet& f, const ModelConfig& model, double alpha)
{
    const double dw = model.omega2() - model.m2();
    return {-(2.0 * alpha - 1.0) * f.Pi1,
            (5.0 - 4.0 * alpha) * f.Pi2,
            (2.0 * alpha - 3.0) * dw * f.V1,
            (3.0 - 2.0 * alpha) * f.I2,
            -(alpha * f.J - 3.0 * f.V2)};
}

std::array<double, 5> virial_terms_amplitude(const FunctionalSet& f, const ModelConfig& model)
{
    const double dw = model.omega2() - model.m2();
    return {-2.0 * f.Pi1, -4.0 * f.Pi2, 2.0 * dw * f.V1, -2.0 * f.I2, -f.J};
}

double virial_residual_power(const FunctionalSet& f, const ModelConfig& model, const ScalingParams& s)
{
    return normalized_residual(virial_terms_power(f, model, s.alpha, s.beta));
}

double virial_residual_general(const FunctionalSet& f, const ModelConfig& model, double alpha)
{
    return normalized_residual(virial_terms_general(f, model, alpha));
}

double virial_residual_amplitude(const FunctionalSet& f, const ModelConfig& model)
{
    return normalized_residual(virial_terms_amplitude(f, model));
}

double action_from_functionals(const FunctionalSet& f, const ModelConfig& model)
{
    return -f.Pi1 + f.Pi2 + (model.omega2() - model.m2()) * f.V1 - f.I1 + f.I2 - f.V2;
}

double action_scale(const FunctionalSet& f, const ModelConfig& model)
{
    return std::abs(f.Pi1) + std::abs(f.Pi2) + std::abs((model.omega2() - model.m2()) * f.V1) + std::abs(f.I1)
           + std::abs(f.I2) + std::abs(f.V2);
}

double action_value(const RadialProfile& profile)
{
    return action_from_functionals(compute_functionals(profile), profile.model);
}

double action_power_closed_form(const FunctionalSet& f, const ModelConfig& model, const ScalingParams& s)
{
    if (model.potential.family() != PotentialFamily::PowerLaw) {
        throw std::invalid_argument("closed-form S(lambda) requires a PowerLaw potential");
    }
    const double l = s.lambda;
    const double a = s.alpha;
    const double b = s.beta;
    const double p = model.potential.p();
    return -std::pow(l, 2 * a - 1) * f.Pi1 + std::pow(l, 2 * b - 1) * f.Pi2
           + std::pow(l, 2 * a - 3) * (model.omega2() - model.m2()) * f.V1 - std::pow(l, 2 * a + b - 3) * f.I1
           + std::pow(l, 2 * a + 2 * b - 3) * f.I2 - std::pow(l, p * a - 3) * f.V2;
}

std::vector<ScalingSample> scaling_curve(const RadialProfile& profile, const std::vector<ScalingParams>& scalings)
{
    FunctionalOptions relaxed;
    relaxed.check_decay = false;
    std::vector<ScalingSample> out;
    out.reserve(scalings.size());
    for (const auto& s : scalings) {
        const RadialProfile scaled = rescale_profile(profile, s);
        out.push_back({s, action_from_functionals(compute_functionals(scaled, relaxed), profile.model)});
    }
    return out;
}

double action_slope(const RadialProfile& profile, double alpha, double beta, double dlambda)
{
    const auto curve = scaling_curve(profile, {{alpha, beta, 1.0 + dlambda}, {alpha, beta, 1.0 - dlambda}});
    return (curve[0].action - curve[1].action) / (2.0 * dlambda);
}

double charge(const RadialProfile& profile)
{
    profile.validate(5);
    const auto& model = profile.model;
    const Eigen::VectorXd w = grid::radial_weights(profile.r);
    const Eigen::VectorXd dens
        = (2.0 * (model.omega - model.e * profile.a0.array()) * profile.phi.array().square()).matrix();
    return integrate(w, profile.r, dens);
}

}  // namespace kgm
