#include "kgm/solver.hpp"

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace kgm {

namespace {

double field_force(const ModelConfig& model, double phi)
{
    return (model.m2() - model.omega2()) * phi + 0.5 * eval_dV(model.potential, phi);
}

Eigen::VectorXd uniform_grid(const ModelConfig& model, const QBallOptions& opts)
{
    const double r_max = opts.r_max > 0.0 ? opts.r_max : default_r_max(model);
    if (opts.grid_size < 5) throw std::invalid_argument("grid_size must be >= 5");
    return Eigen::VectorXd::LinSpaced(opts.grid_size, 0.0, r_max);
}

}  // namespace

double EomResidual::max_norm() const
{
    double n = 0.0;
    if (phi.size() > 0) n = std::max(n, phi.cwiseAbs().maxCoeff());
    if (a0.size() > 0) n = std::max(n, a0.cwiseAbs().maxCoeff());
    return n;
}

double EomResidual::relative_norm() const
{
    const double n = max_norm();
    return scale > 0.0 ? n / scale : n;
}

EomResidual eom_residual(const RadialProfile& profile)
{
    profile.validate(3);
    const auto& model = profile.model;
    const Eigen::Index n = profile.size();
    const double h = profile.spacing();

    const Eigen::VectorXd lap_phi = grid::radial_laplacian(profile.phi, h);
    Eigen::VectorXd lap_a = grid::radial_laplacian(profile.a0, h);
    lap_a(n - 1) = grid::coulomb_boundary_laplacian(profile.a0, h);

    EomResidual res;
    res.phi.resize(n);
    res.a0.resize(n);
    double scale = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        const double phi = profile.phi(i);
        const double w = model.omega - model.e * profile.a0(i);
        const double mass_term = (model.m2() - w * w) * phi;
        const double pot_term = 0.5 * eval_dV(model.potential, phi);
        const double source = 2.0 * model.e * phi * phi * w;
        if (i + 1 < n) {
            res.phi(i) = lap_phi(i) - mass_term - pot_term;
            scale = std::max(scale, std::abs(lap_phi(i)) + std::abs(mass_term) + std::abs(pot_term));
        } else {
            res.phi(i) = phi / (h * h);
        }
        res.a0(i) = lap_a(i) + source;
        scale = std::max(scale, std::abs(lap_a(i)) + std::abs(source));
    }
    res.scale = scale;
    return res;
}

std::string_view to_string(ShotOutcome outcome)
{
    switch (outcome) {
    case ShotOutcome::Undershoot: return "undershoot";
    case ShotOutcome::Overshoot: return "overshoot";
    case ShotOutcome::Decayed: return "decayed";
    }
    return "?";
}

double default_r_max(const ModelConfig& model)
{
    const double k2 = model.kappa2();
    if (std::isfinite(k2) && k2 > 0.0) return 30.0 / std::sqrt(k2);
    if (model.potential.family() == PotentialFamily::Logarithmic && model.potential.g() > 0.0) {
        return 10.0 / std::sqrt(model.potential.g());
    }
    throw std::invalid_argument("no exponential decay scale for this model (kappa^2 = " + std::to_string(k2)
                                + "); supply R_max explicitly");
}

Shot shoot(const ModelConfig& model, const Eigen::VectorXd& r, double phi0, int nodes, int substeps)
{
    if (substeps < 1) throw std::invalid_argument("substeps must be >= 1");
    const Eigen::Index n = r.size();
    const double h = r(1) - r(0);

    Shot shot;
    shot.phi = Eigen::VectorXd::Zero(n);
    shot.dphi = Eigen::VectorXd::Zero(n);
    shot.phi(0) = phi0;

    auto rhs = [&](double rr, double phi, double dphi) {
        const double f = field_force(model, phi);
        return rr > 0.0 ? f - 2.0 * dphi / rr : f / 3.0;
    };

    double phi = phi0;
    double dphi = 0.0;
    double rr = 0.0;
    const double f0 = field_force(model, phi0);
    // receding: moving away from zero; approaching: moving toward zero.
    int motion = (f0 * phi0 > 0.0) ? 1 : (f0 * phi0 < 0.0 ? -1 : 0);
    bool extremum_since_node = true;
    const double blowup = 1e6 * std::abs(phi0);

    auto finish = [&](ShotOutcome outcome, Eigen::Index last) {
        shot.outcome = outcome;
        shot.r_stop = rr;
        shot.last = last;
        return shot;
    };

    for (Eigen::Index i = 0; i + 1 < n; ++i) {
        const int steps = (i == 0) ? 16 * substeps : substeps;
        const double dt = h / steps;
        for (int s = 0; s < steps; ++s) {
            const double k1p = dphi;
            const double k1v = rhs(rr, phi, dphi);
            const double k2p = dphi + 0.5 * dt * k1v;
            const double k2v = rhs(rr + 0.5 * dt, phi + 0.5 * dt * k1p, k2p);
            const double k3p = dphi + 0.5 * dt * k2v;
            const double k3v = rhs(rr + 0.5 * dt, phi + 0.5 * dt * k2p, k3p);
            const double k4p = dphi + dt * k3v;
            const double k4v = rhs(rr + dt, phi + dt * k3p, k4p);
            const double new_phi = phi + dt / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
            const double new_dphi = dphi + dt / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
            const bool crossed = (phi > 0.0 && new_phi <= 0.0) || (phi < 0.0 && new_phi >= 0.0);
            phi = new_phi;
            dphi = new_dphi;
            rr += dt;
            if (!std::isfinite(phi) || !std::isfinite(dphi)) {
                return finish(extremum_since_node || shot.nodes == 0 ? ShotOutcome::Undershoot
                                                                      : ShotOutcome::Overshoot,
                              i);
            }
            if (crossed) {
                ++shot.nodes;
                if (shot.nodes > nodes) return finish(ShotOutcome::Overshoot, i);
                motion = 1;
                extremum_since_node = false;
                continue;
            }
            const double pv = phi * dphi;
            const int new_motion = (pv > 0.0) ? 1 : (pv < 0.0 ? -1 : motion);
            if (motion == 1 && new_motion == -1) extremum_since_node = true;
            if (motion == -1 && new_motion == 1) return finish(ShotOutcome::Undershoot, i);
            motion = new_motion;
            if (std::abs(phi) > blowup) {
                return finish(extremum_since_node || shot.nodes == 0 ? ShotOutcome::Undershoot
                                                                      : ShotOutcome::Overshoot,
                              i);
            }
        }
        shot.phi(i + 1) = phi;
        shot.dphi(i + 1) = dphi;
    }
    if (std::abs(phi) <= 1e-6 * std::abs(phi0) && shot.nodes == nodes) return finish(ShotOutcome::Decayed, n - 1);
    return finish(ShotOutcome::Undershoot, n - 1);
}

namespace {

std::string describe(const std::vector<BisectionStep>& trace)
{
    std::ostringstream os;
    os.precision(17);
    for (const auto& s : trace) {
        os << "\n  phi0=" << s.phi0 << " " << to_string(s.outcome) << " nodes=" << s.nodes << " r_stop=" << s.r_stop;
    }
    return os.str();
}

// Joins the converged bracket shots where they still agree and continues
// the profile with the linearized tail phi ~ exp(-kappa r)/r beyond.
Eigen::VectorXd assemble_shot_profile(const Eigen::VectorXd& r, const Shot& under, const Shot& over)
{
    const Eigen::Index n = r.size();
    const Eigen::Index limit = std::min(under.last, over.last);
    Eigen::Index cut = 0;
    for (Eigen::Index j = 1; j <= limit; ++j) {
        const double a = under.phi(j);
        const double b = over.phi(j);
        if (a == 0.0 || std::abs(a - b) > 1e-4 * std::abs(a)) break;
        cut = j;
    }
    Eigen::VectorXd phi = Eigen::VectorXd::Zero(n);
    for (Eigen::Index j = 0; j <= cut; ++j) phi(j) = 0.5 * (under.phi(j) + over.phi(j));
    if (cut == n - 1) return phi;
    if (cut == 0) throw std::runtime_error("shots diverge immediately");

    const double phi_c = phi(cut);
    const double dphi_c = 0.5 * (under.dphi(cut) + over.dphi(cut));
    const double r_c = r(cut);
    const double kappa = -(dphi_c / phi_c + 1.0 / r_c);
    if (!(kappa > 0.0)) throw std::runtime_error("profile has no decaying tail at the matching radius");
    for (Eigen::Index j = cut + 1; j < n; ++j) phi(j) = phi_c * (r_c / r(j)) * std::exp(-kappa * (r(j) - r_c));
    return phi;
}

}  // namespace

RadialProfile solve_qball(const ModelConfig& model, const QBallOptions& opts)
{
    if (model.e != 0.0) throw std::invalid_argument("solve_qball requires e = 0");
    if (opts.nodes < 0) throw std::invalid_argument("node count must be >= 0");
    if (!(opts.bracket_lo > 0.0) || !(opts.bracket_hi > opts.bracket_lo)) {
        throw std::invalid_argument("bracket must satisfy 0 < lo < hi");
    }
    const Eigen::VectorXd r = uniform_grid(model, opts);

    std::vector<BisectionStep> trace;
    auto run = [&](double phi0) {
        Shot s = shoot(model, r, phi0, opts.nodes, opts.substeps);
        trace.push_back({phi0, s.outcome, s.nodes, s.r_stop});
        return s;
    };

    double lo = opts.bracket_lo;
    double hi = opts.bracket_hi;
    Shot under = run(lo);
    Shot over = run(hi);
    if (under.outcome != ShotOutcome::Undershoot || over.outcome != ShotOutcome::Overshoot) {
        throw NoSolution("bracket does not straddle an undershoot/overshoot transition:" + describe(trace), trace);
    }

    for (int it = 0; it < 300; ++it) {
        const double mid = (hi / lo > 2.0) ? std::sqrt(lo * hi) : 0.5 * (lo + hi);
        if (!(mid > lo && mid < hi)) break;
        Shot s = run(mid);
        if (s.outcome == ShotOutcome::Overshoot) {
            hi = mid;
            over = std::move(s);
        } else if (s.outcome == ShotOutcome::Undershoot) {
            if (s.nodes > opts.nodes) {
                throw NoSolution("node count not monotone in phi(0):" + describe(trace), trace);
            }
            lo = mid;
            under = std::move(s);
        } else {
            lo = hi = mid;
            under = s;
            over = std::move(s);
            break;
        }
    }

    RadialProfile profile = RadialProfile::zeros(model, r(r.size() - 1), r.size());
    try {
        profile.phi = assemble_shot_profile(r, under, over);
    } catch (const std::runtime_error& err) {
        throw NoSolution(std::string(err.what()) + ":" + describe(trace), trace);
    }

    const double phi0 = std::abs(profile.phi(0));
    const Eigen::Index n = profile.size();
    if (!(phi0 > 0.0) || std::abs(profile.phi(n - 1)) >= 1e-6 * phi0) {
        throw NoSolution("converged shot does not decay within R_max:" + describe(trace), trace);
    }
    if (count_nodes(profile.phi) != opts.nodes) {
        throw NoSolution("converged shot has the wrong node count:" + describe(trace), trace);
    }
    profile.ode_residual = eom_residual(profile).relative_norm();
    if (!(profile.ode_residual <= opts.tol)) {
        throw NoSolution("discretization residual " + std::to_string(profile.ode_residual) + " exceeds tolerance"
                             + describe(trace),
                         trace);
    }
    return profile;
}

namespace {

struct NewtonSystem {
    const ModelConfig& model;
    Eigen::Index n;
    double h;

    double d2v(double phi) const
    {
        double v = eval_d2V(model.potential, phi);
        if (!std::isfinite(v)) v = eval_d2V(model.potential, phi == 0.0 ? 1e-300 : phi);
        return std::isfinite(v) ? v : 0.0;
    }

    Eigen::VectorXd residual(const Eigen::VectorXd& x) const
    {
        RadialProfile p;
        p.r = Eigen::VectorXd::LinSpaced(n, 0.0, h * static_cast<double>(n - 1));
        p.phi = x(Eigen::seqN(0, n, 2));
        p.a0 = x(Eigen::seqN(1, n, 2));
        p.model = model;
        const EomResidual res = eom_residual(p);
        Eigen::VectorXd out(2 * n);
        out(Eigen::seqN(0, n, 2)) = res.phi;
        out(Eigen::seqN(1, n, 2)) = res.a0;
        return out;
    }

    double scale(const Eigen::VectorXd& x) const
    {
        RadialProfile p;
        p.r = Eigen::VectorXd::LinSpaced(n, 0.0, h * static_cast<double>(n - 1));
        p.phi = x(Eigen::seqN(0, n, 2));
        p.a0 = x(Eigen::seqN(1, n, 2));
        p.model = model;
        return eom_residual(p).scale;
    }

    Eigen::SparseMatrix<double> jacobian(const Eigen::VectorXd& x) const
    {
        std::vector<Eigen::Triplet<double>> t;
        t.reserve(static_cast<std::size_t>(12 * n));
        const double inv_h2 = 1.0 / (h * h);
        const double e = model.e;
        const double R = h * static_cast<double>(n - 1);
        auto lap = [&](Eigen::Index row, Eigen::Index i, int field) {
            if (i == 0) {
                t.emplace_back(row, 2 * 0 + field, -6.0 * inv_h2);
                t.emplace_back(row, 2 * 1 + field, 6.0 * inv_h2);
                return;
            }
            const double ri = static_cast<double>(i) * h;
            t.emplace_back(row, 2 * (i - 1) + field, inv_h2 - 1.0 / (h * ri));
            t.emplace_back(row, 2 * i + field, -2.0 * inv_h2);
            t.emplace_back(row, 2 * (i + 1) + field, inv_h2 + 1.0 / (h * ri));
        };
        for (Eigen::Index i = 0; i < n; ++i) {
            const double phi = x(2 * i);
            const double a = x(2 * i + 1);
            const double w = model.omega - e * a;
            const Eigen::Index rp = 2 * i;
            const Eigen::Index ra = 2 * i + 1;
            if (i + 1 < n) {
                lap(rp, i, 0);
                t.emplace_back(rp, 2 * i, -(model.m2() - w * w) - 0.5 * d2v(phi));
                t.emplace_back(rp, 2 * i + 1, -2.0 * e * phi * w);
                lap(ra, i, 1);
            } else {
                t.emplace_back(rp, 2 * i, inv_h2);
                t.emplace_back(ra, 2 * (i - 1) + 1, 2.0 * inv_h2);
                t.emplace_back(ra, 2 * i + 1, (-2.0 - 2.0 * h / R) * inv_h2 - 2.0 / (R * R));
            }
            t.emplace_back(ra, 2 * i + 1, -2.0 * e * e * phi * phi);
            t.emplace_back(ra, 2 * i, 4.0 * e * phi * w);
        }
        Eigen::SparseMatrix<double> j(2 * n, 2 * n);
        j.setFromTriplets(t.begin(), t.end());
        return j;
    }
};

// Returns true on convergence; x is updated in place only on success.
bool newton(const ModelConfig& model, double h, Eigen::VectorXd& x, const GaugedOptions& opts,
            std::vector<double>& history)
{
    const Eigen::Index n = x.size() / 2;
    NewtonSystem sys{model, n, h};
    Eigen::VectorXd y = x;
    Eigen::VectorXd res = sys.residual(y);
    double damping = std::clamp(opts.damping, 1e-3, 1.0);
    for (int it = 0; it < opts.max_newton; ++it) {
        const double scale = sys.scale(y);
        const double rel = scale > 0.0 ? res.cwiseAbs().maxCoeff() / scale : res.cwiseAbs().maxCoeff();
        history.push_back(rel);
        if (rel <= opts.tol) {
            x = y;
            return true;
        }
        Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
        lu.compute(sys.jacobian(y));
        if (lu.info() != Eigen::Success) return false;
        const Eigen::VectorXd step = lu.solve(-res);
        if (lu.info() != Eigen::Success || !step.allFinite()) return false;

        const double norm0 = res.norm();
        double t = damping;
        bool accepted = false;
        while (t >= 1.0 / 1024.0) {
            Eigen::VectorXd trial = y + t * step;
            Eigen::VectorXd trial_res = sys.residual(trial);
            if (trial_res.allFinite() && trial_res.norm() < (1.0 - 1e-4 * t) * norm0) {
                y = std::move(trial);
                res = std::move(trial_res);
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if (!accepted) return false;
        damping = std::min(1.0, 2.0 * t);
    }
    const double scale = sys.scale(y);
    const double rel = scale > 0.0 ? res.cwiseAbs().maxCoeff() / scale : res.cwiseAbs().maxCoeff();
    history.push_back(rel);
    if (rel <= opts.tol) {
        x = y;
        return true;
    }
    return false;
}

}  // namespace

RadialProfile solve_gauged(const ModelConfig& model, const GaugedOptions& opts)
{
    ModelConfig ungauged = model;
    ungauged.e = 0.0;
    const RadialProfile seed = solve_qball(ungauged, opts.seed);
    return solve_gauged(model, seed, opts);
}

RadialProfile solve_gauged(const ModelConfig& model, const RadialProfile& seed, const GaugedOptions& opts)
{
    seed.validate(5);
    const Eigen::Index n = seed.size();
    const double h = seed.spacing();

    Eigen::VectorXd x(2 * n);
    x(Eigen::seqN(0, n, 2)) = seed.phi;
    x(Eigen::seqN(1, n, 2)) = seed.a0;

    ModelConfig current = model;
    current.e = seed.model.e;
    std::vector<double> history;
    if (!newton(current, h, x, opts, history)) {
        throw NoConvergence("Newton iteration stalled at the seed coupling e = " + std::to_string(current.e),
                            history);
    }

    const double target = model.e;
    double step = opts.initial_e_step > 0.0 ? opts.initial_e_step : std::abs(target - current.e) / 4.0;
    while (current.e != target) {
        const double dir = target > current.e ? 1.0 : -1.0;
        double e_try = current.e + dir * step;
        if ((target - e_try) * dir <= 0.0) e_try = target;
        ModelConfig trial = current;
        trial.e = e_try;
        Eigen::VectorXd y = x;
        history.clear();
        if (newton(trial, h, y, opts, history)) {
            x = std::move(y);
            current = trial;
            step *= 2.0;
        } else {
            step *= 0.5;
            if (step < opts.min_e_step) {
                throw ContinuationBreakdown("continuation in e failed at e = " + std::to_string(current.e)
                                                + " (target " + std::to_string(target) + ")",
                                            current.e);
            }
        }
    }

    RadialProfile out = seed;
    out.model = model;
    out.phi = x(Eigen::seqN(0, n, 2));
    out.a0 = x(Eigen::seqN(1, n, 2));
    out.ode_residual = eom_residual(out).relative_norm();
    const double amp = out.phi.cwiseAbs().maxCoeff();
    const Eigen::Index outer = n - std::max<Eigen::Index>(n / 20, 2);
    if (amp > 0.0 && out.phi.tail(n - outer).cwiseAbs().maxCoeff() >= 1e-6 * amp) {
        throw NoConvergence("gauged profile does not decay within R_max", history);
    }
    return out;
}

RadialProfile rescale_profile(const RadialProfile& profile, const ScalingParams& s)
{
    if (!(s.lambda > 0.0) || !std::isfinite(s.lambda)) throw std::invalid_argument("scaling lambda must be > 0");
    profile.validate(5);
    RadialProfile out = profile;
    if (s.lambda == 1.0) return out;

    const Eigen::Index n = profile.size();
    const double h = profile.spacing();
    const double R = profile.r_max();
    const double charge = profile.a0(n - 1) * R;
    const double fa = std::pow(s.lambda, s.alpha);
    const double fb = std::pow(s.lambda, s.beta);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double x = s.lambda * profile.r(i);
        if (x <= R) {
            out.phi(i) = fa * grid::interpolate_even(profile.phi, h, x);
            out.a0(i) = fb * grid::interpolate_even(profile.a0, h, x);
        } else {
            out.phi(i) = 0.0;
            out.a0(i) = fb * charge / x;
        }
    }
    out.ode_residual = eom_residual(out).relative_norm();
    return out;
}

}  // namespace kgm
