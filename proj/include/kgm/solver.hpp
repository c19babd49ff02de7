#ifndef KGM_SOLVER_HPP
#define KGM_SOLVER_HPP

#include "kgm/profile.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace kgm {

// Radial equations of motion of the reduced action:
//
//   phi'' + (2/r) phi' = (m^2 - (omega - e A0)^2) phi + V'(phi)/2
//   A0''  + (2/r) A0'  = -2 e phi^2 (omega - e A0)
//
// with phi'(0) = A0'(0) = 0, phi(R) = 0 and the Coulomb condition
// A0'(R) = -A0(R)/R at the outer edge.

struct EomResidual {
    Eigen::VectorXd phi;
    Eigen::VectorXd a0;
    /// Largest per-point magnitude of the individual terms; the normalization
    /// used by RadialProfile::ode_residual.
    double scale = 0.0;

    double max_norm() const;
    double relative_norm() const;
};

EomResidual eom_residual(const RadialProfile& profile);

enum class ShotOutcome { Undershoot, Overshoot, Decayed };

std::string_view to_string(ShotOutcome outcome);

/// One trajectory of the ungauged radial equation from phi(0) = phi0,
/// phi'(0) = 0, sampled on the grid until the outcome is decided.
struct Shot {
    ShotOutcome outcome = ShotOutcome::Undershoot;
    int nodes = 0;
    double r_stop = 0.0;
    Eigen::Index last = 0;  ///< last grid index reached
    Eigen::VectorXd phi;
    Eigen::VectorXd dphi;
};

Shot shoot(const ModelConfig& model, const Eigen::VectorXd& r, double phi0, int nodes, int substeps = 4);

struct BisectionStep {
    double phi0;
    ShotOutcome outcome;
    int nodes;
    double r_stop;
};

class NoSolution : public std::runtime_error {
public:
    NoSolution(const std::string& what, std::vector<BisectionStep> trace)
        : std::runtime_error(what), trace_(std::move(trace))
    {
    }
    const std::vector<BisectionStep>& trace() const { return trace_; }

private:
    std::vector<BisectionStep> trace_;
};

class NoConvergence : public std::runtime_error {
public:
    NoConvergence(const std::string& what, std::vector<double> residuals)
        : std::runtime_error(what), residuals_(std::move(residuals))
    {
    }
    const std::vector<double>& residual_trace() const { return residuals_; }

private:
    std::vector<double> residuals_;
};

class ContinuationBreakdown : public std::runtime_error {
public:
    ContinuationBreakdown(const std::string& what, double e_reached)
        : std::runtime_error(what), e_reached_(e_reached)
    {
    }
    double e_reached() const { return e_reached_; }

private:
    double e_reached_;
};

/// Default outer radius: 30/kappa when the linearized decay rate kappa is
/// finite, 10/sqrt(g) for the logarithmic potential (Gaussian tails).
/// Throws std::invalid_argument when no decay scale exists (kappa^2 <= 0).
double default_r_max(const ModelConfig& model);

struct QBallOptions {
    double r_max = 0.0;  ///< 0 selects default_r_max
    Eigen::Index grid_size = 4097;
    int nodes = 0;
    double bracket_lo = 1e-3;
    double bracket_hi = 1e3;
    /// Accepted relative discretization residual of the returned profile.
    double tol = 1e-3;
    int substeps = 4;
};

/// Ground or k-node state of the ungauged equation by bisection on phi(0).
/// Throws NoSolution when the bracket does not straddle an under/overshoot
/// transition or the converged shot fails the decay checks.
RadialProfile solve_qball(const ModelConfig& model, const QBallOptions& opts = {});

struct GaugedOptions {
    QBallOptions seed{};  ///< grid and shooting options for the e = 0 seed
    double tol = 1e-10;   ///< Newton tolerance on the relative residual
    double damping = 1.0; ///< initial Newton step fraction
    int max_newton = 60;
    double initial_e_step = 0.0;  ///< 0 selects e/4
    double min_e_step = 1e-6;
};

/// Damped Newton on the finite-difference system, continued in e from the
/// ungauged seed. The seed's grid is reused.
RadialProfile solve_gauged(const ModelConfig& model, const GaugedOptions& opts = {});
RadialProfile solve_gauged(const ModelConfig& model, const RadialProfile& seed, const GaugedOptions& opts = {});

/// phi(r) -> lambda^alpha phi(lambda r), A0(r) -> lambda^beta A0(lambda r) on
/// the original grid. Outside the stored range phi is continued by zero and
/// A0 by its Coulomb tail.
RadialProfile rescale_profile(const RadialProfile& profile, const ScalingParams& scaling);

}  // namespace kgm

#endif  // KGM_SOLVER_HPP
