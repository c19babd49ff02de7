#ifndef KGM_VIRIAL_HPP
#define KGM_VIRIAL_HPP

#include "kgm/profile.hpp"

#include <array>
#include <cmath>
#include <vector>

namespace kgm {

/// Integral functionals of a profile (all integrals over R^3):
///
///   V1  = int phi^2                 Pi1 = int |grad phi|^2
///   Pi2 = 1/2 int |grad A0|^2       I2  = e^2 int A0^2 phi^2
///   I1  = 2 e omega int A0 phi^2    V2  = int V(phi)
///   J   = int V'(phi) phi
struct FunctionalSet {
    double V1 = 0.0;
    double Pi1 = 0.0;
    double Pi2 = 0.0;
    double I1 = 0.0;
    double I2 = 0.0;
    double V2 = 0.0;
    double J = 0.0;
};

struct FunctionalOptions {
    /// Refuse profiles whose outer twentieth exceeds this fraction of max|phi|.
    double decay_threshold = 1e-6;
    bool check_decay = true;
};

/// Simpson quadrature on the grid with an exponential tail correction
/// fitted on the outer tenth, plus the analytic Coulomb tail of Pi2.
/// Gradients use fourth-order central differences.
FunctionalSet compute_functionals(const RadialProfile& profile, const FunctionalOptions& opts = {});

/// The terms of the (alpha, beta) scaling identity for V = gamma |phi|^p,
/// in the order Pi1, Pi2, V1, I1, I2, V2. Their sum vanishes on solutions.
std::array<double, 6> virial_terms_power(const FunctionalSet& f, const ModelConfig& model, double alpha,
                                          double beta);
/// The terms of the beta = 3 - 2 alpha identity for a general potential, in
/// the order Pi1, Pi2, V1, I2, (alpha J - 3 V2).
std::array<double, 5> virial_terms_general(const FunctionalSet& f, const ModelConfig& model, double alpha);
/// The terms of the amplitude-only identity: Pi1, Pi2, V1, I2, J.
std::array<double, 5> virial_terms_amplitude(const FunctionalSet& f, const ModelConfig& model);

/// |sum of terms| / sum |terms|, with 0/0 -> 0.
template <std::size_t N>
double normalized_residual(const std::array<double, N>& terms)
{
    double sum = 0.0;
    double mag = 0.0;
    for (double t : terms) {
        sum += t;
        mag += std::abs(t);
    }
    return mag > 0.0 ? std::abs(sum) / mag : 0.0;
}

/// Requires a PowerLaw potential.
double virial_residual_power(const FunctionalSet& f, const ModelConfig& model, const ScalingParams& s);
double virial_residual_general(const FunctionalSet& f, const ModelConfig& model, double alpha);
double virial_residual_amplitude(const FunctionalSet& f, const ModelConfig& model);

/// S = -Pi1 + Pi2 + (w^2 - m^2) V1 - I1 + I2 - V2.
double action_from_functionals(const FunctionalSet& f, const ModelConfig& model);
/// Sum of magnitudes of the six action terms.
double action_scale(const FunctionalSet& f, const ModelConfig& model);
double action_value(const RadialProfile& profile);

/// S(lambda) for V = gamma |phi|^p from the functionals at lambda = 1.
double action_power_closed_form(const FunctionalSet& f, const ModelConfig& model, const ScalingParams& s);

struct ScalingSample {
    ScalingParams scaling;
    double action;
};

/// S(lambda) by direct substitution: rescale the stored profile and
/// re-integrate. Valid for any potential.
std::vector<ScalingSample> scaling_curve(const RadialProfile& profile, const std::vector<ScalingParams>& scalings);

/// Central-difference dS/dlambda at lambda = 1 for one (alpha, beta).
double action_slope(const RadialProfile& profile, double alpha, double beta, double dlambda = 0.01);

/// Q = int 2 (omega - e A0) phi^2.
double charge(const RadialProfile& profile);

}  // namespace kgm

#endif  // KGM_VIRIAL_HPP
