#ifndef KGM_POTENTIAL_HPP
#define KGM_POTENTIAL_HPP

#include <Eigen/Core>

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace kgm {

enum class PotentialFamily { PowerLaw, Quartic, Logarithmic, Polynomial };

std::string_view to_string(PotentialFamily family);
PotentialFamily potential_family_from_string(std::string_view name);

/// Even self-interaction V(phi) with V(0) = V'(0) = 0.
///
///   PowerLaw     gamma |phi|^p,                p > 1
///   Quartic      mu2 phi^2 - g^2 phi^4,        g >= 0 (the quartic coupling is g^2)
///   Logarithmic  mu2 phi^2 - g phi^2 ln phi^2, continuous extension V(0) = 0
///   Polynomial   sum_k c_k phi^k,              k even, k >= 2
///
/// Construct through the named factories; they validate parameters.
class Potential {
public:
    struct Term {
        int power;
        double coefficient;
        friend bool operator==(const Term&, const Term&) = default;
    };

    static Potential power_law(double gamma, double p);
    static Potential quartic(double mu2, double g);
    static Potential logarithmic(double mu2, double g);
    static Potential polynomial(std::vector<Term> terms);

    PotentialFamily family() const { return family_; }
    double gamma() const { return gamma_; }
    double p() const { return p_; }
    double mu2() const { return mu2_; }
    double g() const { return g_; }
    const std::vector<Term>& terms() const { return terms_; }

    /// lim_{phi -> 0} V(phi)/phi^2; may be +-infinity.
    double quadratic_coefficient() const;

    friend bool operator==(const Potential&, const Potential&) = default;

private:
    Potential() = default;

    PotentialFamily family_ = PotentialFamily::PowerLaw;
    double gamma_ = 0.0;
    double p_ = 2.0;
    double mu2_ = 0.0;
    double g_ = 0.0;
    std::vector<Term> terms_;
};

/// Frequency, explicit mass, gauge coupling and self-interaction of the
/// reduced standing-wave action. omega is normalized to omega >= 0 on
/// construction (omega -> -omega, A0 -> -A0 is a symmetry).
struct ModelConfig {
    double omega = 0.0;
    double m = 0.0;
    double e = 0.0;
    Potential potential = Potential::quartic(1.0, 1.0);

    static ModelConfig make(double omega, double m, double e, Potential potential);

    double omega2() const { return omega * omega; }
    double m2() const { return m * m; }
    /// Asymptotic decay rate squared of the ungauged linearized equation.
    double kappa2() const { return m2() - omega2() + potential.quadratic_coefficient(); }

    friend bool operator==(const ModelConfig&, const ModelConfig&) = default;
};

double eval_V(const Potential& potential, double phi);
double eval_dV(const Potential& potential, double phi);
/// Hand-coded second derivative, used for Newton Jacobians. For PowerLaw with
/// p < 2 it is singular at phi = 0; callers must not evaluate it there.
double eval_d2V(const Potential& potential, double phi);

template <typename Derived>
Eigen::ArrayXd eval_V(const Potential& potential, const Eigen::ArrayBase<Derived>& phi)
{
    return phi.derived().unaryExpr([&](double x) { return eval_V(potential, x); });
}

template <typename Derived>
Eigen::ArrayXd eval_dV(const Potential& potential, const Eigen::ArrayBase<Derived>& phi)
{
    return phi.derived().unaryExpr([&](double x) { return eval_dV(potential, x); });
}

enum class ConditionId {
    KGM1,  // V'phi - 2V >= 0
    KGM2,  // 4(m^2 - w^2)phi^2 - (V'phi - 6V) >= 0, requires w != 0
    KGM3,  // V - (w^2 - m^2)phi^2 >= 0
    AMP,   // V'phi - 2(w^2 - m^2)phi^2 >= 0
    QB2    // 4w^2 phi^2 + V'phi - 6V strictly one-signed, e = m = 0 only
};

std::string_view to_string(ConditionId id);
ConditionId condition_from_string(std::string_view name);

/// Left-hand side of the pointwise no-go inequality `condition` at phi.
double condition_expr(const ModelConfig& model, ConditionId condition, double phi);

/// Sum of magnitudes of the individual terms of condition_expr; the scale
/// against which sign tolerances are measured.
double condition_scale(const ModelConfig& model, ConditionId condition, double phi);

struct ColemanResult {
    double min_location;
    double min_value;
    bool attained_interior;
};

/// Minimum of V(phi)/phi^2 over [phi_lo, phi_hi]: log-spaced sampling on n
/// points, then golden-section refinement around the best sample.
ColemanResult coleman_indicator(const Potential& potential, double phi_lo, double phi_hi, int n);

}  // namespace kgm

#endif  // KGM_POTENTIAL_HPP
