#ifndef KGM_NOGO_HPP
#define KGM_NOGO_HPP

#include "kgm/potential.hpp"

#include <optional>
#include <string>
#include <vector>

namespace kgm {

enum class VerdictStatus { Excluded, NotExcluded, Inconclusive };

std::string_view to_string(VerdictStatus status);

/// Outcome of a non-existence check.
///
/// Excluded carries no witness. NotExcluded carries a field value at which
/// the tested inequality is violated beyond tolerance (for the two-sided
/// QB2 test, `counter_witness` holds a point of the opposite sign).
/// NotExcluded is never a claim that a soliton exists.
struct NoGoVerdict {
    VerdictStatus status = VerdictStatus::NotExcluded;
    std::string condition;
    std::optional<double> witness;
    std::optional<double> counter_witness;
    /// Smallest normalized |expr| among the samples closest to the band.
    double margin = 0.0;
    /// Refined sign changes of the tested expression inside the range.
    std::vector<double> roots;

    friend bool operator==(const NoGoVerdict&, const NoGoVerdict&) = default;
};

struct PhiRange {
    double lo = 0.0;
    double hi = 1e3;
};

struct CheckOptions {
    PhiRange range{};
    int n = 512;
    double tol = 1e-8;
};

/// Normalized values at or above -kZeroBand count as satisfying a
/// non-strict inequality (rounding of exactly-zero expressions).
inline constexpr double kZeroBand = 1e-12;

/// Closed-form case table for V = gamma |phi|^p (gauged system).
NoGoVerdict classify_power_law(double gamma, double p, double m2, double omega2);

/// Sampled sign check of one pointwise inequality over the field range.
NoGoVerdict check_condition(const ModelConfig& model, ConditionId condition, const CheckOptions& opts = {});

/// The conditions that apply to `model`:
///   e > 0          KGM1, KGM2 (omega != 0), KGM3, AMP
///   e = 0, m = 0   KGM1, QB2, KGM3, AMP
///   e = 0, m > 0   KGM1, KGM3, AMP
std::vector<ConditionId> applicable_conditions(const ModelConfig& model);

struct GeneralVerdict {
    std::vector<NoGoVerdict> per_condition;
    NoGoVerdict aggregate;
};

GeneralVerdict classify_general(const ModelConfig& model, const CheckOptions& opts = {});

}  // namespace kgm

#endif  // KGM_NOGO_HPP
