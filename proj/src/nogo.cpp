#include "kgm/nogo.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace kgm {

std::string_view to_string(VerdictStatus status)
{
    switch (status) {
    case VerdictStatus::Excluded: return "Excluded";
    case VerdictStatus::NotExcluded: return "NotExcluded";
    case VerdictStatus::Inconclusive: return "Inconclusive";
    }
    return "?";
}

NoGoVerdict classify_power_law(double gamma, double p, double m2, double omega2)
{
    if (!(p > 1.0) || !std::isfinite(p)) throw std::domain_error("power-law exponent must satisfy p > 1");
    if (!std::isfinite(gamma) || !std::isfinite(m2) || !std::isfinite(omega2)) {
        throw std::domain_error("power-law parameters must be finite");
    }

    auto excluded = [](const char* label) {
        NoGoVerdict v;
        v.status = VerdictStatus::Excluded;
        v.condition = label;
        return v;
    };

    if (gamma == 0.0) return excluded("gamma=0");
    if (gamma > 0.0) {
        if (p >= 2.0) return excluded("gamma>0,p>=2");
        if (m2 >= omega2) return excluded("gamma>0,1<p<2,m2>=omega2");
    } else {
        if (p <= 2.0) return excluded("gamma<0,1<p<=2");
        if (p >= 6.0 && m2 >= omega2 && omega2 > 0.0) return excluded("gamma<0,p>=6,m2>=omega2>0");
    }
    NoGoVerdict v;
    v.status = VerdictStatus::NotExcluded;
    v.condition = "power-law";
    return v;
}

namespace {

bool is_two_sided(ConditionId c) { return c == ConditionId::QB2; }

void validate(const ModelConfig& model, ConditionId condition, const CheckOptions& opts)
{
    if (!(opts.range.hi > 0.0) || !(opts.range.lo >= 0.0) || !(opts.range.lo < opts.range.hi)
        || !std::isfinite(opts.range.hi)) {
        throw std::invalid_argument("field range must satisfy 0 <= lo < hi");
    }
    if (opts.n < 16) throw std::invalid_argument("sample count must be >= 16");
    if (!(opts.tol > 0.0)) throw std::invalid_argument("tolerance must be > 0");
    if (condition == ConditionId::KGM2 && model.omega == 0.0) {
        throw std::invalid_argument("KGM2 requires omega != 0");
    }
    if (condition == ConditionId::QB2 && (model.e != 0.0 || model.m != 0.0)) {
        throw std::invalid_argument("QB2 applies only to e = 0, m = 0");
    }
}

std::vector<double> sample_points(const PhiRange& range, int n)
{
    const int n_lin = n / 2;
    const int n_log = n - n_lin;
    std::vector<double> pts;
    pts.reserve(n);
    const Eigen::ArrayXd lin = Eigen::ArrayXd::LinSpaced(n_lin, range.lo, range.hi);
    for (double x : lin) {
        if (x > 0.0) pts.push_back(x);
    }
    const double log_lo = std::max(range.lo, range.hi * 1e-9);
    const Eigen::ArrayXd logs = Eigen::ArrayXd::LinSpaced(n_log, std::log(log_lo), std::log(range.hi)).exp();
    for (double x : logs) {
        if (x > 0.0) pts.push_back(std::clamp(x, log_lo, range.hi));
    }
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return pts;
}

double normalized(const ModelConfig& model, ConditionId c, double phi)
{
    const double s = condition_scale(model, c, phi);
    if (s == 0.0 || !std::isfinite(s)) return 0.0;
    return condition_expr(model, c, phi) / s;
}

double bisect_root(const ModelConfig& model, ConditionId c, double a, double b)
{
    double fa = condition_expr(model, c, a);
    for (int it = 0; it < 100; ++it) {
        const double mid = 0.5 * (a + b);
        if (mid <= a || mid >= b) break;
        const double fm = condition_expr(model, c, mid);
        if (fm == 0.0) return mid;
        if ((fm > 0.0) == (fa > 0.0)) {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
    }
    return 0.5 * (a + b);
}

// Golden-section search for a local minimum of sign * normalized expression on [a, b].
double refine_extremum(const ModelConfig& model, ConditionId c, double a, double b, double sign)
{
    const double inv_phi = 0.5 * (std::sqrt(5.0) - 1.0);
    auto f = [&](double x) { return sign * normalized(model, c, x); };
    double x1 = b - inv_phi * (b - a);
    double x2 = a + inv_phi * (b - a);
    double f1 = f(x1);
    double f2 = f(x2);
    for (int it = 0; it < 80 && b - a > 1e-14 * b; ++it) {
        if (f1 <= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2);
        }
    }
    return f1 <= f2 ? x1 : x2;
}

}  // namespace

NoGoVerdict check_condition(const ModelConfig& model, ConditionId condition, const CheckOptions& opts)
{
    validate(model, condition, opts);

    std::vector<double> pts = sample_points(opts.range, opts.n);
    std::vector<double> vals(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) vals[i] = normalized(model, condition, pts[i]);

    // Sampled local extrema are polished so that a dip narrower than the grid spacing is not missed.
    std::vector<double> extra;
    for (std::size_t i = 1; i + 1 < pts.size(); ++i) {
        if (vals[i] <= vals[i - 1] && vals[i] <= vals[i + 1]) {
            extra.push_back(refine_extremum(model, condition, pts[i - 1], pts[i + 1], 1.0));
        }
        if (is_two_sided(condition) && vals[i] >= vals[i - 1] && vals[i] >= vals[i + 1]) {
            extra.push_back(refine_extremum(model, condition, pts[i - 1], pts[i + 1], -1.0));
        }
    }
    if (!extra.empty()) {
        pts.insert(pts.end(), extra.begin(), extra.end());
        std::sort(pts.begin(), pts.end());
        pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
        vals.resize(pts.size());
        for (std::size_t i = 0; i < pts.size(); ++i) vals[i] = normalized(model, condition, pts[i]);
    }

    NoGoVerdict verdict;
    verdict.condition = std::string(to_string(condition));
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        if ((vals[i] > 0.0 && vals[i + 1] < 0.0) || (vals[i] < 0.0 && vals[i + 1] > 0.0)) {
            verdict.roots.push_back(bisect_root(model, condition, pts[i], pts[i + 1]));
        }
    }

    const auto [min_it, max_it] = std::minmax_element(vals.begin(), vals.end());
    const double vmin = *min_it;
    const double vmax = *max_it;
    const double phi_min = pts[static_cast<std::size_t>(min_it - vals.begin())];
    const double phi_max = pts[static_cast<std::size_t>(max_it - vals.begin())];

    if (!is_two_sided(condition)) {
        if (vmin >= -kZeroBand) {
            verdict.status = VerdictStatus::Excluded;
            verdict.margin = std::max(vmin, 0.0);
        } else if (vmin < -opts.tol) {
            verdict.status = VerdictStatus::NotExcluded;
            verdict.witness = phi_min;
            verdict.margin = -vmin;
        } else {
            verdict.status = VerdictStatus::Inconclusive;
            verdict.margin = -vmin;
        }
        return verdict;
    }

    double min_abs = std::abs(vals.front());
    for (double v : vals) min_abs = std::min(min_abs, std::abs(v));
    verdict.margin = min_abs;
    if (vmin > opts.tol || vmax < -opts.tol) {
        verdict.status = VerdictStatus::Excluded;
    } else if (vmin < -opts.tol && vmax > opts.tol) {
        verdict.status = VerdictStatus::NotExcluded;
        verdict.witness = phi_min;
        verdict.counter_witness = phi_max;
    } else {
        verdict.status = VerdictStatus::Inconclusive;
    }
    return verdict;
}

std::vector<ConditionId> applicable_conditions(const ModelConfig& model)
{
    if (model.e > 0.0) {
        std::vector<ConditionId> ids{ConditionId::KGM1};
        if (model.omega != 0.0) ids.push_back(ConditionId::KGM2);
        ids.push_back(ConditionId::KGM3);
        ids.push_back(ConditionId::AMP);
        return ids;
    }
    if (model.m == 0.0) return {ConditionId::KGM1, ConditionId::QB2, ConditionId::KGM3, ConditionId::AMP};
    return {ConditionId::KGM1, ConditionId::KGM3, ConditionId::AMP};
}

GeneralVerdict classify_general(const ModelConfig& model, const CheckOptions& opts)
{
    GeneralVerdict out;
    for (ConditionId c : applicable_conditions(model)) out.per_condition.push_back(check_condition(model, c, opts));

    const auto& per = out.per_condition;
    auto first_with = [&](VerdictStatus s) {
        return std::find_if(per.begin(), per.end(), [s](const NoGoVerdict& v) { return v.status == s; });
    };

    if (auto it = first_with(VerdictStatus::Excluded); it != per.end()) {
        out.aggregate.status = VerdictStatus::Excluded;
        out.aggregate.condition = it->condition;
        out.aggregate.margin = it->margin;
    } else if (auto inc = first_with(VerdictStatus::Inconclusive); inc != per.end()) {
        out.aggregate.status = VerdictStatus::Inconclusive;
        out.aggregate.condition = inc->condition;
        out.aggregate.margin = inc->margin;
        for (const auto& v : per) {
            if (v.status == VerdictStatus::Inconclusive) out.aggregate.margin = std::min(out.aggregate.margin, v.margin);
        }
    } else {
        out.aggregate.status = VerdictStatus::NotExcluded;
        out.aggregate.condition = "all";
        out.aggregate.witness = per.front().witness;
        out.aggregate.margin = per.front().margin;
        for (const auto& v : per) out.aggregate.margin = std::min(out.aggregate.margin, v.margin);
    }
    return out;
}

}  // namespace kgm
