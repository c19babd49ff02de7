#include "kgm/profile.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace kgm {

RadialProfile RadialProfile::zeros(const ModelConfig& model, double r_max, Eigen::Index n)
{
    if (!(r_max > 0.0) || !std::isfinite(r_max)) throw std::invalid_argument("R_max must be positive and finite");
    if (n < 5) throw std::invalid_argument("grid needs at least 5 points");
    RadialProfile p;
    p.r = Eigen::VectorXd::LinSpaced(n, 0.0, r_max);
    p.phi = Eigen::VectorXd::Zero(n);
    p.a0 = Eigen::VectorXd::Zero(n);
    p.model = model;
    return p;
}

void RadialProfile::validate(Eigen::Index min_points) const
{
    if (r.size() < min_points) {
        throw std::invalid_argument("profile grid has " + std::to_string(r.size()) + " points, need at least "
                                    + std::to_string(min_points));
    }
    if (phi.size() != r.size() || a0.size() != r.size()) {
        throw std::invalid_argument("profile arrays differ in length");
    }
    if (r(0) != 0.0) throw std::invalid_argument("profile grid must start at r = 0");
    const double h = spacing();
    if (!(h > 0.0)) throw std::invalid_argument("profile grid must be strictly increasing");
    for (Eigen::Index i = 1; i < r.size(); ++i) {
        if (std::abs((r(i) - r(i - 1)) - h) > 1e-9 * h * std::max<double>(1.0, static_cast<double>(i))) {
            throw std::invalid_argument("profile grid must be uniform");
        }
    }
    if (!phi.allFinite() || !a0.allFinite()) throw std::invalid_argument("profile contains non-finite values");
}

namespace grid {

Eigen::VectorXd radial_laplacian(const Eigen::Ref<const Eigen::VectorXd>& f, double h)
{
    const Eigen::Index n = f.size();
    Eigen::VectorXd out = Eigen::VectorXd::Zero(n);
    const double inv_h2 = 1.0 / (h * h);
    out(0) = 6.0 * (f(1) - f(0)) * inv_h2;
    for (Eigen::Index i = 1; i + 1 < n; ++i) {
        const double ri = static_cast<double>(i) * h;
        out(i) = (f(i + 1) - 2.0 * f(i) + f(i - 1)) * inv_h2 + (f(i + 1) - f(i - 1)) / (h * ri);
    }
    return out;
}

double coulomb_boundary_laplacian(const Eigen::Ref<const Eigen::VectorXd>& f, double h)
{
    const Eigen::Index n = f.size();
    const double R = static_cast<double>(n - 1) * h;
    const double fl = f(n - 1);
    const double fm = f(n - 2);
    return (2.0 * fm - 2.0 * fl - 2.0 * h * fl / R) / (h * h) - 2.0 * fl / (R * R);
}

Eigen::VectorXd even_derivative(const Eigen::Ref<const Eigen::VectorXd>& f, double h)
{
    const Eigen::Index n = f.size();
    if (n < 5) throw std::invalid_argument("derivative needs at least 5 points");
    auto at = [&](Eigen::Index i) { return f(i < 0 ? -i : i); };
    Eigen::VectorXd d(n);
    const double c = 1.0 / (12.0 * h);
    for (Eigen::Index i = 0; i + 2 < n; ++i) {
        d(i) = (at(i - 2) - 8.0 * at(i - 1) + 8.0 * f(i + 1) - f(i + 2)) * c;
    }
    d(n - 2) = (3.0 * f(n - 1) + 10.0 * f(n - 2) - 18.0 * f(n - 3) + 6.0 * f(n - 4) - f(n - 5)) * c;
    d(n - 1) = (25.0 * f(n - 1) - 48.0 * f(n - 2) + 36.0 * f(n - 3) - 16.0 * f(n - 4) + 3.0 * f(n - 5)) * c;
    d(0) = 0.0;
    return d;
}

Eigen::VectorXd radial_weights(const Eigen::Ref<const Eigen::VectorXd>& r)
{
    const Eigen::Index n = r.size();
    if (n < 4) throw std::invalid_argument("quadrature needs at least 4 points");
    const double h = r(1) - r(0);
    Eigen::VectorXd w = Eigen::VectorXd::Zero(n);
    const Eigen::Index intervals = n - 1;
    const Eigen::Index simpson_end = (intervals % 2 == 0) ? intervals : intervals - 3;
    for (Eigen::Index i = 0; i + 2 <= simpson_end; i += 2) {
        w(i) += h / 3.0;
        w(i + 1) += 4.0 * h / 3.0;
        w(i + 2) += h / 3.0;
    }
    if (simpson_end != intervals) {
        const Eigen::Index s = simpson_end;
        w(s) += 3.0 * h / 8.0;
        w(s + 1) += 9.0 * h / 8.0;
        w(s + 2) += 9.0 * h / 8.0;
        w(s + 3) += 3.0 * h / 8.0;
    }
    return (4.0 * M_PI) * w.cwiseProduct(r.cwiseAbs2());
}

double interpolate_even(const Eigen::Ref<const Eigen::VectorXd>& f, double h, double x)
{
    const Eigen::Index n = f.size();
    const double s = x / h;
    Eigen::Index i = static_cast<Eigen::Index>(std::floor(s));
    if (i >= n - 1) {
        if (s > static_cast<double>(n - 1) * (1.0 + 1e-12)) throw std::out_of_range("interpolation beyond grid");
        return f(n - 1);
    }
    // Nodes i-1, i, i+1, i+2; shift the stencil inward at the outer edge.
    Eigen::Index start = std::min<Eigen::Index>(i - 1, n - 4);
    auto at = [&](Eigen::Index j) { return f(j < 0 ? -j : j); };
    const double t = s - static_cast<double>(start);
    const double l0 = -(t - 1.0) * (t - 2.0) * (t - 3.0) / 6.0;
    const double l1 = t * (t - 2.0) * (t - 3.0) / 2.0;
    const double l2 = -t * (t - 1.0) * (t - 3.0) / 2.0;
    const double l3 = t * (t - 1.0) * (t - 2.0) / 6.0;
    return l0 * at(start) + l1 * at(start + 1) + l2 * at(start + 2) + l3 * at(start + 3);
}

}  // namespace grid

double coulomb_tail_spread(const RadialProfile& profile)
{
    const Eigen::Index n = profile.size();
    const Eigen::Index first = n - std::max<Eigen::Index>(n / 10, 2);
    const Eigen::VectorXd q = profile.r.tail(n - first).cwiseProduct(profile.a0.tail(n - first));
    const double scale = q.cwiseAbs().maxCoeff();
    if (scale == 0.0) return 0.0;
    return (q.maxCoeff() - q.minCoeff()) / scale;
}

int count_nodes(const Eigen::Ref<const Eigen::VectorXd>& phi)
{
    int nodes = 0;
    double last = 0.0;
    for (double v : phi) {
        if (v == 0.0) continue;
        if (last != 0.0 && (v > 0.0) != (last > 0.0)) ++nodes;
        last = v;
    }
    return nodes;
}

}  // namespace kgm
