#ifndef KGM_PROFILE_HPP
#define KGM_PROFILE_HPP

#include "kgm/potential.hpp"

#include <Eigen/Core>

namespace kgm {

/// Radial fields phi(r), A0(r) sampled on a uniform grid r_i = i h,
/// i = 0..N-1, with r_0 = 0 and r_{N-1} = R_max.
struct RadialProfile {
    Eigen::VectorXd r;
    Eigen::VectorXd phi;
    Eigen::VectorXd a0;
    ModelConfig model;
    /// Relative max-norm of the discretized equations of motion.
    double ode_residual = 0.0;

    /// Zero fields on N uniformly spaced points of [0, r_max].
    static RadialProfile zeros(const ModelConfig& model, double r_max, Eigen::Index n);

    Eigen::Index size() const { return r.size(); }
    double spacing() const { return r(1) - r(0); }
    double r_max() const { return r(r.size() - 1); }

    /// Throws std::invalid_argument unless the grid is uniform, starts at 0,
    /// has at least `min_points` points, and all arrays agree in size.
    void validate(Eigen::Index min_points = 3) const;
};

/// Field rescaling phi(r) -> lambda^alpha phi(lambda r),
/// A0(r) -> lambda^beta A0(lambda r).
struct ScalingParams {
    double alpha = 0.0;
    double beta = 0.0;
    double lambda = 1.0;
};

namespace grid {

/// Discrete f'' + (2/r) f' on a uniform grid with f'(0) = 0 (the r = 0 row
/// uses the regular limit 3 f''(0)). Rows 0..N-2 only; row N-1 is left 0.
Eigen::VectorXd radial_laplacian(const Eigen::Ref<const Eigen::VectorXd>& f, double h);

/// Row N-1 of the radial Laplacian with the Coulomb condition
/// f'(R) = -f(R)/R imposed through a ghost point.
double coulomb_boundary_laplacian(const Eigen::Ref<const Eigen::VectorXd>& f, double h);

/// Fourth-order first derivative of an even function sampled on the grid.
Eigen::VectorXd even_derivative(const Eigen::Ref<const Eigen::VectorXd>& f, double h);

/// Composite Simpson weights for 4 pi int_0^R r^2 f(r) dr on the uniform
/// grid (3/8 rule on the last panel when the interval count is odd).
Eigen::VectorXd radial_weights(const Eigen::Ref<const Eigen::VectorXd>& r);

template <typename Derived>
double radial_integral(const Eigen::VectorXd& weights, const Eigen::MatrixBase<Derived>& f)
{
    return weights.dot(f.derived());
}

/// Cubic (4-point Lagrange) interpolation of an even function at x in
/// [0, R]; mirror points are used near r = 0.
double interpolate_even(const Eigen::Ref<const Eigen::VectorXd>& f, double h, double x);

}  // namespace grid

/// Relative spread of r A0(r) over the outer tenth of the grid; small values
/// indicate the Coulomb tail A0 ~ Q/r has been reached. 0 for A0 == 0.
double coulomb_tail_spread(const RadialProfile& profile);

/// Number of strict sign changes of phi over the grid.
int count_nodes(const Eigen::Ref<const Eigen::VectorXd>& phi);

}  // namespace kgm

#endif  // KGM_PROFILE_HPP
