#ifndef ROLLND_UTIL_HPP
#define ROLLND_UTIL_HPP

#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <vector>

namespace rollnd {

using Eigen::MatrixXd;
using Eigen::VectorXd;

/// Time derivative of row-wise samples on a uniform grid of spacing h.
/// Interior points use the 4th-order central stencil, the two points at
/// each end fall back to 2nd-order one-sided stencils.
MatrixXd fd_derivative(const MatrixXd& samples, double h);

/// Cumulative integral F(t_i) = int_{t_0}^{t_i} f dt on a uniform grid,
/// corrected trapezoid rule (Hermite-exact, 4th order). F(t_0) = 0.
VectorXd cumulative_integral(const VectorXd& f, double h);

/// Definite integral over the full grid, same rule as cumulative_integral.
double integrate(const VectorXd& f, double h);

/// Re-orthonormalize the columns of a near-orthogonal matrix by modified
/// Gram-Schmidt. Keeps the orientation of the input.
MatrixXd project_orthogonal(const MatrixXd& A);

/// Wrap an angle to the representative in (-pi, pi].
double wrap_angle(double a);

/// Weighted orthogonal Procrustes fit: the rotation R with det +1
/// minimizing sum_i w_i |Y_i - R X_i|^2 over columns of X, Y.
/// If reflection_best is non-null it is set when the unconstrained
/// orthogonal optimum has det -1.
MatrixXd procrustes_rotation(const MatrixXd& X, const MatrixXd& Y,
                             const VectorXd& w, bool* reflection_best = nullptr);

/// Classical RK4 with N uniform steps on [t0, t1]. Returns the (N+1) x dim
/// matrix of states, one row per grid node. post_step, when given, may
/// normalize the state in place after each step (and on the initial state).
MatrixXd rk4(double t0, double t1, int N, const VectorXd& s0,
             const std::function<VectorXd(double, const VectorXd&)>& rhs,
             const std::function<void(VectorXd&)>& post_step = nullptr);

/// One classical RK4 step of size h from state s at time t.
VectorXd rk4_step(double t, double h, const VectorXd& s,
                  const std::function<VectorXd(double, const VectorXd&)>& rhs);

/// Completes v_1..v_{n-1} (columns) to a positively oriented basis:
/// returns c with det[V c] = |c|^2 > 0, the generalized cross product.
VectorXd generalized_cross(const MatrixXd& V);

/// Adaptive Simpson quadrature, used by test oracles and arc-length checks.
double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double tol = 1e-12, int max_depth = 40);

}  // namespace rollnd

#endif
