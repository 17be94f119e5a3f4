#ifndef ROLLND_ROLLING_HPP
#define ROLLND_ROLLING_HPP

#include "rollnd/curve.hpp"
#include "rollnd/manifold.hpp"
#include "rollnd/transport.hpp"

namespace rollnd {

/// A rolling of M on M_hat along the base curve xi: one chart point per row
/// for both curves and one SO(n) matrix q per node. q maps frame components
/// on M to frame components on M_hat; under a change of frame fields it
/// conjugates by the corresponding SO(n) transition matrices.
struct RollingTrajectory {
    VectorXd t;
    MatrixXd xi;
    MatrixXd xihat;
    std::vector<MatrixXd> q;
    IntegrationStatus status;

    int size() const { return static_cast<int>(t.size()); }
    double step() const { return (t(t.size() - 1) - t(0)) / (t.size() - 1); }
};

/// Integrates the coupled rolling system
///   xi_hat' = phi_hat q u,   q' = q (sum_l u_l Gamma_l) - (sum_s uhat_s
///   Gammahat_s) q,  uhat = q u
/// driven by the base curve x. Chart exit on M_hat truncates the trajectory
/// and reports the exit time instead of throwing.
RollingTrajectory roll_along(const Manifold& M, const Manifold& Mhat,
                             const CurvePath& x, const MatrixXd& q0,
                             const VectorXd& xihat0, const Options& opts = {});

struct RollingReport {
    double max_noslip = 0.0;
    double max_notwist = 0.0;
    double max_so_drift = 0.0;
    bool complete = true;
    double exit_time = 0.0;
};

/// Measures the rolling axioms on a trajectory: the no-slip residual
/// pointwise, the no-twist residual on `probes` random parallel fields, and
/// the SO(n) drift of q. Velocities are recomputed by finite differences so
/// the report reflects the stored samples, not the integrator's arithmetic.
RollingReport verify_rolling(const Manifold& M, const Manifold& Mhat,
                             const RollingTrajectory& traj, int probes = 3,
                             unsigned seed = 1234);

/// Transitivity: chains a rolling of M on M_hat with one of M_hat on
/// M_tilde over the same grid. Throws if the middle curves disagree.
RollingTrajectory compose_rollings(const RollingTrajectory& q1,
                                   const RollingTrajectory& q2,
                                   double tol = 1e-6);

/// Trajectory CSV: header t, xi_1.., xihat_1.., q_11..q_nn (row-major).
void write_trajectory_csv(const std::string& path, const RollingTrajectory& traj);
RollingTrajectory read_trajectory_csv(const std::string& path, int dim_m,
                                      int dim_mhat, int n);

}  // namespace rollnd

#endif
