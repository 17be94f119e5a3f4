#ifndef ROLLND_TRANSPORT_HPP
#define ROLLND_TRANSPORT_HPP

#include "rollnd/curve.hpp"
#include "rollnd/manifold.hpp"

namespace rollnd {

struct Options {
    double step = 1e-3;       // RK4 step (in curve parameter)
    double tol_close = 1e-6;  // loop closure tolerance
};

struct IntegrationStatus {
    bool complete = true;
    double exit_time = 0.0;
    std::string message;
};

/// Orthonormal frame along a curve, one SO(n) matrix per grid node.
/// R(t) holds the frame components: f_j(t) = sum_i R_ij(t) e_i(x(t)).
struct FrameCurve {
    VectorXd t;
    std::vector<MatrixXd> R;
    const MatrixXd& front() const { return R.front(); }
    const MatrixXd& back() const { return R.back(); }
};

struct TransportResult {
    VectorXd t;
    MatrixXd v;  // frame components per row
};

/// Solves v' = -sum_k u_k Gamma_k v along the curve (covariantly constant).
TransportResult parallel_transport(const Manifold& M, const CurvePath& c,
                                   const VectorXd& v0, const Options& opts = {});

/// Transports a whole frame; R is re-orthonormalized each step.
FrameCurve parallel_frame(const Manifold& M, const CurvePath& c,
                          const MatrixXd& R0, const Options& opts = {});

struct AntiDevelopment {
    SampledCurve y;    // flat trace, y(0) = 0
    FrameCurve frame;  // the parallel frame used
};

/// y(t) = int_0^t R(s)^T u(s) ds, the flat trace of the curve read in the
/// parallel frame.
AntiDevelopment antidevelop(const Manifold& M, const CurvePath& c,
                            const MatrixXd& R0, const Options& opts = {});

struct DevelopResult {
    SampledCurve x;
    FrameCurve frame;
    IntegrationStatus status;
};

/// Inverse construction: integrates xi' = phi R y', R' = -sum_k u_k Gamma_k R
/// with u = R y'. Stops early (with diagnostics) on chart exit.
DevelopResult develop(const Manifold& M, const CurvePath& y, const VectorXd& xi0,
                      const MatrixXd& R0, const Options& opts = {});

struct HolonomyResult {
    MatrixXd H;          // R(0)^T R(tau): initial to final frame components
    double angle = 0.0;  // n = 2 only: atan2(H_21, H_11)
};

/// Holonomy of a closed loop. Throws if the loop fails the closure tolerance.
HolonomyResult holonomy(const Manifold& M, const CurvePath& loop,
                        const MatrixXd& R0, const Options& opts = {});

}  // namespace rollnd

#endif
