#ifndef ROLLND_SYNTHESIS_HPP
#define ROLLND_SYNTHESIS_HPP

#include "rollnd/curve.hpp"
#include "rollnd/manifold.hpp"
#include "rollnd/rolling.hpp"
#include "rollnd/transport.hpp"

namespace rollnd {

/// Geodesic-curvature data driving the synthesis: kappa_1..kappa_{n-1} as
/// functions of arc length. Sampled profiles are interpolated cubically, so
/// only continuity is assumed of the data.
class CurvatureProfile {
public:
    using Fn = std::function<VectorXd(double)>;

    /// Analytic profile on [t0, t1]; fn returns the n-1 curvatures.
    CurvatureProfile(int n, double t0, double t1, Fn fn);
    /// Constant profile.
    CurvatureProfile(int n, double t0, double t1, const VectorXd& values);
    /// Sampled profile, one row of curvatures per node on a uniform grid.
    CurvatureProfile(const VectorXd& t, const MatrixXd& kappa_samples);

    int dim() const { return n_; }  // ambient dimension
    double t0() const { return t0_; }
    double t1() const { return t1_; }
    VectorXd kappa(double t) const;
    /// Antisymmetric tridiagonal K(t): subdiagonal +kappa_j, superdiagonal
    /// -kappa_j, zero diagonal.
    MatrixXd K(double t) const;

private:
    int n_;
    double t0_, t1_;
    Fn fn_;
};

struct SynthesisResult {
    SampledCurve x;     // unit-speed output curve
    FrameCurve frame;   // a(t) in SO(n), first column = frame velocity
    IntegrationStatus status;
};

/// Integrates the synthesis system xi_hat' = phi_hat a e_1,
/// a' = a K - sum_s a_s1 Gammahat_s a from curvature data. Negative
/// kappa_1..kappa_{n-2} are rejected; zeros are fine (geodesic directions).
SynthesisResult synthesize_curve(const Manifold& Mhat, const CurvatureProfile& profile,
                                 const VectorXd& xhat0, const MatrixXd& a0,
                                 const Options& opts = {});

/// Full synthesis route to a rolling: Frenet data of x, synthesized image
/// with ahat0 = q0 V(0), and q(t) assembled from the two Frenet frames.
RollingTrajectory synthesize_rolling(const Manifold& M, const Manifold& Mhat,
                                     const CurvePath& x, const MatrixXd& q0,
                                     const VectorXd& xhat0, const Options& opts = {});

/// Flat-space shortcut: the classical Frenet-Serret system a' = a K.
SynthesisResult backend_euclidean(const CurvatureProfile& profile,
                                  const VectorXd& xhat0, const MatrixXd& a0,
                                  const Options& opts = {});

/// Stereographic-chart shortcut for the round sphere:
/// xi' = ((1+|xi|^2)/2) a e_1, a' = a K + (a_1 xi^T - xi a_1^T) a.
SynthesisResult backend_sphere(const CurvatureProfile& profile,
                               const VectorXd& xhat0, const MatrixXd& a0,
                               const Options& opts = {});

/// Left-invariant S^3 backend (n = 3): the reduced system
/// a' = a (K - [e_1 x]) (which swaps kappa_2 for kappa_2 - 1), then
/// g' = g * Omega(a e_1) with Omega the pure-imaginary quaternion of the
/// frame velocity; g is renormalized every step.
SynthesisResult backend_su2(const CurvatureProfile& profile, const VectorXd& g0,
                            const MatrixXd& a0, const Options& opts = {});

}  // namespace rollnd

#endif
