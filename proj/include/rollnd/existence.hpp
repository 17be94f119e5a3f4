#ifndef ROLLND_EXISTENCE_HPP
#define ROLLND_EXISTENCE_HPP

#include <complex>

#include "rollnd/curve.hpp"
#include "rollnd/manifold.hpp"
#include "rollnd/rolling.hpp"

namespace rollnd {

struct ExistenceVerdict {
    bool accepted = false;
    std::string method;  // curvature2d, curvatureND, antidev_so_n
    MatrixXd iota;       // SO(n) witness when the anti-development route accepts
    double residual = 0.0;
    bool degenerate = false;          // both curves constant
    bool orientation_mismatch = false;  // best orthogonal fit needs det -1
    std::string details;
};

struct ExistenceOptions {
    double step = 1e-3;
    double tol_curv = 1e-4;   // curvature-matching gate
    double tol_gen = 1e-5;    // anti-development gate (derivatives)
    double eps_reg = 1e-7;
};

/// Existence verdict via matching geodesic curvatures, for curves regular
/// enough to carry a full Frenet apparatus. Both curves are reparametrized
/// by arc length; profiles are compared over the common length. Refuses
/// (throws) on regularity failure -- use exists_general then.
ExistenceVerdict exists_by_curvature(const Manifold& M, const Manifold& Mhat,
                                     const CurvePath& x, const CurvePath& xhat,
                                     const ExistenceOptions& opts = {});

/// Existence verdict via anti-developments: accepted iff some iota in SO(n)
/// maps y'(t) onto yhat'(t) (and the integrated traces match). Works for
/// any C^1 pair on a shared parameter interval.
ExistenceVerdict exists_general(const Manifold& M, const Manifold& Mhat,
                                const CurvePath& x, const CurvePath& xhat,
                                const ExistenceOptions& opts = {});

struct LoopReport {
    double theta = 0.0;   // holonomy angle, (-pi, pi]
    double alpha = 0.0;   // total turning, integral of k_g
    std::complex<double> closure_integral{0.0, 0.0};
    bool config_loop = false;
    bool c1_loop = false;
    bool closed = false;  // geometric closure of the input
};

struct LoopOptions {
    double step = 1e-3;
    double tol_loop = 1e-5;    // closure-integral magnitude gate
    double tol_angle = 1e-6;   // mod-2pi angle comparisons
    double tol_close = 1e-6;
    double c2_jump = 0.1;      // adjacent-node k_g jump treated as a corner
};

/// Loop diagnostics on a surface (n = 2): holonomy angle, total turning,
/// and the closure integral int exp(i int k_g) dt. Open curves are allowed
/// (the integrals are still reported) but can never be configuration loops.
/// Throws when a k_g jump marks the curve as not C^2.
LoopReport loop_check(const Manifold& M, const CurvePath& x,
                      const LoopOptions& opts = {});

struct LoopInQReport {
    bool in_Q = false;
    double angle = 0.0;      // alpha + theta for x, mod 2pi
    double angle_hat = 0.0;  // same for xhat
};

/// Whether the pair of loops lifts to a continuous loop in the configuration
/// space: the oriented angles swept by the tangents (total turning plus
/// holonomy) must agree mod 2pi. The oriented angle from a to b is the one
/// rotating a onto b counterclockwise in the frame orientation.
LoopInQReport loop_in_Q(const Manifold& M, const CurvePath& x,
                        const Manifold& Mhat, const CurvePath& xhat,
                        const LoopOptions& opts = {});

struct JunctionOptions {
    double step = 1e-3;
    double eps_extend = 1e-4;  // curvature level below which a node is skipped
};

/// Junction test at an interior parameter b: Frenet frames of the two halves
/// are extended to b (quadratic extrapolation from the nearest nodes where
/// the apparatus is nondegenerate) and the Gram matrices compared:
/// G_ij = <v_i(b-), w_j(b+)> - <vhat_i(b-), what_j(b+)>, over the levels
/// available on all four half-curves. A rolling forces G = 0.
MatrixXd junction_compatibility(const Manifold& M, const Manifold& Mhat,
                                const CurvePath& x, const CurvePath& xhat,
                                double b, const JunctionOptions& opts = {});

/// Dimension of the minimal parallel subspace the curve's anti-development
/// spans: the numerical rank of the sample matrix {y'(t_i)}.
int minimal_parallel_rank(const Manifold& M, const CurvePath& x,
                          const ExistenceOptions& opts = {});

struct EuclideanIsometry {
    bool accepted = false;
    MatrixXd iota;
    VectorXd b;
    double residual = 0.0;
    bool orientation_mismatch = false;
};

/// Direct isometry extraction for curves in flat charts: Procrustes on the
/// derivatives plus the translation fixing the starting points.
EuclideanIsometry extract_euclidean_isometry(const SampledCurve& x,
                                             const SampledCurve& xhat,
                                             double tol_gen = 1e-5);

}  // namespace rollnd

#endif
