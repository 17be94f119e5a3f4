#ifndef ROLLND_FRENET_HPP
#define ROLLND_FRENET_HPP

#include "rollnd/curve.hpp"
#include "rollnd/manifold.hpp"
#include "rollnd/transport.hpp"

namespace rollnd {

/// D/dt w = w' + sum_k u_k Gamma_k w in frame components along c, with w'
/// by finite differences on c's (uniform) grid. w has one sample per row.
MatrixXd covariant_derivative(const Manifold& M, const SampledCurve& c,
                              const MatrixXd& w);

struct FrenetOptions {
    double eps_reg = 1e-7;      // relative regularity threshold
    double eps_speed = 1e-10;   // vanishing-speed threshold
};

/// Frenet fields and geodesic curvatures of a unit-speed curve. The fields
/// are stored in frame components, one n x n matrix per grid node with the
/// fields as columns; kappa holds kappa_1..kappa_{n-1} per row. kappa_1..
/// kappa_{n-2} are positive by construction, kappa_{n-1} is signed by the
/// orientation of the completed frame.
struct FrenetData {
    VectorXd t;
    std::vector<MatrixXd> v;
    MatrixXd kappa;
    bool complete = true;
    double failure_time = 0.0;  // first grid time where a curvature degenerates
    int failure_level = 0;      // which kappa_j dropped below threshold

    /// The antisymmetric tridiagonal curvature matrix at node i:
    /// K(j+1, j) = kappa_{j+1}, so that D v_j = sum_l v_l K_{lj}.
    MatrixXd K(int i) const;
};

FrenetData frenet_apparatus(const Manifold& M, const SampledCurve& c,
                            const FrenetOptions& opts = {});

/// Resamples c by arc length in the metric of M; opts.step is both the
/// scan resolution and the target output spacing.
SampledCurve reparametrize_arclength(const Manifold& M, const CurvePath& c,
                                     const Options& opts = {},
                                     const FrenetOptions& fopts = {});

struct RegularityReport {
    int order = 1;
    std::vector<double> failure_times;  // grid times where order+1 fails
};

/// Largest k such that {x', Dx', ..., D^k x'} stay linearly independent
/// (relative singular-value test) at every grid node; floored at 1 for a
/// curve with nonvanishing speed.
RegularityReport regularity_order(const Manifold& M, const SampledCurve& c,
                                  double eps_reg = 1e-7);

}  // namespace rollnd

#endif
