#ifndef ROLLND_MANIFOLD_HPP
#define ROLLND_MANIFOLD_HPP

#include <Eigen/Dense>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

namespace rollnd {

using Eigen::MatrixXd;
using Eigen::VectorXd;

/// A chart-based manifold model: an orthonormal frame field e_1..e_n given
/// through its chart components phi (so e_j = sum_i phi_ij d/dxi_i) and the
/// frame Christoffel matrices Gamma_k with (Gamma_k)_ij = <e_i, nabla_{e_k} e_j>.
///
/// The chart state is usually a point of R^n, but a model may embed its chart
/// in a larger state space (state_dim > n); the unit-quaternion model of S^3
/// does this. In that case phi is state_dim x n with orthonormal columns.
class Manifold {
public:
    virtual ~Manifold() = default;

    const std::string& name() const { return name_; }
    int dim() const { return n_; }
    virtual int state_dim() const { return n_; }

    /// Chart components of the frame: state_dim x n matrix phi(xi).
    virtual MatrixXd frame(const VectorXd& xi) const = 0;

    /// Frame Christoffel matrices Gamma_1..Gamma_n, each n x n antisymmetric.
    virtual std::vector<MatrixXd> christoffel(const VectorXd& xi) const = 0;

    virtual bool in_domain(const VectorXd& xi) const;

    /// Frame components of a chart velocity: u with dxi = phi(xi) u.
    virtual VectorXd to_frame(const VectorXd& xi, const VectorXd& dxi) const;
    VectorXd from_frame(const VectorXd& xi, const VectorXd& u) const {
        return frame(xi) * u;
    }

    /// Hook for models whose state needs renormalization between steps.
    virtual void normalize_state(VectorXd&) const {}

    /// Riemannian inner product of two chart vectors at xi.
    double inner(const VectorXd& xi, const VectorXd& v, const VectorXd& w) const;

    /// Chart-exit bound on |xi|; integrators abort past this.
    double chart_bound() const { return chart_bound_; }
    void set_chart_bound(double b) { chart_bound_ = b; }

protected:
    Manifold(std::string name, int n) : name_(std::move(name)), n_(n) {}
    std::string name_;
    int n_;
    double chart_bound_ = 1e3;
};

using ManifoldPtr = std::shared_ptr<const Manifold>;

/// Builtin models: euclidean, sphere_stereo, hyperbolic_halfplane, su2.
/// params may supply "n" (euclidean and sphere_stereo; hyperbolic is n=2,
/// su2 is n=3). Throws std::invalid_argument on unknown names or bad n.
ManifoldPtr builtin_manifold(const std::string& name,
                             const std::map<std::string, double>& params = {});

/// Model defined by frame samples on a rectangular tensor grid, multilinearly
/// interpolated. Christoffels are interpolated from samples when given,
/// otherwise finite-differenced from the interpolated metric.
ManifoldPtr grid_manifold(int n, const std::vector<VectorXd>& axes,
                          const std::vector<MatrixXd>& frame_samples,
                          const std::vector<std::vector<MatrixXd>>& gamma_samples = {},
                          double fd_step = 1e-5);

/// Loads a manifold spec file (key = value lines; see README for fields),
/// resolving grid CSV paths relative to the spec file.
ManifoldPtr load_manifold_spec(const std::string& path);

/// Accepts either "name", "name:n" or a spec-file path.
ManifoldPtr parse_manifold_arg(const std::string& arg);

struct ModelReport {
    double max_antisymmetry = 0.0;   // max ||Gamma_k + Gamma_k^T||_inf
    double min_det_frame = 0.0;      // over sample points (square charts)
    double max_condition = 0.0;      // condition number of phi
    double max_torsion_residual = 0.0;  // vs finite-difference Levi-Civita
    bool torsion_checked = false;
};

/// Report-only diagnostics over a list of chart points. The torsion check
/// rebuilds the Christoffels from the metric (phi phi^T)^{-1} by central
/// finite differences and reports the largest deviation; it is skipped for
/// non-square charts.
ModelReport check_model(const Manifold& M, const std::vector<VectorXd>& points,
                        double fd_step = 1e-5);

/// Frame Christoffels of the Levi-Civita connection recovered from a frame
/// field by 4th-order central finite differences. Used by check_model and by
/// grid models without supplied Christoffels.
std::vector<MatrixXd> christoffel_from_frame_fd(
    const std::function<MatrixXd(const VectorXd&)>& frame, const VectorXd& xi,
    double h);

}  // namespace rollnd

#endif
