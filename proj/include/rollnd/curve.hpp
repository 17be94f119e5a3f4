#ifndef ROLLND_CURVE_HPP
#define ROLLND_CURVE_HPP

#include <Eigen/Dense>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

namespace rollnd {

using Eigen::MatrixXd;
using Eigen::VectorXd;

/// A curve on a time grid: xi holds one chart point per row, dxi the
/// corresponding derivatives.
struct SampledCurve {
    VectorXd t;
    MatrixXd xi;
    MatrixXd dxi;
    bool arc_length = false;
    bool closed = false;

    int dim() const { return static_cast<int>(xi.cols()); }
    int size() const { return static_cast<int>(t.size()); }
    double t0() const { return t(0); }
    double t1() const { return t(t.size() - 1); }
    double step() const { return (t1() - t0()) / (size() - 1); }
};

/// Evaluable curve: analytic families evaluate exactly, sampled curves go
/// through cubic Hermite interpolation.
class CurvePath {
public:
    virtual ~CurvePath() = default;
    virtual int dim() const = 0;
    virtual VectorXd point(double t) const = 0;
    virtual VectorXd velocity(double t) const = 0;
    double t0() const { return t0_; }
    double t1() const { return t1_; }
    bool closed = false;
    bool arc_length = false;

    /// Samples onto a uniform grid with N intervals.
    SampledCurve sample(int N) const;
    /// Samples with step at most h.
    SampledCurve sample_step(double h) const;

protected:
    CurvePath(double t0, double t1) : t0_(t0), t1_(t1) {}
    double t0_, t1_;
};

using CurvePtr = std::shared_ptr<const CurvePath>;

class AnalyticCurve final : public CurvePath {
public:
    using Fn = std::function<VectorXd(double)>;
    AnalyticCurve(int dim, double t0, double t1, Fn point, Fn velocity)
        : CurvePath(t0, t1), dim_(dim), point_(std::move(point)),
          velocity_(std::move(velocity)) {}
    int dim() const override { return dim_; }
    VectorXd point(double t) const override { return point_(t); }
    VectorXd velocity(double t) const override { return velocity_(t); }

private:
    int dim_;
    Fn point_, velocity_;
};

/// Cubic Hermite interpolant of a SampledCurve (uniform grid). Derivatives
/// are finite-differenced when the curve carries none.
class HermiteCurve final : public CurvePath {
public:
    explicit HermiteCurve(SampledCurve c);
    int dim() const override { return static_cast<int>(data_.xi.cols()); }
    VectorXd point(double t) const override;
    VectorXd velocity(double t) const override;
    const SampledCurve& data() const { return data_; }

private:
    SampledCurve data_;
};

CurvePtr make_path(const SampledCurve& c);

/// Builtin analytic test curves. Families:
///   line:       n, len, plus optional direction d1..dn (default e1)
///   circle:     r (radius), len (default full turn), n >= 2; unit speed, in
///               the first coordinate plane
///   latitude:   colat, len (default full loop); stereographic sphere chart
///   greatcircle: len; geodesic through the stereographic chart center
///   helix:      kappa, tau, len; unit-speed helix in R^3
///   clothoid:   len; planar curve with curvature kappa_1(t) = t
///   trig:       n, len, seed, amp; random trigonometric polynomial
///   trig_su2:   len, seed, amp; normalized random quaternion path on S^3
/// Throws std::invalid_argument for unknown families or bad parameters.
CurvePtr builtin_curve(const std::string& family,
                       const std::map<std::string, double>& params = {});

/// The two flat-junction curves used for the isolated-regularity-failure
/// tests, on t in [-1, 1]: (t, exp(-1/t^2), 0) and the partner whose bump
/// switches from the second to the third coordinate at t = 0.
std::pair<CurvePtr, CurvePtr> exonepoint_pair();

/// Parses "family:key=val,key=val".
CurvePtr parse_curve_arg(const std::string& arg);

/// Curve CSV: header t, xi_1..xi_n[, dxi_1..dxi_n].
SampledCurve read_curve_csv(const std::string& path);
void write_curve_csv(const std::string& path, const SampledCurve& c);

}  // namespace rollnd

#endif
