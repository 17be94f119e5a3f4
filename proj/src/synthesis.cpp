#include "rollnd/synthesis.hpp"

#include <cmath>
#include <stdexcept>

#include "rollnd/frenet.hpp"
#include "rollnd/util.hpp"

namespace rollnd {

CurvatureProfile::CurvatureProfile(int n, double t0, double t1, Fn fn)
    : n_(n), t0_(t0), t1_(t1), fn_(std::move(fn)) {
    if (n < 2) throw std::invalid_argument("CurvatureProfile: n must be >= 2");
    if (!(t1 > t0)) throw std::invalid_argument("CurvatureProfile: empty interval");
}

CurvatureProfile::CurvatureProfile(int n, double t0, double t1, const VectorXd& values)
    : CurvatureProfile(n, t0, t1, [values](double) { return values; }) {
    if (values.size() != n - 1)
        throw std::invalid_argument("CurvatureProfile: need n-1 curvature values");
}

CurvatureProfile::CurvatureProfile(const VectorXd& t, const MatrixXd& kappa_samples)
    : n_(static_cast<int>(kappa_samples.cols()) + 1), t0_(t(0)), t1_(t(t.size() - 1)) {
    if (t.size() != kappa_samples.rows())
        throw std::invalid_argument("CurvatureProfile: grid/sample mismatch");
    SampledCurve c{t, kappa_samples, MatrixXd()};
    auto interp = std::make_shared<HermiteCurve>(c);
    fn_ = [interp](double s) { return interp->point(s); };
}

VectorXd CurvatureProfile::kappa(double t) const { return fn_(t); }

MatrixXd CurvatureProfile::K(double t) const {
    VectorXd k = kappa(t);
    MatrixXd K = MatrixXd::Zero(n_, n_);
    for (int j = 0; j + 1 < n_; ++j) {
        K(j + 1, j) = k(j);
        K(j, j + 1) = -k(j);
    }
    return K;
}

namespace {

void check_profile(const CurvatureProfile& p, const Options& opts) {
    const int n = p.dim();
    int N = std::max(1, static_cast<int>(std::ceil((p.t1() - p.t0()) / opts.step)));
    for (int i = 0; i <= N; ++i) {
        VectorXd k = p.kappa(p.t0() + i * (p.t1() - p.t0()) / N);
        for (int j = 0; j + 2 < n; ++j)
            if (k(j) < 0.0)
                throw std::invalid_argument("synthesize_curve: kappa_" +
                                            std::to_string(j + 1) + " negative");
    }
}

void check_a0(const MatrixXd& a0, int n) {
    if (a0.rows() != n || a0.cols() != n ||
        (a0.transpose() * a0 - MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff() > 1e-6 ||
        a0.determinant() < 0)
        throw std::invalid_argument("synthesis: a0 not in SO(n)");
}

// shared integrator: dxi = chart_velocity(xi, a e1), da = a K + coupling(xi, a)
SynthesisResult integrate_synthesis(
    int n, int m, const CurvatureProfile& profile, const VectorXd& xhat0,
    const MatrixXd& a0, const Options& opts,
    const std::function<VectorXd(const VectorXd&, const VectorXd&)>& chart_velocity,
    const std::function<MatrixXd(const VectorXd&, const MatrixXd&)>& coupling,
    const std::function<bool(const VectorXd&)>& in_domain,
    const std::function<void(VectorXd&)>& normalize) {
    check_profile(profile, opts);
    check_a0(a0, n);
    if (xhat0.size() != m) throw std::invalid_argument("synthesize_curve: bad xhat0 size");
    if (!in_domain(xhat0)) throw std::invalid_argument("synthesize_curve: xhat0 off the chart");

    const int N = std::max(
        1, static_cast<int>(std::ceil((profile.t1() - profile.t0()) / opts.step - 1e-12)));
    const double h = (profile.t1() - profile.t0()) / N;

    auto rhs = [&](double t, const VectorXd& s) {
        VectorXd xi = s.head(m);
        Eigen::Map<const MatrixXd> a(s.data() + m, n, n);
        VectorXd a1 = a.col(0);
        VectorXd ds(m + n * n);
        ds.head(m) = chart_velocity(xi, a1);
        MatrixXd da = a * profile.K(t) + coupling(xi, a);
        ds.tail(n * n) = Eigen::Map<const VectorXd>(da.data(), n * n);
        return ds;
    };
    auto post = [&](VectorXd& s) {
        VectorXd xi = s.head(m);
        normalize(xi);
        s.head(m) = xi;
        Eigen::Map<MatrixXd> a(s.data() + m, n, n);
        a = project_orthogonal(a);
    };

    VectorXd s(m + n * n);
    s.head(m) = xhat0;
    s.tail(n * n) = Eigen::Map<const VectorXd>(a0.data(), n * n);
    post(s);

    SynthesisResult out;
    out.x.t.resize(N + 1);
    out.x.xi.resize(N + 1, m);
    out.x.dxi.resize(N + 1, m);
    out.frame.t.resize(N + 1);
    out.frame.R.reserve(N + 1);
    int last = 0;
    for (int i = 0; i <= N; ++i) {
        double t = profile.t0() + i * h;
        out.x.t(i) = t;
        out.x.xi.row(i) = s.head(m).transpose();
        Eigen::Map<const MatrixXd> a(s.data() + m, n, n);
        out.x.dxi.row(i) = chart_velocity(s.head(m), a.col(0)).transpose();
        out.frame.t(i) = t;
        out.frame.R.push_back(a);
        last = i;
        if (i == N) break;
        VectorXd next = rk4_step(t, h, s, rhs);
        post(next);
        if (!in_domain(next.head(m))) {
            out.status.complete = false;
            out.status.exit_time = t + h;
            out.status.message = "chart exit during synthesis";
            break;
        }
        s = next;
    }
    if (!out.status.complete) {
        out.x.t.conservativeResize(last + 1);
        out.x.xi.conservativeResize(last + 1, m);
        out.x.dxi.conservativeResize(last + 1, m);
        out.frame.t.conservativeResize(last + 1);
    }
    out.x.arc_length = true;
    return out;
}

}  // namespace

SynthesisResult synthesize_curve(const Manifold& Mhat, const CurvatureProfile& profile,
                                 const VectorXd& xhat0, const MatrixXd& a0,
                                 const Options& opts) {
    const int n = Mhat.dim();
    if (profile.dim() != n)
        throw std::invalid_argument("synthesize_curve: profile dimension mismatch");
    return integrate_synthesis(
        n, Mhat.state_dim(), profile, xhat0, a0, opts,
        [&](const VectorXd& xi, const VectorXd& a1) {
            return VectorXd(Mhat.frame(xi) * a1);
        },
        [&](const VectorXd& xi, const MatrixXd& a) {
            auto gam = Mhat.christoffel(xi);
            MatrixXd da = MatrixXd::Zero(n, n);
            for (int s = 0; s < n; ++s) da -= a(s, 0) * (gam[s] * a);
            return da;
        },
        [&](const VectorXd& xi) { return Mhat.in_domain(xi); },
        [&](VectorXd& xi) { Mhat.normalize_state(xi); });
}

RollingTrajectory synthesize_rolling(const Manifold& M, const Manifold& Mhat,
                                     const CurvePath& x, const MatrixXd& q0,
                                     const VectorXd& xhat0, const Options& opts) {
    const int n = M.dim();
    if (Mhat.dim() != n)
        throw std::invalid_argument("synthesize_rolling: dimension mismatch");
    SampledCurve cx = x.arc_length ? x.sample_step(opts.step)
                                   : reparametrize_arclength(M, x, {.step = opts.step});
    auto reg = regularity_order(M, cx);
    if (reg.order < n - 1)
        throw std::invalid_argument(
            "synthesize_rolling: curve not C^(n-1)-regular; use roll_along");
    auto fd = frenet_apparatus(M, cx);
    if (!fd.complete)
        throw std::invalid_argument(
            "synthesize_rolling: Frenet apparatus degenerates; use roll_along");

    CurvatureProfile profile(fd.t, fd.kappa);
    MatrixXd ahat0 = project_orthogonal(q0 * fd.v.front());
    auto syn = synthesize_curve(Mhat, profile, xhat0, ahat0, {.step = cx.step()});

    RollingTrajectory out;
    const int N = syn.x.size();
    out.t = syn.x.t;
    out.xi = cx.xi.topRows(N);
    out.xihat = syn.x.xi;
    out.q.reserve(N);
    for (int i = 0; i < N; ++i)
        out.q.push_back(
            MatrixXd(project_orthogonal(syn.frame.R[i] * fd.v[i].transpose())));
    out.status = syn.status;
    return out;
}

SynthesisResult backend_euclidean(const CurvatureProfile& profile,
                                  const VectorXd& xhat0, const MatrixXd& a0,
                                  const Options& opts) {
    const int n = profile.dim();
    return integrate_synthesis(
        n, n, profile, xhat0, a0, opts,
        [](const VectorXd&, const VectorXd& a1) { return a1; },
        [n](const VectorXd&, const MatrixXd&) { return MatrixXd::Zero(n, n); },
        [](const VectorXd&) { return true; }, [](VectorXd&) {});
}

SynthesisResult backend_sphere(const CurvatureProfile& profile,
                               const VectorXd& xhat0, const MatrixXd& a0,
                               const Options& opts) {
    const int n = profile.dim();
    return integrate_synthesis(
        n, n, profile, xhat0, a0, opts,
        [](const VectorXd& xi, const VectorXd& a1) {
            return VectorXd(0.5 * (1.0 + xi.squaredNorm()) * a1);
        },
        [](const VectorXd& xi, const MatrixXd& a) {
            VectorXd a1 = a.col(0);
            return MatrixXd((a1 * xi.transpose() - xi * a1.transpose()) * a);
        },
        [](const VectorXd& xi) { return xi.norm() < 1e3; }, [](VectorXd&) {});
}

SynthesisResult backend_su2(const CurvatureProfile& profile, const VectorXd& g0,
                            const MatrixXd& a0, const Options& opts) {
    if (profile.dim() != 3) throw std::invalid_argument("backend_su2: needs n = 3");
    if (g0.size() != 4 || std::abs(g0.norm() - 1.0) > 1e-9)
        throw std::invalid_argument("backend_su2: g0 must be a unit quaternion");
    auto quat_mul = [](const VectorXd& p, const VectorXd& q) {
        VectorXd r(4);
        r(0) = p(0) * q(0) - p(1) * q(1) - p(2) * q(2) - p(3) * q(3);
        r(1) = p(0) * q(1) + p(1) * q(0) + p(2) * q(3) - p(3) * q(2);
        r(2) = p(0) * q(2) - p(1) * q(3) + p(2) * q(0) + p(3) * q(1);
        r(3) = p(0) * q(3) + p(1) * q(2) - p(2) * q(1) + p(3) * q(0);
        return r;
    };
    MatrixXd e1x = MatrixXd::Zero(3, 3);  // the constant Gamma term folded into K
    e1x(1, 2) = -1.0;
    e1x(2, 1) = 1.0;
    return integrate_synthesis(
        3, 4, profile, g0, a0, opts,
        [quat_mul](const VectorXd& g, const VectorXd& a1) {
            VectorXd omega(4);
            omega << 0.0, a1(0), a1(1), a1(2);
            return quat_mul(g, omega);
        },
        [e1x](const VectorXd&, const MatrixXd& a) { return MatrixXd(-a * e1x); },
        [](const VectorXd&) { return true; },
        [](VectorXd& g) { g /= g.norm(); });
}

}  // namespace rollnd
