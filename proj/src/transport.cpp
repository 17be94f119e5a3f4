#include "rollnd/transport.hpp"

#include <cmath>
#include <stdexcept>

#include "rollnd/util.hpp"

namespace rollnd {

namespace {

int step_count(const CurvePath& c, const Options& opts) {
    return std::max(1, static_cast<int>(std::ceil((c.t1() - c.t0()) / opts.step - 1e-12)));
}

// frame components of the curve velocity at parameter t
VectorXd frame_velocity(const Manifold& M, const CurvePath& c, double t) {
    return M.to_frame(c.point(t), c.velocity(t));
}

void check_on_chart(const Manifold& M, const CurvePath& c, int N) {
    double h = (c.t1() - c.t0()) / N;
    for (int i = 0; i <= N; ++i) {
        double t = c.t0() + i * h;
        if (!M.in_domain(c.point(t)))
            throw std::runtime_error("curve leaves the chart domain at t = " +
                                     std::to_string(t));
    }
}

}  // namespace

TransportResult parallel_transport(const Manifold& M, const CurvePath& c,
                                   const VectorXd& v0, const Options& opts) {
    const int n = M.dim();
    if (v0.size() != n) throw std::invalid_argument("parallel_transport: bad v0 size");
    int N = step_count(c, opts);
    check_on_chart(M, c, N);
    auto rhs = [&](double t, const VectorXd& v) {
        VectorXd xi = c.point(t);
        VectorXd u = M.to_frame(xi, c.velocity(t));
        auto gam = M.christoffel(xi);
        VectorXd dv = VectorXd::Zero(n);
        for (int k = 0; k < n; ++k) dv -= u(k) * (gam[k] * v);
        return dv;
    };
    TransportResult res;
    MatrixXd states = rk4(c.t0(), c.t1(), N, v0, rhs);
    res.t.resize(N + 1);
    for (int i = 0; i <= N; ++i) res.t(i) = c.t0() + i * (c.t1() - c.t0()) / N;
    res.v = states;
    return res;
}

FrameCurve parallel_frame(const Manifold& M, const CurvePath& c,
                          const MatrixXd& R0, const Options& opts) {
    const int n = M.dim();
    if (R0.rows() != n || R0.cols() != n)
        throw std::invalid_argument("parallel_frame: R0 must be n x n");
    if ((R0.transpose() * R0 - MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff() > 1e-6 ||
        R0.determinant() < 0)
        throw std::invalid_argument("parallel_frame: R0 not in SO(n)");
    int N = step_count(c, opts);
    check_on_chart(M, c, N);
    auto rhs = [&](double t, const VectorXd& s) {
        VectorXd xi = c.point(t);
        VectorXd u = M.to_frame(xi, c.velocity(t));
        auto gam = M.christoffel(xi);
        Eigen::Map<const MatrixXd> R(s.data(), n, n);
        MatrixXd dR = MatrixXd::Zero(n, n);
        for (int k = 0; k < n; ++k) dR -= u(k) * (gam[k] * R);
        return VectorXd(Eigen::Map<const VectorXd>(dR.data(), n * n));
    };
    auto post = [&](VectorXd& s) {
        Eigen::Map<MatrixXd> R(s.data(), n, n);
        R = project_orthogonal(R);
    };
    VectorXd s0 = Eigen::Map<const VectorXd>(R0.data(), n * n);
    MatrixXd states = rk4(c.t0(), c.t1(), N, s0, rhs, post);
    FrameCurve out;
    out.t.resize(N + 1);
    out.R.reserve(N + 1);
    for (int i = 0; i <= N; ++i) {
        out.t(i) = c.t0() + i * (c.t1() - c.t0()) / N;
        VectorXd row = states.row(i);  // rows are strided, copy before mapping
        out.R.push_back(Eigen::Map<const MatrixXd>(row.data(), n, n));
    }
    return out;
}

AntiDevelopment antidevelop(const Manifold& M, const CurvePath& c,
                            const MatrixXd& R0, const Options& opts) {
    const int n = M.dim();
    AntiDevelopment out;
    out.frame = parallel_frame(M, c, R0, opts);
    const int N = static_cast<int>(out.frame.t.size()) - 1;
    const double h = (c.t1() - c.t0()) / N;
    MatrixXd dy(N + 1, n);
    for (int i = 0; i <= N; ++i) {
        VectorXd u = frame_velocity(M, c, out.frame.t(i));
        dy.row(i) = (out.frame.R[i].transpose() * u).transpose();
    }
    out.y.t = out.frame.t;
    out.y.dxi = dy;
    out.y.xi.resize(N + 1, n);
    for (int j = 0; j < n; ++j)
        out.y.xi.col(j) = cumulative_integral(dy.col(j), h);
    out.y.arc_length = c.arc_length;
    out.y.closed = (out.y.xi.row(0) - out.y.xi.row(N)).norm() < opts.tol_close;
    return out;
}

DevelopResult develop(const Manifold& M, const CurvePath& y, const VectorXd& xi0,
                      const MatrixXd& R0, const Options& opts) {
    const int n = M.dim();
    const int m = M.state_dim();
    if (xi0.size() != m) throw std::invalid_argument("develop: bad xi0 size");
    if ((y.point(y.t0())).norm() > 1e-9)
        throw std::invalid_argument("develop: y must start at the origin");
    if (!M.in_domain(xi0)) throw std::invalid_argument("develop: xi0 off the chart");
    int N = step_count(y, opts);
    const double h = (y.t1() - y.t0()) / N;

    auto rhs = [&](double t, const VectorXd& s) {
        VectorXd xi = s.head(m);
        Eigen::Map<const MatrixXd> R(s.data() + m, n, n);
        VectorXd u = R * y.velocity(t);
        auto gam = M.christoffel(xi);
        VectorXd ds(m + n * n);
        ds.head(m) = M.frame(xi) * u;
        MatrixXd dR = MatrixXd::Zero(n, n);
        for (int k = 0; k < n; ++k) dR -= u(k) * (gam[k] * R);
        ds.tail(n * n) = Eigen::Map<const VectorXd>(dR.data(), n * n);
        return ds;
    };
    auto post = [&](VectorXd& s) {
        VectorXd xi = s.head(m);
        M.normalize_state(xi);
        s.head(m) = xi;
        Eigen::Map<MatrixXd> R(s.data() + m, n, n);
        R = project_orthogonal(R);
    };

    VectorXd s(m + n * n);
    s.head(m) = xi0;
    s.tail(n * n) = Eigen::Map<const VectorXd>(R0.data(), n * n);
    post(s);

    DevelopResult out;
    out.x.t.resize(N + 1);
    out.x.xi.resize(N + 1, m);
    out.x.dxi.resize(N + 1, m);
    out.frame.t.resize(N + 1);
    out.frame.R.reserve(N + 1);
    int last = 0;
    for (int i = 0; i <= N; ++i) {
        double t = y.t0() + i * h;
        out.x.t(i) = t;
        out.x.xi.row(i) = s.head(m);
        Eigen::Map<const MatrixXd> R(s.data() + m, n, n);
        out.x.dxi.row(i) = (M.frame(s.head(m)) * (R * y.velocity(t))).transpose();
        out.frame.t(i) = t;
        out.frame.R.push_back(R);
        last = i;
        if (i == N) break;
        VectorXd next = rk4_step(t, h, s, rhs);
        post(next);
        if (!M.in_domain(next.head(m))) {
            out.status.complete = false;
            out.status.exit_time = t + h;
            out.status.message = "chart exit during development";
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
    out.x.arc_length = y.arc_length;
    return out;
}

HolonomyResult holonomy(const Manifold& M, const CurvePath& loop,
                        const MatrixXd& R0, const Options& opts) {
    if ((loop.point(loop.t0()) - loop.point(loop.t1())).norm() > opts.tol_close)
        throw std::invalid_argument("holonomy: loop is not closed");
    FrameCurve f = parallel_frame(M, loop, R0, opts);
    HolonomyResult out;
    out.H = f.front().transpose() * f.back();
    if (M.dim() == 2) out.angle = std::atan2(out.H(1, 0), out.H(0, 0));
    return out;
}

}  // namespace rollnd
