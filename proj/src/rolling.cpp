#include "rollnd/rolling.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "rollnd/frenet.hpp"
#include "rollnd/io.hpp"
#include "rollnd/util.hpp"

namespace rollnd {

RollingTrajectory roll_along(const Manifold& M, const Manifold& Mhat,
                             const CurvePath& x, const MatrixXd& q0,
                             const VectorXd& xihat0, const Options& opts) {
    const int n = M.dim();
    if (Mhat.dim() != n)
        throw std::invalid_argument("roll_along: manifolds must share the dimension");
    const int m = M.state_dim();
    const int mh = Mhat.state_dim();
    if (q0.rows() != n || q0.cols() != n ||
        (q0.transpose() * q0 - MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff() > 1e-6 ||
        q0.determinant() < 0)
        throw std::invalid_argument("roll_along: q0 not in SO(n)");
    if (xihat0.size() != mh) throw std::invalid_argument("roll_along: bad xihat0 size");
    if (!Mhat.in_domain(xihat0))
        throw std::invalid_argument("roll_along: xihat0 off the chart");

    const int N = std::max(1, static_cast<int>(std::ceil((x.t1() - x.t0()) / opts.step - 1e-12)));
    const double h = (x.t1() - x.t0()) / N;
    for (int i = 0; i <= N; ++i)
        if (!M.in_domain(x.point(x.t0() + i * h)))
            throw std::invalid_argument("roll_along: base curve leaves the chart");

    // state: (xi_hat, vec(q))
    auto rhs = [&](double t, const VectorXd& s) {
        VectorXd xh = s.head(mh);
        Eigen::Map<const MatrixXd> q(s.data() + mh, n, n);
        VectorXd xi = x.point(t);
        VectorXd u = M.to_frame(xi, x.velocity(t));
        VectorXd uh = q * u;
        auto gam = M.christoffel(xi);
        auto gamh = Mhat.christoffel(xh);
        VectorXd ds(mh + n * n);
        ds.head(mh) = Mhat.frame(xh) * uh;
        MatrixXd dq = MatrixXd::Zero(n, n);
        for (int l = 0; l < n; ++l) dq += u(l) * (q * gam[l]);
        for (int ss = 0; ss < n; ++ss) dq -= uh(ss) * (gamh[ss] * q);
        ds.tail(n * n) = Eigen::Map<const VectorXd>(dq.data(), n * n);
        return ds;
    };
    auto post = [&](VectorXd& s) {
        VectorXd xh = s.head(mh);
        Mhat.normalize_state(xh);
        s.head(mh) = xh;
        Eigen::Map<MatrixXd> q(s.data() + mh, n, n);
        q = project_orthogonal(q);
    };

    VectorXd s(mh + n * n);
    s.head(mh) = xihat0;
    s.tail(n * n) = Eigen::Map<const VectorXd>(q0.data(), n * n);
    post(s);

    RollingTrajectory out;
    out.t.resize(N + 1);
    out.xi.resize(N + 1, m);
    out.xihat.resize(N + 1, mh);
    out.q.reserve(N + 1);
    int last = 0;
    for (int i = 0; i <= N; ++i) {
        double t = x.t0() + i * h;
        out.t(i) = t;
        out.xi.row(i) = x.point(t).transpose();
        out.xihat.row(i) = s.head(mh).transpose();
        out.q.push_back(MatrixXd(Eigen::Map<const MatrixXd>(s.data() + mh, n, n)));
        last = i;
        if (i == N) break;
        VectorXd next = rk4_step(t, h, s, rhs);
        post(next);
        if (!Mhat.in_domain(next.head(mh))) {
            out.status.complete = false;
            out.status.exit_time = t + h;
            out.status.message = "chart exit on the target manifold";
            break;
        }
        s = next;
    }
    if (!out.status.complete) {
        out.t.conservativeResize(last + 1);
        out.xi.conservativeResize(last + 1, m);
        out.xihat.conservativeResize(last + 1, mh);
    }
    return out;
}

RollingReport verify_rolling(const Manifold& M, const Manifold& Mhat,
                             const RollingTrajectory& traj, int probes,
                             unsigned seed) {
    const int n = M.dim();
    const int N = traj.size();
    if (N < 5) throw std::invalid_argument("verify_rolling: trajectory too short");
    const double h = traj.step();

    RollingReport rep;
    rep.complete = traj.status.complete;
    rep.exit_time = traj.status.exit_time;

    SampledCurve cx{traj.t, traj.xi, fd_derivative(traj.xi, h)};
    SampledCurve cxh{traj.t, traj.xihat, fd_derivative(traj.xihat, h)};

    // no slip: uhat = q u pointwise
    MatrixXd u(N, n), uh(N, n);
    for (int i = 0; i < N; ++i) {
        u.row(i) = M.to_frame(cx.xi.row(i).transpose(), cx.dxi.row(i).transpose()).transpose();
        uh.row(i) =
            Mhat.to_frame(cxh.xi.row(i).transpose(), cxh.dxi.row(i).transpose()).transpose();
        // the two nodes at each end only have one-sided 2nd-order stencils;
        // they are excluded from certification like everywhere else
        if (i >= 2 && i < N - 2)
            rep.max_noslip = std::max(
                rep.max_noslip,
                (uh.row(i).transpose() - traj.q[i] * u.row(i).transpose()).norm());
        rep.max_so_drift = std::max(
            rep.max_so_drift, (traj.q[i].transpose() * traj.q[i] - MatrixXd::Identity(n, n))
                                  .cwiseAbs()
                                  .maxCoeff());
    }

    // no twist: for parallel probes Z along x, D/dt (q Z) along x_hat must
    // equal q D/dt Z. Both derivatives come from the same finite-difference
    // stencils on the stored grid.
    std::mt19937 rng(seed);
    std::normal_distribution<double> dist;
    auto cpath = std::make_shared<HermiteCurve>(cx);
    for (int p = 0; p < probes; ++p) {
        VectorXd z0(n);
        for (int i = 0; i < n; ++i) z0(i) = dist(rng);
        z0.normalize();
        auto tr = parallel_transport(M, *cpath, z0, {.step = h});
        // the transport grid matches the trajectory grid (same span and step)
        if (tr.v.rows() != N)
            throw std::logic_error("verify_rolling: grid mismatch in probe transport");
        MatrixXd W(N, n);
        for (int i = 0; i < N; ++i) W.row(i) = (traj.q[i] * tr.v.row(i).transpose()).transpose();
        MatrixXd DZ = covariant_derivative(M, cx, tr.v);
        MatrixXd DW = covariant_derivative(Mhat, cxh, W);
        for (int i = 2; i < N - 2; ++i)
            rep.max_notwist = std::max(
                rep.max_notwist,
                (DW.row(i).transpose() - traj.q[i] * DZ.row(i).transpose()).norm());
    }
    return rep;
}

RollingTrajectory compose_rollings(const RollingTrajectory& q1,
                                   const RollingTrajectory& q2, double tol) {
    const int N = q1.size();
    if (q2.size() != N || (q1.t - q2.t).cwiseAbs().maxCoeff() > 1e-12)
        throw std::invalid_argument("compose_rollings: grids differ");
    double mismatch = (q1.xihat - q2.xi).cwiseAbs().maxCoeff();
    if (mismatch > tol)
        throw std::invalid_argument("compose_rollings: middle curves differ by " +
                                    std::to_string(mismatch));
    RollingTrajectory out;
    out.t = q1.t;
    out.xi = q1.xi;
    out.xihat = q2.xihat;
    out.q.reserve(N);
    for (int i = 0; i < N; ++i) out.q.push_back(MatrixXd(q2.q[i] * q1.q[i]));
    out.status.complete = q1.status.complete && q2.status.complete;
    return out;
}

void write_trajectory_csv(const std::string& path, const RollingTrajectory& traj) {
    const int m = static_cast<int>(traj.xi.cols());
    const int mh = static_cast<int>(traj.xihat.cols());
    const int n = static_cast<int>(traj.q.front().rows());
    std::vector<std::string> header{"t"};
    for (int j = 1; j <= m; ++j) header.push_back("xi_" + std::to_string(j));
    for (int j = 1; j <= mh; ++j) header.push_back("xihat_" + std::to_string(j));
    for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= n; ++j)
            header.push_back("q_" + std::to_string(i) + std::to_string(j));
    MatrixXd data(traj.size(), 1 + m + mh + n * n);
    for (int i = 0; i < traj.size(); ++i) {
        data(i, 0) = traj.t(i);
        data.block(i, 1, 1, m) = traj.xi.row(i);
        data.block(i, 1 + m, 1, mh) = traj.xihat.row(i);
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < n; ++c) data(i, 1 + m + mh + r * n + c) = traj.q[i](r, c);
    }
    write_csv(path, header, data);
}

RollingTrajectory read_trajectory_csv(const std::string& path, int m, int mh, int n) {
    CsvTable tab = read_csv(path);
    if (tab.data.cols() != 1 + m + mh + n * n)
        throw std::invalid_argument("trajectory CSV: wrong column count");
    RollingTrajectory out;
    const int N = static_cast<int>(tab.data.rows());
    out.t = tab.data.col(0);
    out.xi = tab.data.block(0, 1, N, m);
    out.xihat = tab.data.block(0, 1 + m, N, mh);
    out.q.reserve(N);
    for (int i = 0; i < N; ++i) {
        MatrixXd q(n, n);
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < n; ++c) q(r, c) = tab.data(i, 1 + m + mh + r * n + c);
        out.q.push_back(q);
    }
    return out;
}

}  // namespace rollnd
