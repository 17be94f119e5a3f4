#include "rollnd/frenet.hpp"

#include <cmath>
#include <stdexcept>

#include "rollnd/util.hpp"

namespace rollnd {

namespace {

// frame components of the curve velocity at every node
MatrixXd frame_velocities(const Manifold& M, const SampledCurve& c) {
    const int n = M.dim();
    MatrixXd u(c.size(), n);
    for (int i = 0; i < c.size(); ++i)
        u.row(i) = M.to_frame(c.xi.row(i).transpose(), c.dxi.row(i).transpose()).transpose();
    return u;
}

}  // namespace

MatrixXd covariant_derivative(const Manifold& M, const SampledCurve& c,
                              const MatrixXd& w) {
    const int n = M.dim();
    if (c.size() < 5) throw std::invalid_argument("covariant_derivative: grid too short");
    if (w.rows() != c.size() || w.cols() != n)
        throw std::invalid_argument("covariant_derivative: bad sample shape");
    MatrixXd dw = fd_derivative(w, c.step());
    for (int i = 0; i < c.size(); ++i) {
        VectorXd u = M.to_frame(c.xi.row(i).transpose(), c.dxi.row(i).transpose());
        auto gam = M.christoffel(c.xi.row(i).transpose());
        VectorXd corr = VectorXd::Zero(n);
        for (int k = 0; k < n; ++k) corr += u(k) * (gam[k] * w.row(i).transpose());
        dw.row(i) += corr.transpose();
    }
    return dw;
}

MatrixXd FrenetData::K(int i) const {
    const int n = static_cast<int>(kappa.cols()) + 1;
    MatrixXd K = MatrixXd::Zero(n, n);
    for (int j = 0; j + 1 < n; ++j) {
        K(j + 1, j) = kappa(i, j);
        K(j, j + 1) = -kappa(i, j);
    }
    return K;
}

FrenetData frenet_apparatus(const Manifold& M, const SampledCurve& c,
                            const FrenetOptions& opts) {
    const int n = M.dim();
    const int N = c.size();
    if (!c.arc_length)
        throw std::invalid_argument("frenet_apparatus: curve must be unit-speed");
    if (N < 5) throw std::invalid_argument("frenet_apparatus: grid too short");

    FrenetData out;
    out.t = c.t;
    out.kappa = MatrixXd::Zero(N, n - 1);
    std::vector<MatrixXd> fields;  // per level: N x n samples
    fields.push_back(frame_velocities(M, c));
    for (int i = 0; i < N; ++i) {
        double sp = fields[0].row(i).norm();
        if (std::abs(sp - 1.0) > 1e-6)
            throw std::invalid_argument("frenet_apparatus: speed " + std::to_string(sp) +
                                        " at t = " + std::to_string(c.t(i)));
    }

    // Gram-Schmidt levels v_2..v_{n-1}; the recursion D v_j + kappa_{j-1}
    // v_{j-1} = kappa_j v_{j+1} makes the raw vector orthogonal to all the
    // previous fields already, the explicit projection just controls the
    // finite-difference noise.
    for (int j = 1; j <= n - 2 && out.complete; ++j) {
        MatrixXd Dv = covariant_derivative(M, c, fields[j - 1]);
        MatrixXd next(N, n);
        for (int i = 0; i < N; ++i) {
            VectorXd w = Dv.row(i).transpose();
            if (j >= 2) w += out.kappa(i, j - 2) * fields[j - 2].row(i).transpose();
            for (int l = 0; l < j; ++l) {
                VectorXd vl = fields[l].row(i).transpose();
                w -= w.dot(vl) * vl;
            }
            double k = w.norm();
            if (k < opts.eps_reg) {
                out.complete = false;
                out.failure_time = c.t(i);
                out.failure_level = j;
                break;
            }
            out.kappa(i, j - 1) = k;
            next.row(i) = (w / k).transpose();
        }
        if (out.complete) fields.push_back(next);
    }

    if (out.complete) {
        // top field completes the basis with positive orientation; the last
        // curvature keeps its sign
        MatrixXd vn(N, n);
        if (n == 1) throw std::invalid_argument("frenet_apparatus: n must be >= 2");
        for (int i = 0; i < N; ++i) {
            MatrixXd V(n, n - 1);
            for (int l = 0; l < n - 1; ++l) V.col(l) = fields[l].row(i).transpose();
            vn.row(i) = generalized_cross(V).normalized().transpose();
        }
        MatrixXd Dv = covariant_derivative(M, c, fields[n - 2]);
        for (int i = 0; i < N; ++i) {
            VectorXd w = Dv.row(i).transpose();
            if (n >= 3) w += out.kappa(i, n - 3) * fields[n - 3].row(i).transpose();
            out.kappa(i, n - 2) = w.dot(vn.row(i).transpose());
        }
        fields.push_back(vn);
    }

    out.v.reserve(N);
    const int levels = static_cast<int>(fields.size());
    for (int i = 0; i < N; ++i) {
        MatrixXd V = MatrixXd::Zero(n, n);
        for (int l = 0; l < levels; ++l) V.col(l) = fields[l].row(i).transpose();
        out.v.push_back(V);
    }
    if (!out.complete)
        out.kappa.conservativeResize(N, out.failure_level);
    return out;
}

SampledCurve reparametrize_arclength(const Manifold& M, const CurvePath& c,
                                     const Options& opts, const FrenetOptions& fopts) {
    const int Ns = std::max(4, static_cast<int>(std::ceil((c.t1() - c.t0()) / opts.step)));
    const double ht = (c.t1() - c.t0()) / Ns;
    auto speed = [&](double t) {
        return M.to_frame(c.point(t), c.velocity(t)).norm();
    };
    VectorXd sp(Ns + 1);
    for (int i = 0; i <= Ns; ++i) {
        sp(i) = speed(c.t0() + i * ht);
        if (sp(i) < fopts.eps_speed)
            throw std::invalid_argument("reparametrize_arclength: vanishing speed at t = " +
                                        std::to_string(c.t0() + i * ht));
    }
    VectorXd s = cumulative_integral(sp, ht);
    const double L = s(Ns);
    const int Nout = std::max(4, static_cast<int>(std::ceil(L / opts.step)));
    const double hs = L / Nout;

    SampledCurve out;
    out.t.resize(Nout + 1);
    out.xi.resize(Nout + 1, M.state_dim());
    out.dxi.resize(Nout + 1, M.state_dim());
    int bracket = 0;
    for (int i = 0; i <= Nout; ++i) {
        double target = i * hs;
        while (bracket + 1 < Ns && s(bracket + 1) < target) ++bracket;
        // Newton on the monotone arc-length function, seeded by linear interp
        double t = c.t0() + ht * (bracket + (target - s(bracket)) /
                                                std::max(s(bracket + 1) - s(bracket), 1e-300));
        for (int it = 0; it < 4; ++it) {
            // re-integrate from the bracket node with Simpson for the residual
            double a = c.t0() + bracket * ht;
            double seg = adaptive_simpson(speed, a, t, 1e-13, 30);
            t -= (s(bracket) + seg - target) / speed(t);
            t = std::min(std::max(t, c.t0()), c.t1());
        }
        out.t(i) = target;
        out.xi.row(i) = c.point(t).transpose();
        out.dxi.row(i) = (c.velocity(t) / speed(t)).transpose();
    }
    out.arc_length = true;
    out.closed = c.closed;
    return out;
}

RegularityReport regularity_order(const Manifold& M, const SampledCurve& c,
                                  double eps_reg) {
    const int n = M.dim();
    const int N = c.size();
    std::vector<MatrixXd> ders;
    ders.push_back(frame_velocities(M, c));
    for (int k = 1; k < n; ++k)
        ders.push_back(covariant_derivative(M, c, ders.back()));

    RegularityReport rep;
    for (int k = 1; k < n; ++k) {
        std::vector<double> fails;
        for (int i = 0; i < N; ++i) {
            MatrixXd A(n, k + 1);
            for (int l = 0; l <= k; ++l) A.col(l) = ders[l].row(i).transpose();
            Eigen::JacobiSVD<MatrixXd> svd(A);
            if (svd.singularValues()(k) <= eps_reg * svd.singularValues()(0))
                fails.push_back(c.t(i));
        }
        if (fails.empty()) {
            rep.order = k;
        } else {
            rep.failure_times = fails;
            break;
        }
    }
    return rep;
}

}  // namespace rollnd
