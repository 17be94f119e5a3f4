#include "rollnd/existence.hpp"

#include <cmath>
#include <stdexcept>

#include "rollnd/frenet.hpp"
#include "rollnd/transport.hpp"
#include "rollnd/util.hpp"

namespace rollnd {

namespace {

// arc-length resampling of both curves onto a shared grid over the common
// length
std::pair<SampledCurve, SampledCurve> common_arclength_grid(
    const Manifold& M, const Manifold& Mhat, const CurvePath& x,
    const CurvePath& xhat, double step) {
    SampledCurve a = reparametrize_arclength(M, x, {.step = step});
    SampledCurve b = reparametrize_arclength(Mhat, xhat, {.step = step});
    double L = std::min(a.t1(), b.t1());
    int N = std::max(8, static_cast<int>(std::round(L / step)));
    HermiteCurve ha(a), hb(b);
    SampledCurve ra, rb;
    ra.t.resize(N + 1);
    ra.xi.resize(N + 1, a.dim());
    ra.dxi.resize(N + 1, a.dim());
    rb.t.resize(N + 1);
    rb.xi.resize(N + 1, b.dim());
    rb.dxi.resize(N + 1, b.dim());
    for (int i = 0; i <= N; ++i) {
        double s = L * i / N;
        ra.t(i) = s;
        rb.t(i) = s;
        ra.xi.row(i) = ha.point(s).transpose();
        ra.dxi.row(i) = ha.velocity(s).transpose();
        rb.xi.row(i) = hb.point(s).transpose();
        rb.dxi.row(i) = hb.velocity(s).transpose();
    }
    ra.arc_length = rb.arc_length = true;
    ra.closed = a.closed;
    rb.closed = b.closed;
    return {ra, rb};
}

VectorXd frame_velocity_at(const Manifold& M, const SampledCurve& c, int i) {
    return M.to_frame(c.xi.row(i).transpose(), c.dxi.row(i).transpose());
}

}  // namespace

ExistenceVerdict exists_by_curvature(const Manifold& M, const Manifold& Mhat,
                                     const CurvePath& x, const CurvePath& xhat,
                                     const ExistenceOptions& opts) {
    const int n = M.dim();
    if (Mhat.dim() != n)
        throw std::invalid_argument("exists_by_curvature: dimension mismatch");
    auto [cx, cxh] = common_arclength_grid(M, Mhat, x, xhat, opts.step);

    auto rx = regularity_order(M, cx, opts.eps_reg);
    auto rxh = regularity_order(Mhat, cxh, opts.eps_reg);
    if (rx.order < n - 1 || rxh.order < n - 1)
        throw std::invalid_argument(
            "exists_by_curvature: curve not C^(n-1)-regular; use exists_general");

    auto fx = frenet_apparatus(M, cx);
    auto fxh = frenet_apparatus(Mhat, cxh);
    if (!fx.complete || !fxh.complete)
        throw std::invalid_argument(
            "exists_by_curvature: Frenet apparatus degenerates; use exists_general");

    ExistenceVerdict v;
    v.method = (n == 2) ? "curvature2d" : "curvatureND";
    const int N = cx.size();
    for (int i = 2; i < N - 2; ++i)
        v.residual = std::max(
            v.residual, (fx.kappa.row(i) - fxh.kappa.row(i)).cwiseAbs().maxCoeff());
    v.accepted = v.residual < opts.tol_curv;

    if (v.accepted) {
        // cross-check: the frame correspondence q v_j = vhat_j is a rolling
        RollingTrajectory traj;
        traj.t = cx.t;
        traj.xi = cx.xi;
        traj.xihat = cxh.xi;
        traj.q.reserve(N);
        for (int i = 0; i < N; ++i)
            traj.q.push_back(
                MatrixXd(project_orthogonal(fxh.v[i] * fx.v[i].transpose())));
        auto rep = verify_rolling(M, Mhat, traj);
        v.details = "frenet rolling residuals: noslip " +
                    std::to_string(rep.max_noslip) + ", notwist " +
                    std::to_string(rep.max_notwist);
    }
    return v;
}

ExistenceVerdict exists_general(const Manifold& M, const Manifold& Mhat,
                                const CurvePath& x, const CurvePath& xhat,
                                const ExistenceOptions& opts) {
    const int n = M.dim();
    if (Mhat.dim() != n)
        throw std::invalid_argument("exists_general: dimension mismatch");
    if (std::abs(x.t0() - xhat.t0()) > 1e-9 || std::abs(x.t1() - xhat.t1()) > 1e-9)
        throw std::invalid_argument("exists_general: parameter intervals differ");

    MatrixXd I = MatrixXd::Identity(n, n);
    auto ay = antidevelop(M, x, I, {.step = opts.step});
    auto ayh = antidevelop(Mhat, xhat, I, {.step = opts.step});
    const int N = ay.y.size();
    if (ayh.y.size() != N) throw std::logic_error("exists_general: grid mismatch");
    const double h = ay.y.step();

    ExistenceVerdict v;
    v.method = "antidev_so_n";

    double vmax = std::max(ay.y.dxi.cwiseAbs().maxCoeff(), ayh.y.dxi.cwiseAbs().maxCoeff());
    if (vmax < 1e-12) {
        v.accepted = true;
        v.degenerate = true;
        v.iota = I;
        v.details = "both curves constant";
        return v;
    }

    // trapezoid weights; the lemma constrains the derivatives, positions are
    // the second gate
    VectorXd w = VectorXd::Constant(N, h);
    w(0) = w(N - 1) = 0.5 * h;
    bool refl = false;
    v.iota = procrustes_rotation(ay.y.dxi.transpose(), ayh.y.dxi.transpose(), w, &refl);
    v.orientation_mismatch = refl;

    double length = 0.0;
    for (int i = 0; i < N; ++i) {
        v.residual = std::max(v.residual, (ayh.y.dxi.row(i).transpose() -
                                           v.iota * ay.y.dxi.row(i).transpose())
                                              .norm());
    }
    VectorXd speed(N);
    for (int i = 0; i < N; ++i) speed(i) = ay.y.dxi.row(i).norm();
    length = integrate(speed, h);
    double pos_res = 0.0;
    for (int i = 0; i < N; ++i)
        pos_res = std::max(pos_res, (ayh.y.xi.row(i).transpose() -
                                     v.iota * ay.y.xi.row(i).transpose())
                                        .norm());
    v.accepted = v.residual < opts.tol_gen && pos_res < opts.tol_gen * std::max(length, 1.0);
    v.details = "position residual " + std::to_string(pos_res) + " over length " +
                std::to_string(length);
    return v;
}

namespace {

// signed geodesic curvature samples of an arc-length 2d curve
VectorXd kg_samples(const Manifold& M, const SampledCurve& c) {
    auto fd = frenet_apparatus(M, c);
    return fd.kappa.col(0);
}

void check_c2(const VectorXd& kg, const SampledCurve& c, double jump_tol) {
    for (int i = 2; i + 3 < c.size(); ++i)
        if (std::abs(kg(i + 1) - kg(i)) > jump_tol)
            throw std::invalid_argument(
                "loop_check: geodesic-curvature jump at t = " + std::to_string(c.t(i)) +
                " marks the curve as not C^2");
}

}  // namespace

LoopReport loop_check(const Manifold& M, const CurvePath& x, const LoopOptions& opts) {
    if (M.dim() != 2) throw std::invalid_argument("loop_check: needs a surface (n = 2)");
    SampledCurve c = reparametrize_arclength(M, x, {.step = opts.step});
    const int N = c.size();
    const double h = c.step();

    LoopReport rep;
    rep.closed = (c.xi.row(0) - c.xi.row(N - 1)).norm() < opts.tol_close;

    VectorXd kg = kg_samples(M, c);
    check_c2(kg, c, opts.c2_jump);

    rep.alpha = integrate(kg, h);
    VectorXd A = cumulative_integral(kg, h);
    VectorXd cs(N), sn(N);
    for (int i = 0; i < N; ++i) {
        cs(i) = std::cos(A(i));
        sn(i) = std::sin(A(i));
    }
    rep.closure_integral = {integrate(cs, h), integrate(sn, h)};

    if (rep.closed) {
        auto path = std::make_shared<HermiteCurve>(c);
        path->closed = true;
        auto hol = holonomy(M, *path, MatrixXd::Identity(2, 2),
                            {.step = opts.step, .tol_close = opts.tol_close});
        rep.theta = hol.angle;
    }
    rep.config_loop = rep.closed && std::abs(wrap_angle(rep.theta)) < opts.tol_angle &&
                      std::abs(rep.closure_integral) < opts.tol_loop;
    rep.c1_loop = rep.config_loop && std::abs(wrap_angle(rep.alpha)) < opts.tol_angle;
    return rep;
}

LoopInQReport loop_in_Q(const Manifold& M, const CurvePath& x,
                        const Manifold& Mhat, const CurvePath& xhat,
                        const LoopOptions& opts) {
    if (M.dim() != 2 || Mhat.dim() != 2)
        throw std::invalid_argument("loop_in_Q: needs surfaces (n = 2)");
    auto tangent_sweep = [&](const Manifold& Mi, const CurvePath& ci) {
        SampledCurve c = reparametrize_arclength(Mi, ci, {.step = opts.step});
        VectorXd kg = kg_samples(Mi, c);
        check_c2(kg, c, opts.c2_jump);
        double alpha = integrate(kg, c.step());
        double theta = 0.0;
        if ((c.xi.row(0) - c.xi.row(c.size() - 1)).norm() < opts.tol_close) {
            auto path = std::make_shared<HermiteCurve>(c);
            path->closed = true;
            auto hol = holonomy(Mi, *path, MatrixXd::Identity(2, 2),
                                {.step = opts.step, .tol_close = opts.tol_close});
            theta = hol.angle;
        }
        return wrap_angle(alpha + theta);
    };
    LoopInQReport rep;
    rep.angle = tangent_sweep(M, x);
    rep.angle_hat = tangent_sweep(Mhat, xhat);
    rep.in_Q = std::abs(wrap_angle(rep.angle - rep.angle_hat)) < opts.tol_angle;
    return rep;
}

namespace {

// Frenet-type fields of one half-curve extended to its junction end by
// quadratic extrapolation from the nearest nondegenerate nodes.
MatrixXd junction_frame(const Manifold& M, const CurvePath& x, double a, double b,
                        bool junction_at_end, const JunctionOptions& opts) {
    const int n = M.dim();
    auto half = std::make_shared<AnalyticCurve>(
        x.dim(), a, b, [&x](double t) { return x.point(t); },
        [&x](double t) { return x.velocity(t); });
    SampledCurve c = half->sample_step(opts.step);
    const int N = c.size();
    if (N < 13) throw std::invalid_argument("junction_compatibility: segment too short");

    std::vector<MatrixXd> ders;
    {
        MatrixXd u(N, n);
        for (int i = 0; i < N; ++i) u.row(i) = frame_velocity_at(M, c, i).transpose();
        ders.push_back(u);
    }
    for (int k = 1; k < n; ++k) ders.push_back(covariant_derivative(M, c, ders.back()));

    // per-node Gram-Schmidt with a degeneracy cutoff; levels are contiguous
    std::vector<MatrixXd> fields(n, MatrixXd::Zero(N, n));
    std::vector<int> levels(N, 0);
    for (int i = 0; i < N; ++i) {
        MatrixXd V(n, n);
        int l = 0;
        for (; l < n; ++l) {
            VectorXd w = ders[l].row(i).transpose();
            for (int p = 0; p < l; ++p) w -= w.dot(V.col(p)) * V.col(p);
            if (w.norm() < opts.eps_extend) break;
            V.col(l) = w.normalized();
            fields[l].row(i) = V.col(l).transpose();
        }
        levels[i] = l;
    }

    double tj = junction_at_end ? b : a;
    MatrixXd out(n, n);
    int L = 0;
    for (; L < n; ++L) {
        // three nondegenerate nodes nearest the junction, away from the
        // one-sided-stencil band at the grid ends
        std::vector<int> picks;
        if (junction_at_end) {
            for (int i = N - 5; i >= 4 && static_cast<int>(picks.size()) < 3; --i)
                if (levels[i] > L) picks.push_back(i);
        } else {
            for (int i = 4; i <= N - 5 && static_cast<int>(picks.size()) < 3; ++i)
                if (levels[i] > L) picks.push_back(i);
        }
        if (picks.size() < 3) break;
        // align signs across the picked nodes (normalization can flip across
        // a curvature zero)
        VectorXd f0 = fields[L].row(picks[0]).transpose();
        std::vector<VectorXd> fs{f0};
        for (int k = 1; k < 3; ++k) {
            VectorXd f = fields[L].row(picks[k]).transpose();
            if (f.dot(fs.back()) < 0) f = -f;
            fs.push_back(f);
        }
        // quadratic Lagrange extrapolation to the junction time
        VectorXd ext = VectorXd::Zero(n);
        for (int k = 0; k < 3; ++k) {
            double lk = 1.0;
            for (int m = 0; m < 3; ++m) {
                if (m == k) continue;
                lk *= (tj - c.t(picks[m])) / (c.t(picks[k]) - c.t(picks[m]));
            }
            ext += lk * fs[k];
        }
        // orthonormalize against the already-extended lower levels
        for (int p = 0; p < L; ++p) ext -= ext.dot(out.col(p)) * out.col(p);
        if (ext.norm() < 0.5) break;  // extrapolation degenerated
        out.col(L) = ext.normalized();
    }
    if (L == 0)
        throw std::invalid_argument("junction_compatibility: frames not extendable");
    return out.leftCols(L);
}

}  // namespace

MatrixXd junction_compatibility(const Manifold& M, const Manifold& Mhat,
                                const CurvePath& x, const CurvePath& xhat,
                                double b, const JunctionOptions& opts) {
    if (b <= x.t0() || b >= x.t1() || b <= xhat.t0() || b >= xhat.t1())
        throw std::invalid_argument("junction_compatibility: b must be interior");
    MatrixXd vl = junction_frame(M, x, x.t0(), b, true, opts);
    MatrixXd wr = junction_frame(M, x, b, x.t1(), false, opts);
    MatrixXd vhl = junction_frame(Mhat, xhat, xhat.t0(), b, true, opts);
    MatrixXd whr = junction_frame(Mhat, xhat, b, xhat.t1(), false, opts);
    int L = std::min(std::min(vl.cols(), wr.cols()), std::min(vhl.cols(), whr.cols()));
    MatrixXd G(L, L);
    for (int i = 0; i < L; ++i)
        for (int j = 0; j < L; ++j)
            G(i, j) = vl.col(i).dot(wr.col(j)) - vhl.col(i).dot(whr.col(j));
    return G;
}

int minimal_parallel_rank(const Manifold& M, const CurvePath& x,
                          const ExistenceOptions& opts) {
    const int n = M.dim();
    auto ad = antidevelop(M, x, MatrixXd::Identity(n, n), {.step = opts.step});
    Eigen::JacobiSVD<MatrixXd> svd(ad.y.dxi);
    if (svd.singularValues()(0) < 1e-12) return 0;
    int k = 0;
    for (int i = 0; i < svd.singularValues().size(); ++i)
        if (svd.singularValues()(i) > opts.eps_reg * svd.singularValues()(0)) ++k;
    return k;
}

EuclideanIsometry extract_euclidean_isometry(const SampledCurve& x,
                                             const SampledCurve& xhat,
                                             double tol_gen) {
    if (x.size() != xhat.size() || x.dim() != xhat.dim())
        throw std::invalid_argument("extract_euclidean_isometry: grids differ");
    const int N = x.size();
    const double h = x.step();
    EuclideanIsometry out;
    VectorXd w = VectorXd::Constant(N, h);
    w(0) = w(N - 1) = 0.5 * h;
    bool refl = false;
    out.iota = procrustes_rotation(x.dxi.transpose(), xhat.dxi.transpose(), w, &refl);
    out.orientation_mismatch = refl;
    out.b = xhat.xi.row(0).transpose() - out.iota * x.xi.row(0).transpose();
    VectorXd speed(N);
    for (int i = 0; i < N; ++i) speed(i) = x.dxi.row(i).norm();
    double length = integrate(speed, h);
    for (int i = 0; i < N; ++i)
        out.residual = std::max(
            out.residual,
            (xhat.xi.row(i).transpose() - (out.iota * x.xi.row(i).transpose() + out.b))
                .norm());
    out.accepted = !refl && out.residual < tol_gen * std::max(length, 1.0);
    return out;
}

}  // namespace rollnd
