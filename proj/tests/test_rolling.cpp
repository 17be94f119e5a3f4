#include "doctest.h"

#include <cmath>
#include <cstdio>

#include "rollnd/frenet.hpp"
#include "rollnd/rolling.hpp"
#include "rollnd/util.hpp"

using namespace rollnd;

TEST_CASE("identity rolling of euclidean on itself") {
    auto M = builtin_manifold("euclidean", {{"n", 2}});
    auto c = builtin_curve("trig", {{"n", 2}, {"seed", 2}});
    auto traj = roll_along(*M, *M, *c, MatrixXd::Identity(2, 2), c->point(0.0),
                           {.step = 1e-3});
    REQUIRE(traj.status.complete);
    CHECK((traj.xihat - traj.xi).cwiseAbs().maxCoeff() < 1e-10);
    for (int i = 0; i < traj.size(); i += 200)
        CHECK((traj.q[i] - MatrixXd::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("euclidean on euclidean: q stays constant along any curve") {
    auto M = builtin_manifold("euclidean", {{"n", 3}});
    auto c = builtin_curve("trig", {{"n", 3}, {"seed", 9}});
    MatrixXd q0(3, 3);
    double th = 0.7;
    q0 << std::cos(th), -std::sin(th), 0, std::sin(th), std::cos(th), 0, 0, 0, 1;
    VectorXd xh0(3);
    xh0 << 2, -1, 0.5;
    auto traj = roll_along(*M, *M, *c, q0, xh0, {.step = 1e-3});
    REQUIRE(traj.status.complete);
    for (int i = 0; i < traj.size(); i += 300)
        CHECK((traj.q[i] - q0).cwiseAbs().maxCoeff() < 1e-12);
    // and the image curve is the rigid placement of the base curve
    for (int i = 0; i < traj.size(); i += 300) {
        VectorXd expect = xh0 + q0 * (traj.xi.row(i).transpose() - traj.xi.row(0).transpose());
        CHECK((traj.xihat.row(i).transpose() - expect).norm() < 1e-10);
    }
}

TEST_CASE("great-circle arc on the sphere unrolls to a straight segment") {
    auto S = builtin_manifold("sphere_stereo", {{"n", 2}});
    auto E = builtin_manifold("euclidean", {{"n", 2}});
    auto c = builtin_curve("greatcircle", {{"len", M_PI / 2}});
    auto traj = roll_along(*S, *E, *c, MatrixXd::Identity(2, 2), VectorXd::Zero(2),
                           {.step = 1e-3});
    REQUIRE(traj.status.complete);
    int N = traj.size() - 1;
    CHECK(std::abs(traj.xihat.row(N).norm() - M_PI / 2) < 1e-6);
    VectorXd dir = traj.xihat.row(N).transpose().normalized();
    for (int i = 0; i <= N; i += 100) {
        VectorXd p = traj.xihat.row(i).transpose();
        CHECK((p - p.dot(dir) * dir).norm() < 1e-6);
    }
}

TEST_CASE("latitude circle rolls to a plane circle of radius tan(colat)") {
    auto S = builtin_manifold("sphere_stereo", {{"n", 2}});
    auto E = builtin_manifold("euclidean", {{"n", 2}});
    double colat = M_PI / 3;
    auto c = builtin_curve("latitude", {{"colat", colat}});
    auto traj = roll_along(*S, *E, *c, MatrixXd::Identity(2, 2), VectorXd::Zero(2),
                           {.step = 1e-3});
    REQUIRE(traj.status.complete);
    double r = std::tan(colat);
    // the image is an arc of a circle of radius tan(colat); find the center
    // from the first point and tangent
    VectorXd p0 = traj.xihat.row(0).transpose();
    VectorXd u0 = S->to_frame(c->point(0.0), c->velocity(0.0));
    VectorXd d0 = (traj.q[0] * u0).normalized();  // image tangent, exact
    for (double sgn : {1.0, -1.0}) {
        VectorXd center = p0 + sgn * r * VectorXd(Eigen::Vector2d(-d0(1), d0(0)));
        double dev = 0;
        for (int i = 0; i < traj.size(); i += 77)
            dev = std::max(dev,
                           std::abs((traj.xihat.row(i).transpose() - center).norm() - r));
        if (dev < 1e-5) {
            CHECK(dev < 1e-5);
            return;
        }
    }
    FAIL("no circle center matched");
}

TEST_CASE("roll_along output passes verify_rolling") {
    auto S = builtin_manifold("sphere_stereo", {{"n", 2}});
    auto H = builtin_manifold("hyperbolic_halfplane");
    auto c = builtin_curve("trig", {{"n", 2}, {"seed", 10}, {"amp", 0.25}});
    VectorXd xh0(2);
    xh0 << 0, 1;
    auto traj = roll_along(*S, *H, *c, MatrixXd::Identity(2, 2), xh0, {.step = 2e-3});
    REQUIRE(traj.status.complete);
    auto rep = verify_rolling(*S, *H, traj);
    CHECK(rep.max_noslip < 1e-6);
    CHECK(rep.max_notwist < 1e-6);
    CHECK(rep.max_so_drift < 1e-8);
}

TEST_CASE("frozen q trajectory fails the no-twist check") {
    auto S = builtin_manifold("sphere_stereo", {{"n", 2}});
    auto E = builtin_manifold("euclidean", {{"n", 2}});
    auto c = builtin_curve("latitude", {{"colat", M_PI / 3}});
    auto traj = roll_along(*S, *E, *c, MatrixXd::Identity(2, 2), VectorXd::Zero(2),
                           {.step = 1e-3});
    REQUIRE(traj.status.complete);
    RollingTrajectory bad = traj;
    for (auto& q : bad.q) q = traj.q.front();
    auto rep = verify_rolling(*S, *E, bad);
    CHECK(rep.max_notwist > 0.1);
}

TEST_CASE("time-reversed trajectory is still a valid rolling") {
    auto S = builtin_manifold("sphere_stereo", {{"n", 2}});
    auto E = builtin_manifold("euclidean", {{"n", 2}});
    auto c = builtin_curve("trig", {{"n", 2}, {"seed", 13}});
    auto traj = roll_along(*S, *E, *c, MatrixXd::Identity(2, 2), VectorXd::Zero(2),
                           {.step = 2e-3});
    REQUIRE(traj.status.complete);
    RollingTrajectory rev = traj;
    const int N = traj.size();
    for (int i = 0; i < N; ++i) {
        rev.xi.row(i) = traj.xi.row(N - 1 - i);
        rev.xihat.row(i) = traj.xihat.row(N - 1 - i);
        rev.q[i] = traj.q[N - 1 - i];
    }
    auto rep = verify_rolling(*S, *E, rev);
    CHECK(rep.max_noslip < 1e-6);
    CHECK(rep.max_notwist < 1e-6);
}

TEST_CASE("rolling preserves the Frenet curvatures and maps the frames") {
    auto S = builtin_manifold("sphere_stereo", {{"n", 3}});
    auto E = builtin_manifold("euclidean", {{"n", 3}});
    auto c = builtin_curve("helix", {{"kappa", 1.0}, {"tau", 0.5}, {"len", 4.0}});
    auto traj = roll_along(*E, *S, *c, MatrixXd::Identity(3, 3), VectorXd::Zero(3),
                           {.step = 1e-3});
    REQUIRE(traj.status.complete);
    const double h = traj.step();
    SampledCurve cx{traj.t, traj.xi, fd_derivative(traj.xi, h)};
    cx.arc_length = true;
    SampledCurve cxh{traj.t, traj.xihat, fd_derivative(traj.xihat, h)};
    cxh.arc_length = true;
    auto fx = frenet_apparatus(*E, cx);
    auto fxh = frenet_apparatus(*S, cxh);
    REQUIRE(fx.complete);
    REQUIRE(fxh.complete);
    // second-level Frenet fields inherit one-sided-stencil noise a few nodes
    // into the grid, so compare away from the ends
    double dk = 0, dframe = 0;
    for (int i = 8; i < traj.size() - 8; ++i) {
        dk = std::max(dk, (fx.kappa.row(i) - fxh.kappa.row(i)).cwiseAbs().maxCoeff());
        dframe = std::max(dframe, (traj.q[i] * fx.v[i] - fxh.v[i]).cwiseAbs().maxCoeff());
    }
    CHECK(dk < 1e-4);
    CHECK(dframe < 1e-4);
}

TEST_CASE("composition: sphere->plane->hyperbolic equals the direct roll") {
    auto S = builtin_manifold("sphere_stereo", {{"n", 2}});
    auto E = builtin_manifold("euclidean", {{"n", 2}});
    auto H = builtin_manifold("hyperbolic_halfplane");
    auto c = builtin_curve("trig", {{"n", 2}, {"seed", 20}, {"amp", 0.2}});
    VectorXd xh0(2);
    xh0 << 0, 1;

    auto t1 = roll_along(*S, *E, *c, MatrixXd::Identity(2, 2), VectorXd::Zero(2),
                         {.step = 1e-3});
    REQUIRE(t1.status.complete);
    auto mid = std::make_shared<HermiteCurve>(
        SampledCurve{t1.t, t1.xihat, fd_derivative(t1.xihat, t1.step())});
    auto t2 = roll_along(*E, *H, *mid, MatrixXd::Identity(2, 2), xh0, {.step = 1e-3});
    REQUIRE(t2.status.complete);
    auto chained = compose_rollings(t1, t2);

    auto direct = roll_along(*S, *H, *c, MatrixXd::Identity(2, 2), xh0, {.step = 1e-3});
    REQUIRE(direct.status.complete);
    CHECK((chained.xihat - direct.xihat).cwiseAbs().maxCoeff() < 1e-5);
    double dq = 0;
    for (int i = 0; i < chained.size(); i += 100)
        dq = std::max(dq, (chained.q[i] - direct.q[i]).cwiseAbs().maxCoeff());
    CHECK(dq < 1e-5);
    // the chained trajectory is itself a rolling
    auto rep = verify_rolling(*S, *H, chained);
    CHECK(rep.max_noslip < 1e-5);
    CHECK(rep.max_notwist < 1e-5);
}

TEST_CASE("composing with the identity rolling returns the input") {
    auto S = builtin_manifold("sphere_stereo", {{"n", 2}});
    auto E = builtin_manifold("euclidean", {{"n", 2}});
    auto c = builtin_curve("latitude", {{"colat", 1.2}});
    auto t1 = roll_along(*S, *E, *c, MatrixXd::Identity(2, 2), VectorXd::Zero(2),
                         {.step = 1e-3});
    auto mid = std::make_shared<HermiteCurve>(
        SampledCurve{t1.t, t1.xihat, fd_derivative(t1.xihat, t1.step())});
    auto ident = roll_along(*E, *E, *mid, MatrixXd::Identity(2, 2),
                            t1.xihat.row(0).transpose(), {.step = 1e-3});
    auto comp = compose_rollings(t1, ident);
    CHECK((comp.xihat - t1.xihat).cwiseAbs().maxCoeff() < 1e-8);
    double dq = 0;
    for (int i = 0; i < comp.size(); i += 200)
        dq = std::max(dq, (comp.q[i] - t1.q[i]).cwiseAbs().maxCoeff());
    CHECK(dq < 1e-10);
}

TEST_CASE("rolling back from the plane inverts the configuration") {
    auto S = builtin_manifold("sphere_stereo", {{"n", 2}});
    auto E = builtin_manifold("euclidean", {{"n", 2}});
    auto c = builtin_curve("trig", {{"n", 2}, {"seed", 23}, {"amp", 0.3}});
    auto fwd = roll_along(*S, *E, *c, MatrixXd::Identity(2, 2), VectorXd::Zero(2),
                          {.step = 1e-3});
    REQUIRE(fwd.status.complete);
    auto mid = std::make_shared<HermiteCurve>(
        SampledCurve{fwd.t, fwd.xihat, fd_derivative(fwd.xihat, fwd.step())});
    auto back = roll_along(*E, *S, *mid, MatrixXd::Identity(2, 2),
                           c->point(0.0), {.step = 1e-3});
    REQUIRE(back.status.complete);
    CHECK((back.xihat - fwd.xi).cwiseAbs().maxCoeff() < 1e-6);
    auto comp = compose_rollings(fwd, back);
    double dev = 0;
    for (int i = 0; i < comp.size(); i += 100)
        dev = std::max(dev, (comp.q[i] - MatrixXd::Identity(2, 2)).cwiseAbs().maxCoeff());
    CHECK(dev < 1e-6);
}

TEST_CASE("chart exit on the target produces a partial trajectory") {
    auto S = builtin_manifold("sphere_stereo", {{"n", 2}});
    std::const_pointer_cast<Manifold>(S)->set_chart_bound(3.0);
    auto E = builtin_manifold("euclidean", {{"n", 2}});
    auto line = builtin_curve("line", {{"n", 2}, {"len", 3.2}});
    auto traj = roll_along(*E, *S, *line, MatrixXd::Identity(2, 2), VectorXd::Zero(2),
                           {.step = 1e-3});
    CHECK_FALSE(traj.status.complete);
    CHECK(traj.status.exit_time > 2.0);  // tan(t/2) = 3 around t = 2.5
    CHECK(traj.size() < 3201);
    auto rep = verify_rolling(*E, *S, traj);
    CHECK(rep.max_noslip < 1e-6);
    CHECK_FALSE(rep.complete);
}

TEST_CASE("rolling onto su2 keeps q in SO(3) and the state on S^3") {
    auto E = builtin_manifold("euclidean", {{"n", 3}});
    auto G = builtin_manifold("su2");
    auto c = builtin_curve("helix", {{"kappa", 1.0}, {"tau", 0.5}, {"len", 3.0}});
    VectorXd g0(4);
    g0 << 1, 0, 0, 0;
    auto traj = roll_along(*E, *G, *c, MatrixXd::Identity(3, 3), g0, {.step = 1e-3});
    REQUIRE(traj.status.complete);
    for (int i = 0; i < traj.size(); i += 250) {
        CHECK(std::abs(traj.xihat.row(i).norm() - 1.0) < 1e-12);
        CHECK((traj.q[i].transpose() * traj.q[i] - MatrixXd::Identity(3, 3))
                  .cwiseAbs()
                  .maxCoeff() < 1e-9);
    }
    auto rep = verify_rolling(*E, *G, traj);
    CHECK(rep.max_noslip < 1e-6);
    CHECK(rep.max_notwist < 1e-6);
}

TEST_CASE("verify_rolling residuals converge at 4th order") {
    auto S = builtin_manifold("sphere_stereo", {{"n", 2}});
    auto E = builtin_manifold("euclidean", {{"n", 2}});
    auto c = builtin_curve("trig", {{"n", 2}, {"seed", 27}, {"amp", 0.35}});
    auto res_at = [&](double h) {
        auto traj = roll_along(*S, *E, *c, MatrixXd::Identity(2, 2), VectorXd::Zero(2),
                               {.step = h});
        auto rep = verify_rolling(*S, *E, traj);
        return rep.max_noslip + rep.max_notwist;
    };
    double e1 = res_at(4e-2), e2 = res_at(2e-2);
    CHECK(e1 / e2 > 8.0);
    CHECK(e1 / e2 < 40.0);
}

TEST_CASE("trajectory CSV round trip") {
    auto S = builtin_manifold("sphere_stereo", {{"n", 2}});
    auto E = builtin_manifold("euclidean", {{"n", 2}});
    auto c = builtin_curve("latitude", {{"colat", 1.0}});
    auto traj = roll_along(*S, *E, *c, MatrixXd::Identity(2, 2), VectorXd::Zero(2),
                           {.step = 1e-2});
    std::string path = "traj_roundtrip_test.csv";
    write_trajectory_csv(path, traj);
    auto back = read_trajectory_csv(path, 2, 2, 2);
    CHECK((back.t - traj.t).cwiseAbs().maxCoeff() == 0.0);
    CHECK((back.xi - traj.xi).cwiseAbs().maxCoeff() == 0.0);
    CHECK((back.xihat - traj.xihat).cwiseAbs().maxCoeff() == 0.0);
    double dq = 0;
    for (int i = 0; i < traj.size(); ++i)
        dq = std::max(dq, (back.q[i] - traj.q[i]).cwiseAbs().maxCoeff());
    CHECK(dq == 0.0);
    std::remove(path.c_str());
}

TEST_CASE("bad initial data throws") {
    auto S = builtin_manifold("sphere_stereo", {{"n", 2}});
    auto E = builtin_manifold("euclidean", {{"n", 2}});
    auto c = builtin_curve("circle", {{"r", 1.0}});
    MatrixXd notrot(2, 2);
    notrot << 1, 1, 0, 1;
    CHECK_THROWS_AS(roll_along(*S, *E, *c, notrot, VectorXd::Zero(2)),
                    std::invalid_argument);
    MatrixXd refl(2, 2);
    refl << 1, 0, 0, -1;
    CHECK_THROWS_AS(roll_along(*S, *E, *c, refl, VectorXd::Zero(2)),
                    std::invalid_argument);
    auto M3 = builtin_manifold("euclidean", {{"n", 3}});
    CHECK_THROWS_AS(roll_along(*S, *M3, *c, MatrixXd::Identity(2, 2), VectorXd::Zero(3)),
                    std::invalid_argument);
}
