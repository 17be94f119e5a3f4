#include "doctest.h"

#include <cmath>
#include <fstream>
#include <random>

#include "rollnd/io.hpp"
#include "rollnd/manifold.hpp"

using namespace rollnd;

namespace {
VectorXd vec2(double a, double b) {
    VectorXd v(2);
    v << a, b;
    return v;
}

std::vector<VectorXd> random_points(int count, int n, double scale, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> dist(-scale, scale);
    std::vector<VectorXd> pts;
    for (int i = 0; i < count; ++i) {
        VectorXd p(n);
        for (int j = 0; j < n; ++j) p(j) = dist(rng);
        pts.push_back(p);
    }
    return pts;
}
}  // namespace

TEST_CASE("euclidean model is flat") {
    auto M = builtin_manifold("euclidean", {{"n", 3}});
    VectorXd xi = VectorXd::Random(3);
    CHECK(M->frame(xi).isIdentity(1e-15));
    for (const auto& g : M->christoffel(xi)) CHECK(g.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("sphere_stereo christoffels match the closed form") {
    auto M = builtin_manifold("sphere_stereo", {{"n", 2}});
    auto gam = M->christoffel(vec2(0.5, 0.3));
    MatrixXd g1(2, 2), g2(2, 2);
    g1 << 0, -0.3, 0.3, 0;
    g2 << 0, 0.5, -0.5, 0;
    CHECK((gam[0] - g1).cwiseAbs().maxCoeff() < 1e-15);
    CHECK((gam[1] - g2).cwiseAbs().maxCoeff() < 1e-15);

    // chart center: vanishing Christoffels, conformal factor 1/2
    auto gam0 = M->christoffel(vec2(0, 0));
    CHECK(gam0[0].cwiseAbs().maxCoeff() == 0.0);
    CHECK(gam0[1].cwiseAbs().maxCoeff() == 0.0);
    CHECK((M->frame(vec2(0, 0)) - 0.5 * MatrixXd::Identity(2, 2)).norm() < 1e-15);
}

TEST_CASE("su2 structure constants") {
    auto M = builtin_manifold("su2");
    VectorXd g(4);
    g << 1, 0, 0, 0;
    auto gam = M->christoffel(g);
    CHECK(gam[0](1, 2) == doctest::Approx(-1.0));
    CHECK(gam[0](2, 1) == doctest::Approx(1.0));
    CHECK(gam[1](0, 2) == doctest::Approx(1.0));
    CHECK(gam[2](1, 0) == doctest::Approx(1.0));
    CHECK_THROWS_AS(builtin_manifold("su2", {{"n", 2}}), std::invalid_argument);
}

TEST_CASE("unknown manifold name rejected") {
    CHECK_THROWS_AS(builtin_manifold("torus"), std::invalid_argument);
}

TEST_CASE("inner product in the orthonormal frame") {
    auto E = builtin_manifold("euclidean", {{"n", 2}});
    CHECK(E->inner(vec2(3, 4), vec2(1, 0), vec2(1, 0)) == doctest::Approx(1.0));

    auto S = builtin_manifold("sphere_stereo", {{"n", 2}});
    // chart center: phi = I/2, so a chart unit vector has Riemannian norm 2
    CHECK(S->inner(vec2(0, 0), vec2(1, 0), vec2(1, 0)) == doctest::Approx(4.0));
    // at |xi| = 1 the conformal factor is 1
    CHECK(S->inner(vec2(1, 0), vec2(1, 0), vec2(1, 0)) == doctest::Approx(1.0));
    // and phi^{-1} = (2/(1+|xi|^2)) I in general
    double f = 2.0 / (1.0 + 0.25);
    CHECK(S->inner(vec2(0.5, 0), vec2(1, 0), vec2(1, 0)) == doctest::Approx(f * f));
}

TEST_CASE("frame orthonormality ties the two inner-product routes") {
    for (const char* name : {"sphere_stereo", "hyperbolic_halfplane"}) {
        auto M = builtin_manifold(name, {{"n", 2}});
        std::mt19937 rng(7);
        std::uniform_real_distribution<double> dist(0.1, 1.5);
        for (int i = 0; i < 50; ++i) {
            VectorXd xi = vec2(dist(rng) - 0.8, dist(rng));
            VectorXd v = vec2(dist(rng), dist(rng));
            double a = M->inner(xi, v, v);
            double b = M->to_frame(xi, v).squaredNorm();
            CHECK(a == doctest::Approx(b).epsilon(1e-12));
        }
    }
}

TEST_CASE("christoffel antisymmetry at random points") {
    struct Case {
        const char* name;
        int n;
        double scale;
    };
    for (auto [name, n, scale] : {Case{"euclidean", 3, 2.0}, Case{"sphere_stereo", 3, 2.0},
                                  Case{"sphere_stereo", 2, 2.0}}) {
        auto M = builtin_manifold(name, {{"n", double(n)}});
        for (const auto& p : random_points(100, n, scale, 11)) {
            for (const auto& g : M->christoffel(p))
                CHECK((g + g.transpose()).cwiseAbs().maxCoeff() < 1e-12);
        }
    }
    auto H = builtin_manifold("hyperbolic_halfplane");
    for (auto p : random_points(100, 2, 1.0, 13)) {
        p(1) = std::abs(p(1)) + 0.2;
        for (const auto& g : H->christoffel(p))
            CHECK((g + g.transpose()).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("check_model: euclidean is exact") {
    auto M = builtin_manifold("euclidean", {{"n", 2}});
    auto rep = check_model(*M, random_points(10, 2, 2.0, 3));
    CHECK(rep.max_antisymmetry == 0.0);
    CHECK(rep.max_torsion_residual < 1e-12);
    CHECK(rep.min_det_frame == doctest::Approx(1.0));
}

TEST_CASE("check_model: finite-difference Levi-Civita oracle") {
    auto S = builtin_manifold("sphere_stereo", {{"n", 2}});
    auto rep = check_model(*S, random_points(100, 2, 1.5, 5), 1e-5);
    CHECK(rep.torsion_checked);
    CHECK(rep.max_torsion_residual < 1e-9);
    CHECK(rep.max_antisymmetry < 1e-12);
    CHECK(rep.min_det_frame > 0.0);

    auto H = builtin_manifold("hyperbolic_halfplane");
    std::vector<VectorXd> pts;
    for (auto p : random_points(50, 2, 1.0, 5)) {
        p(1) = std::abs(p(1)) + 0.5;
        pts.push_back(p);
    }
    CHECK(check_model(*H, pts, 1e-5).max_torsion_residual < 1e-8);
}

namespace {
// sphere model with a symmetric part injected into Gamma_1
class CorruptedSphere final : public Manifold {
public:
    explicit CorruptedSphere(double eps)
        : Manifold("corrupted", 2), base_(builtin_manifold("sphere_stereo", {{"n", 2}})),
          eps_(eps) {}
    MatrixXd frame(const VectorXd& xi) const override { return base_->frame(xi); }
    std::vector<MatrixXd> christoffel(const VectorXd& xi) const override {
        auto g = base_->christoffel(xi);
        g[0](0, 1) += eps_;
        g[0](1, 0) += eps_;
        return g;
    }

private:
    ManifoldPtr base_;
    double eps_;
};
}  // namespace

TEST_CASE("check_model: injected symmetric fault is measured exactly") {
    CorruptedSphere bad(0.05);
    auto rep = check_model(bad, random_points(10, 2, 1.0, 9));
    CHECK(rep.max_antisymmetry == doctest::Approx(0.1).epsilon(1e-12));
}

TEST_CASE("su2 bracket relations via finite differences") {
    auto M = builtin_manifold("su2");
    // the three left-invariant fields as functions of the ambient state
    auto X = [&](int m, const VectorXd& g) { return VectorXd(M->frame(g).col(m)); };
    VectorXd g(4);
    g << 0.5, 0.5, 0.5, 0.5;  // a unit quaternion away from identity
    double h = 1e-6;
    auto bracket = [&](int a, int b) {
        // [X_a, X_b] = DX_b(X_a) - DX_a(X_b), directional finite differences
        VectorXd xa = X(a, g), xb = X(b, g);
        VectorXd d1 = (X(b, g + h * xa) - X(b, g - h * xa)) / (2 * h);
        VectorXd d2 = (X(a, g + h * xb) - X(a, g - h * xb)) / (2 * h);
        return VectorXd(d1 - d2);
    };
    CHECK((bracket(0, 1) - 2.0 * X(2, g)).norm() < 1e-6);
    CHECK((bracket(0, 2) + 2.0 * X(1, g)).norm() < 1e-6);
    CHECK((bracket(1, 2) - 2.0 * X(0, g)).norm() < 1e-6);
}

TEST_CASE("grid manifold approximates the analytic sphere") {
    auto S = builtin_manifold("sphere_stereo", {{"n", 2}});
    int m = 41;
    std::vector<VectorXd> axes(2);
    axes[0] = VectorXd::LinSpaced(m, -1.0, 1.0);
    axes[1] = VectorXd::LinSpaced(m, -1.0, 1.0);
    std::vector<MatrixXd> phis;
    std::vector<std::vector<MatrixXd>> gammas;
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            VectorXd p = vec2(axes[0](i), axes[1](j));
            phis.push_back(S->frame(p));
            gammas.push_back(S->christoffel(p));
        }
    auto G = grid_manifold(2, axes, phis, gammas);
    VectorXd p = vec2(0.312, -0.471);
    CHECK((G->frame(p) - S->frame(p)).cwiseAbs().maxCoeff() < 2e-3);
    auto ga = G->christoffel(p);
    auto gs = S->christoffel(p);
    CHECK((ga[0] - gs[0]).cwiseAbs().maxCoeff() < 2e-3);
    CHECK_FALSE(G->in_domain(vec2(2.0, 0.0)));
}

TEST_CASE("manifold spec files: builtin and grid") {
    {
        std::ofstream out("spec_builtin.txt");
        out << "name = sphere_stereo\nn = 3\n";
    }
    auto M = load_manifold_spec("spec_builtin.txt");
    CHECK(M->name() == "sphere_stereo");
    CHECK(M->dim() == 3);

    // grid spec: linear-in-xi frame (euclidean metric scaled), exact under
    // multilinear interpolation
    {
        std::ofstream out("grid_frame.csv");
        out << "xi_1,xi_2,phi_11,phi_12,phi_21,phi_22\n";
        for (double x : {0.0, 0.5, 1.0})
            for (double y : {0.0, 0.5, 1.0})
                out << x << "," << y << "," << 1.0 + x << ",0,0," << 1.0 + x << "\n";
    }
    {
        std::ofstream out("spec_grid.txt");
        out << "name = grid\nn = 2\nframe_csv = grid_frame.csv\nfd_step = 1e-3\n";
    }
    auto G = load_manifold_spec("spec_grid.txt");
    VectorXd p = vec2(0.25, 0.5);
    CHECK(G->frame(p)(0, 0) == doctest::Approx(1.25));
}

TEST_CASE("parse_manifold_arg shorthand") {
    auto M = parse_manifold_arg("sphere_stereo:3");
    CHECK(M->dim() == 3);
    CHECK(parse_manifold_arg("euclidean")->dim() == 2);
}
