#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "rollnd/existence.hpp"
#include "rollnd/frenet.hpp"
#include "rollnd/rolling.hpp"
#include "rollnd/synthesis.hpp"
#include "rollnd/transport.hpp"

namespace py = pybind11;
using namespace rollnd;

namespace {

Options make_opts(double step) {
    Options o;
    o.step = step;
    return o;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "intrinsic rolling of Riemannian manifolds";

    py::class_<Manifold, std::shared_ptr<Manifold>>(m, "Manifold")
        .def_property_readonly("name", &Manifold::name)
        .def_property_readonly("dim", &Manifold::dim)
        .def_property_readonly("state_dim", &Manifold::state_dim)
        .def("frame", &Manifold::frame)
        .def("christoffel", &Manifold::christoffel)
        .def("in_domain", &Manifold::in_domain)
        .def("inner", &Manifold::inner)
        .def("__repr__",
             [](const Manifold& M) { return "<Manifold " + M.name() + ">"; });

    m.def(
        "manifold",
        [](const std::string& arg) {
            return std::const_pointer_cast<Manifold>(parse_manifold_arg(arg));
        },
        py::arg("spec"), "builtin name[:n] or path to a spec file");

    py::class_<SampledCurve>(m, "SampledCurve")
        .def(py::init([](const VectorXd& t, const MatrixXd& xi, const MatrixXd& dxi,
                         bool arc_length) {
                 SampledCurve c{t, xi, dxi};
                 c.arc_length = arc_length;
                 return c;
             }),
             py::arg("t"), py::arg("xi"), py::arg("dxi") = MatrixXd(),
             py::arg("arc_length") = false)
        .def_readonly("t", &SampledCurve::t)
        .def_readonly("xi", &SampledCurve::xi)
        .def_readonly("dxi", &SampledCurve::dxi)
        .def_readonly("arc_length", &SampledCurve::arc_length)
        .def_readonly("closed", &SampledCurve::closed)
        .def_property_readonly("dim", &SampledCurve::dim)
        .def("__len__", &SampledCurve::size);

    py::class_<CurvePath, std::shared_ptr<CurvePath>>(m, "CurvePath")
        .def_property_readonly("dim", &CurvePath::dim)
        .def_property_readonly("t0", &CurvePath::t0)
        .def_property_readonly("t1", &CurvePath::t1)
        .def("point", &CurvePath::point)
        .def("velocity", &CurvePath::velocity)
        .def("sample", &CurvePath::sample)
        .def("sample_step", &CurvePath::sample_step);

    m.def(
        "curve",
        [](const std::string& arg) {
            return std::const_pointer_cast<CurvePath>(parse_curve_arg(arg));
        },
        py::arg("spec"), "builtin curve family:key=val,...");
    m.def(
        "curve_from_samples",
        [](const SampledCurve& c) {
            return std::const_pointer_cast<CurvePath>(make_path(c));
        },
        py::arg("samples"));
    m.def("read_curve_csv", &read_curve_csv);
    m.def("write_curve_csv", &write_curve_csv);

    py::class_<IntegrationStatus>(m, "IntegrationStatus")
        .def_readonly("complete", &IntegrationStatus::complete)
        .def_readonly("exit_time", &IntegrationStatus::exit_time)
        .def_readonly("message", &IntegrationStatus::message);

    py::class_<FrameCurve>(m, "FrameCurve")
        .def_readonly("t", &FrameCurve::t)
        .def_readonly("R", &FrameCurve::R);

    // transport ------------------------------------------------------------
    py::class_<TransportResult>(m, "TransportResult")
        .def_readonly("t", &TransportResult::t)
        .def_readonly("v", &TransportResult::v);
    m.def(
        "parallel_transport",
        [](const Manifold& M, const CurvePath& c, const VectorXd& v0, double step) {
            return parallel_transport(M, c, v0, make_opts(step));
        },
        py::arg("M"), py::arg("curve"), py::arg("v0"), py::arg("step") = 1e-3);

    py::class_<AntiDevelopment>(m, "AntiDevelopment")
        .def_readonly("y", &AntiDevelopment::y)
        .def_readonly("frame", &AntiDevelopment::frame);
    m.def(
        "antidevelop",
        [](const Manifold& M, const CurvePath& c, const MatrixXd& R0, double step) {
            return antidevelop(M, c, R0, make_opts(step));
        },
        py::arg("M"), py::arg("curve"), py::arg("R0"), py::arg("step") = 1e-3);

    py::class_<DevelopResult>(m, "DevelopResult")
        .def_readonly("x", &DevelopResult::x)
        .def_readonly("frame", &DevelopResult::frame)
        .def_readonly("status", &DevelopResult::status);
    m.def(
        "develop",
        [](const Manifold& M, const CurvePath& y, const VectorXd& xi0,
           const MatrixXd& R0, double step) {
            return develop(M, y, xi0, R0, make_opts(step));
        },
        py::arg("M"), py::arg("y"), py::arg("xi0"), py::arg("R0"),
        py::arg("step") = 1e-3);

    py::class_<HolonomyResult>(m, "HolonomyResult")
        .def_readonly("H", &HolonomyResult::H)
        .def_readonly("angle", &HolonomyResult::angle);
    m.def(
        "holonomy",
        [](const Manifold& M, const CurvePath& loop, const MatrixXd& R0,
           double step) { return holonomy(M, loop, R0, make_opts(step)); },
        py::arg("M"), py::arg("loop"), py::arg("R0"), py::arg("step") = 1e-3);

    // frenet ---------------------------------------------------------------
    py::class_<FrenetData>(m, "FrenetData")
        .def_readonly("t", &FrenetData::t)
        .def_readonly("v", &FrenetData::v)
        .def_readonly("kappa", &FrenetData::kappa)
        .def_readonly("complete", &FrenetData::complete)
        .def_readonly("failure_time", &FrenetData::failure_time)
        .def_readonly("failure_level", &FrenetData::failure_level)
        .def("K", &FrenetData::K);
    m.def(
        "frenet_apparatus",
        [](const Manifold& M, const SampledCurve& c) {
            return frenet_apparatus(M, c);
        },
        py::arg("M"), py::arg("curve"));
    m.def(
        "reparametrize_arclength",
        [](const Manifold& M, const CurvePath& c, double step) {
            return reparametrize_arclength(M, c, make_opts(step));
        },
        py::arg("M"), py::arg("curve"), py::arg("step") = 1e-3);

    py::class_<RegularityReport>(m, "RegularityReport")
        .def_readonly("order", &RegularityReport::order)
        .def_readonly("failure_times", &RegularityReport::failure_times);
    m.def(
        "regularity_order",
        [](const Manifold& M, const SampledCurve& c, double eps) {
            return regularity_order(M, c, eps);
        },
        py::arg("M"), py::arg("curve"), py::arg("eps_reg") = 1e-7);

    // rolling --------------------------------------------------------------
    py::class_<RollingTrajectory>(m, "RollingTrajectory")
        .def_readonly("t", &RollingTrajectory::t)
        .def_readonly("xi", &RollingTrajectory::xi)
        .def_readonly("xihat", &RollingTrajectory::xihat)
        .def_readonly("q", &RollingTrajectory::q)
        .def_readonly("status", &RollingTrajectory::status)
        .def("__len__", &RollingTrajectory::size);
    m.def(
        "roll_along",
        [](const Manifold& M, const Manifold& Mh, const CurvePath& x,
           const MatrixXd& q0, const VectorXd& xihat0, double step) {
            return roll_along(M, Mh, x, q0, xihat0, make_opts(step));
        },
        py::arg("M"), py::arg("Mhat"), py::arg("x"), py::arg("q0"),
        py::arg("xihat0"), py::arg("step") = 1e-3);

    py::class_<RollingReport>(m, "RollingReport")
        .def_readonly("max_noslip", &RollingReport::max_noslip)
        .def_readonly("max_notwist", &RollingReport::max_notwist)
        .def_readonly("max_so_drift", &RollingReport::max_so_drift)
        .def_readonly("complete", &RollingReport::complete)
        .def_readonly("exit_time", &RollingReport::exit_time);
    m.def("verify_rolling", &verify_rolling, py::arg("M"), py::arg("Mhat"),
          py::arg("traj"), py::arg("probes") = 3, py::arg("seed") = 1234);
    m.def("compose_rollings", &compose_rollings, py::arg("q1"), py::arg("q2"),
          py::arg("tol") = 1e-6);
    m.def("read_trajectory_csv", &read_trajectory_csv);
    m.def("write_trajectory_csv", &write_trajectory_csv);

    // existence ------------------------------------------------------------
    py::class_<ExistenceVerdict>(m, "ExistenceVerdict")
        .def_readonly("accepted", &ExistenceVerdict::accepted)
        .def_readonly("method", &ExistenceVerdict::method)
        .def_readonly("iota", &ExistenceVerdict::iota)
        .def_readonly("residual", &ExistenceVerdict::residual)
        .def_readonly("degenerate", &ExistenceVerdict::degenerate)
        .def_readonly("orientation_mismatch", &ExistenceVerdict::orientation_mismatch)
        .def_readonly("details", &ExistenceVerdict::details);
    m.def(
        "exists_by_curvature",
        [](const Manifold& M, const Manifold& Mh, const CurvePath& x,
           const CurvePath& xh) { return exists_by_curvature(M, Mh, x, xh); },
        py::arg("M"), py::arg("Mhat"), py::arg("x"), py::arg("xhat"));
    m.def(
        "exists_general",
        [](const Manifold& M, const Manifold& Mh, const CurvePath& x,
           const CurvePath& xh) { return exists_general(M, Mh, x, xh); },
        py::arg("M"), py::arg("Mhat"), py::arg("x"), py::arg("xhat"));

    py::class_<LoopReport>(m, "LoopReport")
        .def_readonly("theta", &LoopReport::theta)
        .def_readonly("alpha", &LoopReport::alpha)
        .def_readonly("closure_integral", &LoopReport::closure_integral)
        .def_readonly("config_loop", &LoopReport::config_loop)
        .def_readonly("c1_loop", &LoopReport::c1_loop)
        .def_readonly("closed", &LoopReport::closed);
    m.def(
        "loop_check",
        [](const Manifold& M, const CurvePath& x) { return loop_check(M, x); },
        py::arg("M"), py::arg("x"));

    py::class_<LoopInQReport>(m, "LoopInQReport")
        .def_readonly("in_Q", &LoopInQReport::in_Q)
        .def_readonly("angle", &LoopInQReport::angle)
        .def_readonly("angle_hat", &LoopInQReport::angle_hat);
    m.def(
        "loop_in_Q",
        [](const Manifold& M, const CurvePath& x, const Manifold& Mh,
           const CurvePath& xh) { return loop_in_Q(M, x, Mh, xh); },
        py::arg("M"), py::arg("x"), py::arg("Mhat"), py::arg("xhat"));

    m.def(
        "junction_compatibility",
        [](const Manifold& M, const Manifold& Mh, const CurvePath& x,
           const CurvePath& xh, double b) {
            return junction_compatibility(M, Mh, x, xh, b);
        },
        py::arg("M"), py::arg("Mhat"), py::arg("x"), py::arg("xhat"), py::arg("b"));
    m.def(
        "minimal_parallel_rank",
        [](const Manifold& M, const CurvePath& x) {
            return minimal_parallel_rank(M, x);
        },
        py::arg("M"), py::arg("x"));

    // synthesis ------------------------------------------------------------
    py::class_<CurvatureProfile>(m, "CurvatureProfile")
        .def(py::init<int, double, double, CurvatureProfile::Fn>(), py::arg("n"),
             py::arg("t0"), py::arg("t1"), py::arg("fn"))
        .def(py::init<int, double, double, const VectorXd&>(), py::arg("n"),
             py::arg("t0"), py::arg("t1"), py::arg("values"))
        .def(py::init<const VectorXd&, const MatrixXd&>(), py::arg("t"),
             py::arg("kappa_samples"))
        .def_property_readonly("dim", &CurvatureProfile::dim)
        .def_property_readonly("t0", &CurvatureProfile::t0)
        .def_property_readonly("t1", &CurvatureProfile::t1)
        .def("kappa", &CurvatureProfile::kappa)
        .def("K", &CurvatureProfile::K);

    py::class_<SynthesisResult>(m, "SynthesisResult")
        .def_readonly("x", &SynthesisResult::x)
        .def_readonly("frame", &SynthesisResult::frame)
        .def_readonly("status", &SynthesisResult::status);
    m.def(
        "synthesize_curve",
        [](const Manifold& Mh, const CurvatureProfile& p, const VectorXd& xh0,
           const MatrixXd& a0, double step) {
            return synthesize_curve(Mh, p, xh0, a0, make_opts(step));
        },
        py::arg("Mhat"), py::arg("profile"), py::arg("xhat0"), py::arg("a0"),
        py::arg("step") = 1e-3);
    m.def(
        "synthesize_rolling",
        [](const Manifold& M, const Manifold& Mh, const CurvePath& x,
           const MatrixXd& q0, const VectorXd& xh0, double step) {
            return synthesize_rolling(M, Mh, x, q0, xh0, make_opts(step));
        },
        py::arg("M"), py::arg("Mhat"), py::arg("x"), py::arg("q0"),
        py::arg("xhat0"), py::arg("step") = 1e-3);
    m.def(
        "backend_euclidean",
        [](const CurvatureProfile& p, const VectorXd& xh0, const MatrixXd& a0,
           double step) { return backend_euclidean(p, xh0, a0, make_opts(step)); },
        py::arg("profile"), py::arg("xhat0"), py::arg("a0"), py::arg("step") = 1e-3);
    m.def(
        "backend_sphere",
        [](const CurvatureProfile& p, const VectorXd& xh0, const MatrixXd& a0,
           double step) { return backend_sphere(p, xh0, a0, make_opts(step)); },
        py::arg("profile"), py::arg("xhat0"), py::arg("a0"), py::arg("step") = 1e-3);
    m.def(
        "backend_su2",
        [](const CurvatureProfile& p, const VectorXd& g0, const MatrixXd& a0,
           double step) { return backend_su2(p, g0, a0, make_opts(step)); },
        py::arg("profile"), py::arg("g0"), py::arg("a0"), py::arg("step") = 1e-3);
}
