// rollnd command-line front end. Exit codes: 0 success, 1 verdict = reject
// (report still written), 2 input error, 3 numeric failure (chart exit).

#include <cmath>
#include <filesystem>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "rollnd/existence.hpp"
#include "rollnd/frenet.hpp"
#include "rollnd/io.hpp"
#include "rollnd/rolling.hpp"
#include "rollnd/synthesis.hpp"
#include "rollnd/transport.hpp"

using namespace rollnd;

namespace {

CurvePtr load_curve(const std::string& arg) {
    if (std::filesystem::exists(arg) && !std::filesystem::is_directory(arg))
        return make_path(read_curve_csv(arg));
    return parse_curve_arg(arg);
}

VectorXd parse_vector(const std::string& arg, int dim) {
    if (arg == "zero" || arg == "origin") return VectorXd::Zero(dim);
    std::stringstream ss(arg);
    std::vector<double> vals;
    std::string item;
    while (std::getline(ss, item, ',')) vals.push_back(std::stod(item));
    if (static_cast<int>(vals.size()) != dim)
        throw std::invalid_argument("expected " + std::to_string(dim) +
                                    " components, got " + std::to_string(vals.size()));
    return Eigen::Map<VectorXd>(vals.data(), dim);
}

MatrixXd parse_matrix(const std::string& arg, int n) {
    if (arg == "identity") return MatrixXd::Identity(n, n);
    std::stringstream ss(arg);
    std::vector<double> vals;
    std::string item;
    while (std::getline(ss, item, ',')) vals.push_back(std::stod(item));
    if (static_cast<int>(vals.size()) != n * n)
        throw std::invalid_argument("expected " + std::to_string(n * n) +
                                    " matrix entries (row-major)");
    MatrixXd m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = vals[i * n + j];
    return m;
}

void emit(const Report& rep, const std::string& path) {
    rep.print(std::cout);
    if (!path.empty()) rep.write(path);
}

struct CommonArgs {
    std::string manifold, manifold_hat, curve, curve_hat, out, report;
    double step = 1e-3;
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"intrinsic rolling of Riemannian manifolds"};
    app.require_subcommand(1);

    CommonArgs a;
    std::string q0_arg = "identity", r0_arg = "identity", a0_arg = "identity";
    std::string xhat0_arg = "zero", xi0_arg = "zero";
    std::string mode = "auto";
    std::string profile_path;
    std::string traj2_path, manifold_mid;
    double tol_curv = 1e-4, tol_gen = 1e-5;
    double tol_loop = 1e-5, tol_angle = 1e-6, tol_close = 1e-6, c2_jump = 0.1;

    auto add_common = [&](CLI::App* sub, bool hat, bool curve2) {
        sub->add_option("--manifold", a.manifold, "builtin name[:n] or spec file")
            ->required();
        if (hat)
            sub->add_option("--manifold-hat", a.manifold_hat,
                            "target manifold, same syntax")
                ->required();
        sub->add_option("--curve", a.curve, "builtin family:params or curve CSV")
            ->required();
        if (curve2)
            sub->add_option("--curve-hat", a.curve_hat, "second curve")->required();
        sub->add_option("--step", a.step, "RK4 step");
        sub->add_option("--out", a.out, "output CSV path");
        sub->add_option("--report", a.report, "report file (also printed)");
    };

    auto* antidev = app.add_subcommand("antidev", "anti-development (flat trace)");
    add_common(antidev, false, false);
    antidev->add_option("--r0", r0_arg, "initial frame, identity or row-major");

    auto* develop = app.add_subcommand("develop", "develop a flat curve onto M");
    add_common(develop, false, false);
    develop->add_option("--xi0", xi0_arg, "starting chart point");
    develop->add_option("--r0", r0_arg, "initial frame");

    auto* roll = app.add_subcommand("roll", "integrate the rolling system");
    add_common(roll, true, false);
    roll->add_option("--q0", q0_arg, "initial rotation, identity or row-major");
    roll->add_option("--xhat0", xhat0_arg, "starting point on the target chart");

    auto* frenet = app.add_subcommand("frenet", "Frenet apparatus and curvatures");
    add_common(frenet, false, false);

    auto* synth = app.add_subcommand("synth", "synthesize a curve from curvatures");
    synth->add_option("--manifold-hat", a.manifold_hat, "target manifold")->required();
    synth->add_option("--profile", profile_path, "profile CSV: t, kappa_1..kappa_{n-1}")
        ->required();
    synth->add_option("--xhat0", xhat0_arg, "starting chart point");
    synth->add_option("--a0", a0_arg, "initial frame, identity or row-major");
    synth->add_option("--step", a.step, "RK4 step");
    synth->add_option("--out", a.out, "output curve CSV");
    synth->add_option("--report", a.report, "report file");

    auto* exists = app.add_subcommand("exists", "rolling-existence verdict");
    add_common(exists, true, true);
    exists->add_option("--mode", mode, "curvature | general | auto");
    exists->add_option("--tol-curv", tol_curv, "curvature-matching tolerance");
    exists->add_option("--tol-gen", tol_gen, "anti-development tolerance");

    auto* loopcheck = app.add_subcommand("loopcheck", "loop diagnostics (n = 2)");
    add_common(loopcheck, false, false);
    loopcheck->add_option("--tol-loop", tol_loop, "closure-integral gate");
    loopcheck->add_option("--tol-angle", tol_angle, "angle comparison tolerance");
    loopcheck->add_option("--tol-close", tol_close, "geometric closure tolerance");
    loopcheck->add_option("--c2-jump", c2_jump, "curvature jump treated as corner");

    auto* compose = app.add_subcommand("compose", "chain two rolling trajectories");
    compose->add_option("--manifold", a.manifold, "first manifold")->required();
    compose->add_option("--manifold-mid", manifold_mid, "middle manifold")->required();
    compose->add_option("--manifold-hat", a.manifold_hat, "last manifold")->required();
    compose->add_option("--traj", a.curve, "trajectory CSV of M rolling on M_mid")
        ->required();
    compose->add_option("--traj2", traj2_path, "trajectory CSV of M_mid on M_hat")
        ->required();
    compose->add_option("--out", a.out, "output trajectory CSV");
    compose->add_option("--report", a.report, "report file");

    auto* checkmodel = app.add_subcommand("check-model", "manifold model sanity");
    checkmodel->add_option("--manifold", a.manifold, "model to check")->required();
    checkmodel->add_option("--report", a.report, "report file");

    CLI11_PARSE(app, argc, argv);

    try {
        if (antidev->parsed()) {
            auto M = parse_manifold_arg(a.manifold);
            auto x = load_curve(a.curve);
            MatrixXd R0 = parse_matrix(r0_arg, M->dim());
            auto ad = antidevelop(*M, *x, R0, {.step = a.step});
            if (!a.out.empty()) write_curve_csv(a.out, ad.y);
            Report rep;
            rep.set("command", std::string("antidev"));
            rep.set("step", a.step);
            rep.set("nodes", static_cast<double>(ad.y.size()));
            rep.set("flat_length",
                    (ad.y.xi.bottomRows(1) - ad.y.xi.topRows(1)).norm());
            emit(rep, a.report);
            return 0;
        }
        if (develop->parsed()) {
            auto M = parse_manifold_arg(a.manifold);
            auto y = load_curve(a.curve);
            VectorXd xi0 = parse_vector(xi0_arg, M->state_dim());
            MatrixXd R0 = parse_matrix(r0_arg, M->dim());
            auto dev = rollnd::develop(*M, *y, xi0, R0, {.step = a.step});
            if (!a.out.empty()) write_curve_csv(a.out, dev.x);
            Report rep;
            rep.set("command", std::string("develop"));
            rep.set("step", a.step);
            rep.set("complete", dev.status.complete);
            if (!dev.status.complete) rep.set("exit_time", dev.status.exit_time);
            emit(rep, a.report);
            return dev.status.complete ? 0 : 3;
        }
        if (roll->parsed()) {
            auto M = parse_manifold_arg(a.manifold);
            auto Mh = parse_manifold_arg(a.manifold_hat);
            auto x = load_curve(a.curve);
            MatrixXd q0 = parse_matrix(q0_arg, M->dim());
            VectorXd xh0 = parse_vector(xhat0_arg, Mh->state_dim());
            auto traj = roll_along(*M, *Mh, *x, q0, xh0, {.step = a.step});
            if (!a.out.empty()) write_trajectory_csv(a.out, traj);
            auto ver = verify_rolling(*M, *Mh, traj);
            Report rep;
            rep.set("command", std::string("roll"));
            rep.set("step", a.step);
            rep.set("nodes", static_cast<double>(traj.size()));
            rep.set("complete", traj.status.complete);
            if (!traj.status.complete) rep.set("exit_time", traj.status.exit_time);
            rep.set("max_noslip", ver.max_noslip);
            rep.set("max_notwist", ver.max_notwist);
            rep.set("max_so_drift", ver.max_so_drift);
            emit(rep, a.report);
            return traj.status.complete ? 0 : 3;
        }
        if (frenet->parsed()) {
            auto M = parse_manifold_arg(a.manifold);
            auto x = load_curve(a.curve);
            SampledCurve cx = reparametrize_arclength(*M, *x, {.step = a.step});
            auto fd = frenet_apparatus(*M, cx);
            if (!a.out.empty()) {
                std::vector<std::string> header{"t"};
                for (int j = 0; j < fd.kappa.cols(); ++j)
                    header.push_back("kappa_" + std::to_string(j + 1));
                MatrixXd data(fd.t.size(), 1 + fd.kappa.cols());
                data.col(0) = fd.t;
                data.rightCols(fd.kappa.cols()) = fd.kappa;
                write_csv(a.out, header, data);
            }
            Report rep;
            rep.set("command", std::string("frenet"));
            rep.set("step", a.step);
            rep.set("complete", fd.complete);
            rep.set("levels", static_cast<double>(fd.kappa.cols()));
            if (!fd.complete) {
                rep.set("failure_time", fd.failure_time);
                rep.set("failure_level", static_cast<double>(fd.failure_level));
            }
            emit(rep, a.report);
            return 0;
        }
        if (synth->parsed()) {
            auto Mh = parse_manifold_arg(a.manifold_hat);
            CsvTable tab = read_csv(profile_path);
            int tcol = tab.col("t");
            if (tcol < 0)
                throw std::invalid_argument("profile csv must have a 't' column");
            int nk = 0;
            while (tab.col("kappa_" + std::to_string(nk + 1)) >= 0) ++nk;
            if (nk != Mh->dim() - 1)
                throw std::invalid_argument("profile has " + std::to_string(nk) +
                                            " curvatures, manifold needs " +
                                            std::to_string(Mh->dim() - 1));
            MatrixXd ks(tab.data.rows(), nk);
            for (int j = 0; j < nk; ++j)
                ks.col(j) = tab.data.col(tab.col("kappa_" + std::to_string(j + 1)));
            CurvatureProfile profile(tab.data.col(tcol), ks);
            VectorXd xh0 = parse_vector(xhat0_arg, Mh->state_dim());
            MatrixXd a0 = parse_matrix(a0_arg, Mh->dim());
            auto syn = synthesize_curve(*Mh, profile, xh0, a0, {.step = a.step});
            if (!a.out.empty()) write_curve_csv(a.out, syn.x);
            Report rep;
            rep.set("command", std::string("synth"));
            rep.set("step", a.step);
            rep.set("nodes", static_cast<double>(syn.x.size()));
            rep.set("complete", syn.status.complete);
            if (!syn.status.complete) rep.set("exit_time", syn.status.exit_time);
            emit(rep, a.report);
            return syn.status.complete ? 0 : 3;
        }
        if (exists->parsed()) {
            auto M = parse_manifold_arg(a.manifold);
            auto Mh = parse_manifold_arg(a.manifold_hat);
            auto x = load_curve(a.curve);
            auto xh = load_curve(a.curve_hat);
            ExistenceOptions opts;
            opts.step = a.step;
            opts.tol_curv = tol_curv;
            opts.tol_gen = tol_gen;
            ExistenceVerdict v;
            if (mode == "curvature") {
                v = exists_by_curvature(*M, *Mh, *x, *xh, opts);
            } else if (mode == "general") {
                v = exists_general(*M, *Mh, *x, *xh, opts);
            } else if (mode == "auto") {
                try {
                    v = exists_by_curvature(*M, *Mh, *x, *xh, opts);
                } catch (const std::invalid_argument&) {
                    v = exists_general(*M, *Mh, *x, *xh, opts);
                }
            } else {
                throw std::invalid_argument("unknown mode: " + mode);
            }
            Report rep;
            rep.set("command", std::string("exists"));
            rep.set("mode", mode);
            rep.set("method", v.method);
            rep.set("accepted", v.accepted);
            rep.set("residual", v.residual);
            rep.set("degenerate", v.degenerate);
            rep.set("orientation_mismatch", v.orientation_mismatch);
            if (v.iota.size() > 0) rep.set_matrix("iota", v.iota);
            if (!v.details.empty()) rep.set("details", v.details);
            rep.set("step", a.step);
            rep.set("tol_curv", tol_curv);
            rep.set("tol_gen", tol_gen);
            emit(rep, a.report);
            return v.accepted ? 0 : 1;
        }
        if (loopcheck->parsed()) {
            auto M = parse_manifold_arg(a.manifold);
            auto x = load_curve(a.curve);
            LoopOptions opts;
            opts.step = a.step;
            opts.tol_loop = tol_loop;
            opts.tol_angle = tol_angle;
            opts.tol_close = tol_close;
            opts.c2_jump = c2_jump;
            auto lr = loop_check(*M, *x, opts);
            Report rep;
            rep.set("command", std::string("loopcheck"));
            rep.set("closed", lr.closed);
            rep.set("alpha", lr.alpha);
            rep.set("theta", lr.theta);
            rep.set("closure_integral_abs", std::abs(lr.closure_integral));
            rep.set("config_loop", lr.config_loop);
            rep.set("c1_loop", lr.c1_loop);
            rep.set("step", a.step);
            rep.set("tol_loop", tol_loop);
            rep.set("tol_angle", tol_angle);
            rep.set("tol_close", tol_close);
            emit(rep, a.report);
            return lr.config_loop ? 0 : 1;
        }
        if (compose->parsed()) {
            auto M = parse_manifold_arg(a.manifold);
            auto Mm = parse_manifold_arg(manifold_mid);
            auto Mh = parse_manifold_arg(a.manifold_hat);
            auto t1 = read_trajectory_csv(a.curve, M->state_dim(), Mm->state_dim(),
                                          M->dim());
            auto t2 = read_trajectory_csv(traj2_path, Mm->state_dim(),
                                          Mh->state_dim(), Mm->dim());
            auto comp = compose_rollings(t1, t2);
            if (!a.out.empty()) write_trajectory_csv(a.out, comp);
            Report rep;
            rep.set("command", std::string("compose"));
            rep.set("nodes", static_cast<double>(comp.size()));
            emit(rep, a.report);
            return 0;
        }
        if (checkmodel->parsed()) {
            auto M = parse_manifold_arg(a.manifold);
            const int n = M->dim();
            // probe points: chart origin pushed along each axis, kept in-domain
            std::vector<VectorXd> pts;
            VectorXd base = VectorXd::Zero(M->state_dim());
            if (M->name() == "hyperbolic_halfplane") base(1) = 1.0;
            if (M->name() == "su2") base(0) = 1.0;
            pts.push_back(base);
            for (int k = 0; k < M->state_dim(); ++k)
                for (double s : {-0.3, 0.2}) {
                    VectorXd p = base + s * VectorXd::Unit(M->state_dim(), k);
                    M->normalize_state(p);
                    if (M->in_domain(p)) pts.push_back(p);
                }
            double max_asym = 0.0, max_frame_defect = 0.0, max_round_trip = 0.0;
            for (const auto& p : pts) {
                auto gam = M->christoffel(p);
                for (const auto& g : gam)
                    max_asym = std::max(max_asym,
                                        (g + g.transpose()).cwiseAbs().maxCoeff());
                MatrixXd phi = M->frame(p);
                Eigen::JacobiSVD<MatrixXd> svd(phi);
                if (svd.singularValues().minCoeff() < 1e-12)
                    max_frame_defect = 1.0;
                VectorXd u = VectorXd::LinSpaced(n, 0.5, 1.0);
                VectorXd rt = M->to_frame(p, M->from_frame(p, u));
                max_round_trip = std::max(max_round_trip, (rt - u).norm());
            }
            bool ok = max_asym < 1e-10 && max_frame_defect == 0.0 &&
                      max_round_trip < 1e-10;
            Report rep;
            rep.set("command", std::string("check-model"));
            rep.set("manifold", M->name());
            rep.set("dim", static_cast<double>(n));
            rep.set("state_dim", static_cast<double>(M->state_dim()));
            rep.set("probe_points", static_cast<double>(pts.size()));
            rep.set("max_gamma_asymmetry", max_asym);
            rep.set("max_frame_round_trip", max_round_trip);
            rep.set("frame_nonsingular", max_frame_defect == 0.0);
            rep.set("ok", ok);
            emit(rep, a.report);
            return ok ? 0 : 2;
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const std::runtime_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 2;
}
