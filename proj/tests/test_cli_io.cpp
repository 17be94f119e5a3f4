#include "doctest.h"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "rollnd/curve.hpp"
#include "rollnd/io.hpp"
#include "rollnd/manifold.hpp"
#include "rollnd/rolling.hpp"

using namespace rollnd;
namespace fs = std::filesystem;

namespace {

std::string cli_path() {
    if (const char* p = std::getenv("ROLLND_CLI")) return p;
    return "../rollnd";  // ctest runs from build/tests
}

int run_cli(const std::string& args) {
    int rc = std::system((cli_path() + " " + args + " > /dev/null 2>&1").c_str());
    return WEXITSTATUS(rc);
}

std::string tmpfile(const std::string& name) {
    return (fs::temp_directory_path() / name).string();
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::map<std::string, std::string> parse_report(const std::string& path) {
    std::map<std::string, std::string> kv;
    std::ifstream in(path);
    std::string line;
    while (std::getline(in, line)) {
        auto eq = line.find(" = ");
        if (eq != std::string::npos)
            kv[line.substr(0, eq)] = line.substr(eq + 3);
    }
    return kv;
}

}  // namespace

TEST_CASE("csv tables round trip exactly") {
    MatrixXd data(3, 2);
    data << 0.1, -2.5, 1.0 / 3.0, 1e-17, M_PI, -0.0;
    auto path = tmpfile("rollnd_tab.csv");
    write_csv(path, {"a", "b"}, data);
    auto tab = read_csv(path);
    REQUIRE(tab.header.size() == 2);
    CHECK(tab.col("b") == 1);
    CHECK(tab.col("missing") == -1);
    CHECK((tab.data - data).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("curve csv keeps derivative columns when present") {
    auto c = builtin_curve("circle", {{"r", 1.0}})->sample(100);
    auto path = tmpfile("rollnd_curve.csv");
    write_curve_csv(path, c);
    auto back = read_curve_csv(path);
    CHECK((back.xi - c.xi).cwiseAbs().maxCoeff() == 0.0);
    CHECK((back.dxi - c.dxi).cwiseAbs().maxCoeff() == 0.0);
    CHECK(back.dim() == 2);
}

TEST_CASE("report files and csv outputs are byte-identical across runs") {
    auto out1 = tmpfile("rollnd_t1.csv"), out2 = tmpfile("rollnd_t2.csv");
    auto rep1 = tmpfile("rollnd_r1.txt"), rep2 = tmpfile("rollnd_r2.txt");
    std::string cmd =
        "roll --manifold sphere_stereo:2 --manifold-hat euclidean:2 "
        "--curve latitude:colat=0.9 --step 1e-3";
    REQUIRE(run_cli(cmd + " --out " + out1 + " --report " + rep1) == 0);
    REQUIRE(run_cli(cmd + " --out " + out2 + " --report " + rep2) == 0);
    CHECK(slurp(out1) == slurp(out2));
    CHECK(slurp(rep1) == slurp(rep2));
    CHECK(!slurp(out1).empty());
}

TEST_CASE("key = value config files parse with comments") {
    auto path = tmpfile("rollnd_kv.txt");
    std::ofstream(path) << "# comment\nname = sphere_stereo\n\nn = 2\n";
    auto kv = read_keyvalue_file(path);
    CHECK(kv.at("name") == "sphere_stereo");
    CHECK(kv.at("n") == "2");
    CHECK(kv.size() == 2);
}

TEST_CASE("manifold spec files load builtins with chart bounds") {
    auto path = tmpfile("rollnd_m.spec");
    std::ofstream(path) << "name = sphere_stereo\nn = 3\nchart_bound = 7.5\n";
    auto M = load_manifold_spec(path);
    CHECK(M->dim() == 3);
    CHECK(M->chart_bound() == 7.5);
    // parse_manifold_arg prefers the file when one exists
    CHECK(parse_manifold_arg(path)->chart_bound() == 7.5);
}

TEST_CASE("cli roll: great circle unrolls to a straight segment of length pi/2") {
    auto out = tmpfile("rollnd_gc.csv");
    REQUIRE(run_cli("roll --manifold sphere_stereo:2 --manifold-hat euclidean:2 "
                    "--curve greatcircle:len=1.5707963 --q0 identity --step 1e-3 "
                    "--out " + out) == 0);
    auto traj = read_trajectory_csv(out, 2, 2, 2);
    VectorXd end = traj.xihat.bottomRows(1).transpose();
    CHECK(std::abs(end.norm() - M_PI / 2) < 1e-6);
    for (int i = 0; i < traj.size(); i += 150) {
        VectorXd p = traj.xihat.row(i).transpose();
        CHECK(std::abs(p(0) * end(1) - p(1) * end(0)) < 1e-8);
    }
}

TEST_CASE("cli loopcheck: unit circle report and exit code") {
    auto rep = tmpfile("rollnd_loop.txt");
    CHECK(run_cli("loopcheck --manifold euclidean:2 --curve circle:r=1 --report " +
                  rep) == 0);
    auto kv = parse_report(rep);
    CHECK(kv.at("config_loop") == "true");
    CHECK(kv.at("c1_loop") == "true");
    CHECK(std::abs(std::stod(kv.at("alpha")) - 2 * M_PI) < 1e-7);
    CHECK(std::stod(kv.at("closure_integral_abs")) < 1e-6);
    CHECK(kv.count("tol_loop") == 1);  // tolerances echoed in every report

    // an open arc is not a configuration loop: verdict-reject exit code
    CHECK(run_cli("loopcheck --manifold euclidean:2 --curve circle:r=1,len=3") == 1);
}

TEST_CASE("cli exists: flat-junction pair rejects with exit 1") {
    auto pair = exonepoint_pair();
    auto ca = tmpfile("rollnd_exo_a.csv"), cb = tmpfile("rollnd_exo_b.csv");
    write_curve_csv(ca, pair.first->sample(2000));
    write_curve_csv(cb, pair.second->sample(2000));
    auto rep = tmpfile("rollnd_exo.txt");
    CHECK(run_cli("exists --mode general --manifold euclidean:3 --curve " + ca +
                  " --manifold-hat euclidean:3 --curve-hat " + cb + " --report " +
                  rep) == 1);
    auto kv = parse_report(rep);
    CHECK(kv.at("accepted") == "false");
    CHECK(std::stod(kv.at("residual")) > std::stod(kv.at("tol_gen")));

    // a rotated copy accepts with exit 0
    CHECK(run_cli("exists --manifold euclidean:2 --curve circle:r=1,len=3 "
                  "--manifold-hat euclidean:2 --curve-hat circle:r=1,len=3") == 0);
}

TEST_CASE("cli synth consumes the frenet profile output") {
    auto prof = tmpfile("rollnd_prof.csv"), out = tmpfile("rollnd_syn.csv");
    REQUIRE(run_cli("frenet --manifold euclidean:3 "
                    "--curve helix:kappa=1,tau=0.5,len=4 --out " + prof) == 0);
    REQUIRE(run_cli("synth --manifold-hat euclidean:3 --profile " + prof +
                    " --out " + out) == 0);
    auto c = read_curve_csv(out);
    CHECK(c.dim() == 3);
    CHECK(c.size() > 1000);
    // unit speed
    for (int i = 0; i < c.size(); i += 500)
        CHECK(std::abs(c.dxi.row(i).norm() - 1.0) < 1e-9);
}

TEST_CASE("cli compose chains two trajectory files") {
    auto t1 = tmpfile("rollnd_c1.csv"), t2 = tmpfile("rollnd_c2.csv");
    auto out = tmpfile("rollnd_cc.csv");
    REQUIRE(run_cli("roll --manifold sphere_stereo:2 --manifold-hat euclidean:2 "
                    "--curve latitude:colat=0.9 --out " + t1) == 0);
    // roll the image curve of the first trajectory onward
    auto tr1 = read_trajectory_csv(t1, 2, 2, 2);
    auto mid = tmpfile("rollnd_mid.csv");
    SampledCurve midc{tr1.t, tr1.xihat, MatrixXd()};
    write_curve_csv(mid, midc);
    REQUIRE(run_cli("roll --manifold euclidean:2 --manifold-hat "
                    "hyperbolic_halfplane --curve " + mid + " --xhat0 0,1 --out " +
                    t2) == 0);
    REQUIRE(run_cli("compose --manifold sphere_stereo:2 --manifold-mid euclidean:2 "
                    "--manifold-hat hyperbolic_halfplane --traj " + t1 +
                    " --traj2 " + t2 + " --out " + out) == 0);
    auto comp = read_trajectory_csv(out, 2, 2, 2);
    CHECK(comp.size() == tr1.size());
}

TEST_CASE("cli input errors exit 2") {
    CHECK(run_cli("roll --manifold nosuch:2 --manifold-hat euclidean:2 "
                  "--curve circle:r=1") == 2);
    CHECK(run_cli("frenet --manifold euclidean:2 --curve nosuchfamily:r=1") == 2);
    CHECK(run_cli("synth --manifold-hat euclidean:2 --profile /nonexistent.csv") != 0);
    CHECK(run_cli("roll --manifold euclidean:3 --manifold-hat euclidean:2 "
                  "--curve circle:r=1,n=3") == 2);
}

TEST_CASE("cli numeric failure (chart exit) exits 3") {
    // develop a long straight flat trace on the hyperbolic chart: the image
    // eventually crosses the boundary and the run must truncate
    auto y = tmpfile("rollnd_long.csv");
    write_curve_csv(y, builtin_curve("line", {{"n", 2}, {"len", 40.0},
                                              {"d1", 0.0}, {"d2", -1.0}})
                           ->sample(4000));
    CHECK(run_cli("develop --manifold hyperbolic_halfplane --curve " + y +
                  " --xi0 0,1") == 3);
}

TEST_CASE("cli check-model passes all builtins") {
    for (std::string m : {"euclidean:2", "euclidean:4", "sphere_stereo:3",
                          "hyperbolic_halfplane", "su2"})
        CHECK(run_cli("check-model --manifold " + m) == 0);
}
