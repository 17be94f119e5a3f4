#include "rollnd/curve.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "rollnd/io.hpp"
#include "rollnd/util.hpp"

namespace rollnd {

SampledCurve CurvePath::sample(int N) const {
    if (N < 1) throw std::invalid_argument("sample: need at least one interval");
    SampledCurve c;
    c.t.resize(N + 1);
    c.xi.resize(N + 1, dim());
    c.dxi.resize(N + 1, dim());
    double h = (t1_ - t0_) / N;
    for (int i = 0; i <= N; ++i) {
        double t = t0_ + i * h;
        c.t(i) = t;
        c.xi.row(i) = point(t);
        c.dxi.row(i) = velocity(t);
    }
    c.closed = closed;
    c.arc_length = arc_length;
    return c;
}

SampledCurve CurvePath::sample_step(double h) const {
    int N = std::max(1, static_cast<int>(std::ceil((t1_ - t0_) / h - 1e-12)));
    return sample(N);
}

HermiteCurve::HermiteCurve(SampledCurve c) : CurvePath(c.t(0), c.t(c.t.size() - 1)) {
    if (c.size() < 2) throw std::invalid_argument("HermiteCurve: need >= 2 samples");
    if (c.dxi.rows() != c.xi.rows()) {
        if (c.size() < 5)
            throw std::invalid_argument("HermiteCurve: need derivatives or >= 5 samples");
        c.dxi = fd_derivative(c.xi, c.step());
    }
    closed = c.closed;
    arc_length = c.arc_length;
    data_ = std::move(c);
}

namespace {
// Hermite basis on [0,1]: value and derivative.
inline void hermite_weights(double s, double* w, double* dw) {
    double s2 = s * s, s3 = s2 * s;
    w[0] = 2 * s3 - 3 * s2 + 1;
    w[1] = s3 - 2 * s2 + s;
    w[2] = -2 * s3 + 3 * s2;
    w[3] = s3 - s2;
    dw[0] = 6 * s2 - 6 * s;
    dw[1] = 3 * s2 - 4 * s + 1;
    dw[2] = -6 * s2 + 6 * s;
    dw[3] = 3 * s2 - 2 * s;
}
}  // namespace

VectorXd HermiteCurve::point(double t) const {
    const double h = data_.step();
    int i = static_cast<int>(std::floor((t - data_.t0()) / h));
    i = std::max(0, std::min(i, data_.size() - 2));
    double s = (t - data_.t(i)) / h;
    double w[4], dw[4];
    hermite_weights(s, w, dw);
    return w[0] * data_.xi.row(i).transpose() +
           w[1] * h * data_.dxi.row(i).transpose() +
           w[2] * data_.xi.row(i + 1).transpose() +
           w[3] * h * data_.dxi.row(i + 1).transpose();
}

VectorXd HermiteCurve::velocity(double t) const {
    const double h = data_.step();
    int i = static_cast<int>(std::floor((t - data_.t0()) / h));
    i = std::max(0, std::min(i, data_.size() - 2));
    double s = (t - data_.t(i)) / h;
    double w[4], dw[4];
    hermite_weights(s, w, dw);
    return (dw[0] * data_.xi.row(i).transpose() +
            dw[1] * h * data_.dxi.row(i).transpose() +
            dw[2] * data_.xi.row(i + 1).transpose() +
            dw[3] * h * data_.dxi.row(i + 1).transpose()) / h;
}

CurvePtr make_path(const SampledCurve& c) {
    return std::make_shared<HermiteCurve>(c);
}

// ---------------------------------------------------------------------------
// Builtin families.

namespace {

double get(const std::map<std::string, double>& p, const std::string& k, double dflt) {
    auto it = p.find(k);
    return it == p.end() ? dflt : it->second;
}

bool has(const std::map<std::string, double>& p, const std::string& k) {
    return p.count(k) != 0;
}

double bump(double t) { return t == 0.0 ? 0.0 : std::exp(-1.0 / (t * t)); }
double dbump(double t) { return t == 0.0 ? 0.0 : bump(t) * 2.0 / (t * t * t); }

std::shared_ptr<AnalyticCurve> make_analytic(int n, double t0, double t1,
                                             AnalyticCurve::Fn pt,
                                             AnalyticCurve::Fn vel) {
    return std::make_shared<AnalyticCurve>(n, t0, t1, std::move(pt), std::move(vel));
}

}  // namespace

CurvePtr builtin_curve(const std::string& family,
                       const std::map<std::string, double>& params) {
    if (family == "line") {
        int n = static_cast<int>(get(params, "n", 2));
        double len = get(params, "len", 1.0);
        VectorXd d = VectorXd::Zero(n);
        bool custom = false;
        for (int i = 0; i < n; ++i)
            if (has(params, "d" + std::to_string(i + 1))) {
                d(i) = get(params, "d" + std::to_string(i + 1), 0.0);
                custom = true;
            }
        if (!custom) d(0) = 1.0;
        d /= d.norm();
        auto c = make_analytic(
            n, 0.0, len, [d](double t) { return VectorXd(t * d); },
            [d](double) { return d; });
        c->arc_length = true;
        return c;
    }
    if (family == "circle") {
        int n = static_cast<int>(get(params, "n", 2));
        if (n < 2) throw std::invalid_argument("circle: need n >= 2");
        double r = get(params, "r", 1.0);
        double len = get(params, "len", 2.0 * M_PI * r);
        auto c = make_analytic(
            n, 0.0, len,
            [n, r](double t) {
                VectorXd p = VectorXd::Zero(n);
                p(0) = r * std::cos(t / r);
                p(1) = r * std::sin(t / r);
                return p;
            },
            [n, r](double t) {
                VectorXd v = VectorXd::Zero(n);
                v(0) = -std::sin(t / r);
                v(1) = std::cos(t / r);
                return v;
            });
        c->arc_length = true;
        c->closed = std::abs(len - 2.0 * M_PI * r) < 1e-9;
        return c;
    }
    if (family == "latitude") {
        int n = static_cast<int>(get(params, "n", 2));
        double colat = get(params, "colat", M_PI / 3.0);
        if (colat <= 0 || colat >= M_PI)
            throw std::invalid_argument("latitude: colat must be in (0, pi)");
        double sc = std::sin(colat);
        double rho = std::tan(0.5 * colat);
        double len = get(params, "len", 2.0 * M_PI * sc);
        auto c = make_analytic(
            n, 0.0, len,
            [n, rho, sc](double t) {
                VectorXd p = VectorXd::Zero(n);
                p(0) = rho * std::cos(t / sc);
                p(1) = rho * std::sin(t / sc);
                return p;
            },
            [n, rho, sc](double t) {
                VectorXd v = VectorXd::Zero(n);
                v(0) = -rho / sc * std::sin(t / sc);
                v(1) = rho / sc * std::cos(t / sc);
                return v;
            });
        c->arc_length = true;  // unit speed on the stereographic sphere chart
        c->closed = std::abs(len - 2.0 * M_PI * sc) < 1e-9;
        return c;
    }
    if (family == "greatcircle") {
        int n = static_cast<int>(get(params, "n", 2));
        double len = get(params, "len", M_PI / 2.0);
        if (len >= M_PI) throw std::invalid_argument("greatcircle: len must be < pi");
        auto c = make_analytic(
            n, 0.0, len,
            [n](double t) {
                VectorXd p = VectorXd::Zero(n);
                p(0) = std::tan(0.5 * t);
                return p;
            },
            [n](double t) {
                VectorXd v = VectorXd::Zero(n);
                double cs = std::cos(0.5 * t);
                v(0) = 0.5 / (cs * cs);
                return v;
            });
        c->arc_length = true;
        return c;
    }
    if (family == "helix") {
        double kappa = get(params, "kappa", 1.0);
        double tau = get(params, "tau", 0.5);
        double len = get(params, "len", 4.0 * M_PI);
        double den = kappa * kappa + tau * tau;
        double a = kappa / den, b = tau / den, c = 1.0 / std::sqrt(den);
        auto path = make_analytic(
            3, 0.0, len,
            [a, b, c](double t) {
                VectorXd p(3);
                p << a * std::cos(t / c), a * std::sin(t / c), b * t / c;
                return p;
            },
            [a, b, c](double t) {
                VectorXd v(3);
                v << -a / c * std::sin(t / c), a / c * std::cos(t / c), b / c;
                return v;
            });
        path->arc_length = true;
        return path;
    }
    if (family == "clothoid") {
        double len = get(params, "len", 2.0);
        auto pos = [](double t) {
            VectorXd p(2);
            p(0) = adaptive_simpson([](double s) { return std::cos(0.5 * s * s); }, 0, t);
            p(1) = adaptive_simpson([](double s) { return std::sin(0.5 * s * s); }, 0, t);
            return p;
        };
        auto c = make_analytic(
            2, 0.0, len, pos,
            [](double t) {
                VectorXd v(2);
                v << std::cos(0.5 * t * t), std::sin(0.5 * t * t);
                return v;
            });
        c->arc_length = true;
        return c;
    }
    if (family == "trig") {
        int n = static_cast<int>(get(params, "n", 2));
        double len = get(params, "len", 2.0);
        double amp = get(params, "amp", 0.3);
        int seed = static_cast<int>(get(params, "seed", 1));
        int modes = 3;
        std::mt19937 rng(static_cast<unsigned>(seed));
        std::uniform_real_distribution<double> dist(-1.0, 1.0);
        MatrixXd A(n, modes), B(n, modes);
        for (int i = 0; i < n; ++i)
            for (int m = 0; m < modes; ++m) {
                A(i, m) = amp * dist(rng) / (m + 1);
                B(i, m) = amp * dist(rng) / (m + 1);
            }
        VectorXd base = VectorXd::Zero(n);
        for (int i = 0; i < n; ++i)
            base(i) = get(params, "c" + std::to_string(i + 1), 0.0);
        double om = 2.0 * M_PI / len;
        return make_analytic(
            n, 0.0, len,
            [n, modes, A, B, base, om](double t) {
                VectorXd p = base;
                for (int m = 0; m < modes; ++m)
                    p += A.col(m) * std::cos((m + 1) * om * t) +
                         B.col(m) * std::sin((m + 1) * om * t);
                return p;
            },
            [n, modes, A, B, om](double t) {
                VectorXd v = VectorXd::Zero(n);
                for (int m = 0; m < modes; ++m) {
                    double w = (m + 1) * om;
                    v += -w * A.col(m) * std::sin((m + 1) * om * t) +
                         w * B.col(m) * std::cos((m + 1) * om * t);
                }
                return v;
            });
    }
    if (family == "trig_su2") {
        double len = get(params, "len", 2.0);
        double amp = get(params, "amp", 0.2);
        int seed = static_cast<int>(get(params, "seed", 1));
        int modes = 2;
        std::mt19937 rng(static_cast<unsigned>(seed));
        std::uniform_real_distribution<double> dist(-1.0, 1.0);
        MatrixXd A(4, modes), B(4, modes);
        for (int i = 0; i < 4; ++i)
            for (int m = 0; m < modes; ++m) {
                A(i, m) = amp * dist(rng) / (m + 1);
                B(i, m) = amp * dist(rng) / (m + 1);
            }
        double om = 2.0 * M_PI / len;
        auto raw = [A, B, modes, om](double t) {
            VectorXd q(4);
            q << 1, 0, 0, 0;
            for (int m = 0; m < modes; ++m)
                q += A.col(m) * std::cos((m + 1) * om * t) +
                     B.col(m) * std::sin((m + 1) * om * t);
            return q;
        };
        auto draw = [A, B, modes, om](double t) {
            VectorXd v = VectorXd::Zero(4);
            for (int m = 0; m < modes; ++m) {
                double w = (m + 1) * om;
                v += -w * A.col(m) * std::sin((m + 1) * om * t) +
                     w * B.col(m) * std::cos((m + 1) * om * t);
            }
            return v;
        };
        return make_analytic(
            4, 0.0, len,
            [raw](double t) {
                VectorXd q = raw(t);
                return VectorXd(q / q.norm());
            },
            [raw, draw](double t) {
                VectorXd q = raw(t), dq = draw(t);
                double nrm = q.norm();
                return VectorXd(dq / nrm - q * q.dot(dq) / (nrm * nrm * nrm));
            });
    }
    throw std::invalid_argument("unknown curve family: " + family);
}

std::pair<CurvePtr, CurvePtr> exonepoint_pair() {
    auto y = make_analytic(
        3, -1.0, 1.0,
        [](double t) {
            VectorXd p(3);
            p << t, bump(t), 0.0;
            return p;
        },
        [](double t) {
            VectorXd v(3);
            v << 1.0, dbump(t), 0.0;
            return v;
        });
    auto yhat = make_analytic(
        3, -1.0, 1.0,
        [](double t) {
            VectorXd p(3);
            if (t < 0)
                p << t, bump(t), 0.0;
            else
                p << t, 0.0, bump(t);
            return p;
        },
        [](double t) {
            VectorXd v(3);
            if (t < 0)
                v << 1.0, dbump(t), 0.0;
            else
                v << 1.0, 0.0, dbump(t);
            return v;
        });
    return {y, yhat};
}

CurvePtr parse_curve_arg(const std::string& arg) {
    size_t colon = arg.find(':');
    std::string family = arg.substr(0, colon == std::string::npos ? arg.size() : colon);
    std::map<std::string, double> params;
    if (colon != std::string::npos) {
        std::string rest = arg.substr(colon + 1);
        size_t pos = 0;
        while (pos < rest.size()) {
            size_t comma = rest.find(',', pos);
            std::string item = rest.substr(pos, comma == std::string::npos
                                                    ? std::string::npos
                                                    : comma - pos);
            size_t eq = item.find('=');
            if (eq == std::string::npos)
                throw std::invalid_argument("bad curve parameter: " + item);
            params[item.substr(0, eq)] = std::stod(item.substr(eq + 1));
            if (comma == std::string::npos) break;
            pos = comma + 1;
        }
    }
    return builtin_curve(family, params);
}

SampledCurve read_curve_csv(const std::string& path) {
    CsvTable tab = read_csv(path);
    int tcol = tab.col("t");
    if (tcol < 0) throw std::runtime_error("curve csv must have a 't' column");
    int n = 0;
    while (tab.col("xi_" + std::to_string(n + 1)) >= 0) ++n;
    if (n == 0) throw std::runtime_error("curve csv must have xi_i columns");
    SampledCurve c;
    long N = tab.data.rows();
    c.t = tab.data.col(tcol);
    c.xi.resize(N, n);
    for (int j = 0; j < n; ++j)
        c.xi.col(j) = tab.data.col(tab.col("xi_" + std::to_string(j + 1)));
    if (tab.col("dxi_1") >= 0) {
        c.dxi.resize(N, n);
        for (int j = 0; j < n; ++j)
            c.dxi.col(j) = tab.data.col(tab.col("dxi_" + std::to_string(j + 1)));
    } else {
        c.dxi.resize(0, n);
    }
    c.closed = N > 2 && (c.xi.row(0) - c.xi.row(N - 1)).norm() < 1e-8;
    return c;
}

void write_curve_csv(const std::string& path, const SampledCurve& c) {
    int n = c.dim();
    bool have_d = c.dxi.rows() == c.xi.rows();
    std::vector<std::string> header{"t"};
    for (int j = 1; j <= n; ++j) header.push_back("xi_" + std::to_string(j));
    if (have_d)
        for (int j = 1; j <= n; ++j) header.push_back("dxi_" + std::to_string(j));
    MatrixXd data(c.size(), 1 + n + (have_d ? n : 0));
    data.col(0) = c.t;
    data.middleCols(1, n) = c.xi;
    if (have_d) data.middleCols(1 + n, n) = c.dxi;
    write_csv(path, header, data);
}

}  // namespace rollnd
