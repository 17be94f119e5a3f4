#include "rollnd/manifold.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <stdexcept>

#include "rollnd/io.hpp"

namespace rollnd {

bool Manifold::in_domain(const VectorXd& xi) const {
    return xi.norm() < chart_bound_;
}

VectorXd Manifold::to_frame(const VectorXd& xi, const VectorXd& dxi) const {
    MatrixXd phi = frame(xi);
    if (phi.rows() == phi.cols()) return phi.partialPivLu().solve(dxi);
    return phi.transpose() * dxi;  // orthonormal columns
}

double Manifold::inner(const VectorXd& xi, const VectorXd& v, const VectorXd& w) const {
    return to_frame(xi, v).dot(to_frame(xi, w));
}

namespace {

class Euclidean final : public Manifold {
public:
    explicit Euclidean(int n) : Manifold("euclidean", n) {}
    MatrixXd frame(const VectorXd&) const override {
        return MatrixXd::Identity(n_, n_);
    }
    std::vector<MatrixXd> christoffel(const VectorXd&) const override {
        return std::vector<MatrixXd>(n_, MatrixXd::Zero(n_, n_));
    }
    bool in_domain(const VectorXd&) const override { return true; }
    VectorXd to_frame(const VectorXd&, const VectorXd& dxi) const override {
        return dxi;
    }
};

// Stereographic chart of the unit sphere from the antipode of the chart
// center: phi = ((1+|xi|^2)/2) I, Gamma_k has row k = -xi_j and column k = xi_j
// off the diagonal.
class SphereStereo final : public Manifold {
public:
    explicit SphereStereo(int n) : Manifold("sphere_stereo", n) {}
    MatrixXd frame(const VectorXd& xi) const override {
        return 0.5 * (1.0 + xi.squaredNorm()) * MatrixXd::Identity(n_, n_);
    }
    VectorXd to_frame(const VectorXd& xi, const VectorXd& dxi) const override {
        return 2.0 / (1.0 + xi.squaredNorm()) * dxi;
    }
    std::vector<MatrixXd> christoffel(const VectorXd& xi) const override {
        std::vector<MatrixXd> G(n_, MatrixXd::Zero(n_, n_));
        for (int k = 0; k < n_; ++k)
            for (int j = 0; j < n_; ++j) {
                if (j == k) continue;
                G[k](k, j) = -xi(j);
                G[k](j, k) = xi(j);
            }
        return G;
    }
};

// Upper half-plane, frame e_j = xi_2 d/dxi_j on {xi_2 > 0}. Not from the
// reference material; included as a second curved surface for cross checks.
class HyperbolicHalfPlane final : public Manifold {
public:
    HyperbolicHalfPlane() : Manifold("hyperbolic_halfplane", 2) {}
    MatrixXd frame(const VectorXd& xi) const override {
        return xi(1) * MatrixXd::Identity(2, 2);
    }
    VectorXd to_frame(const VectorXd& xi, const VectorXd& dxi) const override {
        return dxi / xi(1);
    }
    std::vector<MatrixXd> christoffel(const VectorXd&) const override {
        std::vector<MatrixXd> G(2, MatrixXd::Zero(2, 2));
        G[0](0, 1) = -1.0;
        G[0](1, 0) = 1.0;
        return G;
    }
    bool in_domain(const VectorXd& xi) const override {
        return xi(1) > 1e-10 && xi.norm() < chart_bound();
    }
};

VectorXd quat_mul(const VectorXd& a, const VectorXd& b) {
    VectorXd c(4);
    c << a(0) * b(0) - a(1) * b(1) - a(2) * b(2) - a(3) * b(3),
        a(0) * b(1) + a(1) * b(0) + a(2) * b(3) - a(3) * b(2),
        a(0) * b(2) - a(1) * b(3) + a(2) * b(0) + a(3) * b(1),
        a(0) * b(3) + a(1) * b(2) - a(2) * b(1) + a(3) * b(0);
    return c;
}

// S^3 as unit quaternions with the left-invariant frame X_m(g) = g * e_m,
// e_1 = i, e_2 = j, e_3 = k. The bi-invariant metric gives constant frame
// Christoffels nabla_{X_i} X_j = [X_i, X_j] / 2.
class Su2 final : public Manifold {
public:
    Su2() : Manifold("su2", 3) {}
    int state_dim() const override { return 4; }
    MatrixXd frame(const VectorXd& g) const override {
        MatrixXd phi(4, 3);
        VectorXd e(4);
        e << 0, 1, 0, 0;
        phi.col(0) = quat_mul(g, e);
        e << 0, 0, 1, 0;
        phi.col(1) = quat_mul(g, e);
        e << 0, 0, 0, 1;
        phi.col(2) = quat_mul(g, e);
        return phi;
    }
    std::vector<MatrixXd> christoffel(const VectorXd&) const override {
        std::vector<MatrixXd> G(3, MatrixXd::Zero(3, 3));
        G[0](2, 1) = 1.0;
        G[0](1, 2) = -1.0;
        G[1](0, 2) = 1.0;
        G[1](2, 0) = -1.0;
        G[2](1, 0) = 1.0;
        G[2](0, 1) = -1.0;
        return G;
    }
    bool in_domain(const VectorXd& g) const override {
        return std::abs(g.norm() - 1.0) < 0.1;
    }
    void normalize_state(VectorXd& g) const override { g /= g.norm(); }
};

int param_n(const std::map<std::string, double>& params, int dflt) {
    auto it = params.find("n");
    if (it == params.end()) return dflt;
    double v = it->second;
    int n = static_cast<int>(std::lround(v));
    if (n < 1 || std::abs(v - n) > 1e-12)
        throw std::invalid_argument("invalid manifold dimension");
    return n;
}

}  // namespace

ManifoldPtr builtin_manifold(const std::string& name,
                             const std::map<std::string, double>& params) {
    if (name == "euclidean") return std::make_shared<Euclidean>(param_n(params, 2));
    if (name == "sphere_stereo")
        return std::make_shared<SphereStereo>(param_n(params, 2));
    if (name == "hyperbolic_halfplane") {
        if (param_n(params, 2) != 2)
            throw std::invalid_argument("hyperbolic_halfplane is 2-dimensional");
        return std::make_shared<HyperbolicHalfPlane>();
    }
    if (name == "su2") {
        if (param_n(params, 3) != 3)
            throw std::invalid_argument("su2 requires n = 3");
        return std::make_shared<Su2>();
    }
    throw std::invalid_argument("unknown manifold: " + name);
}

// ---------------------------------------------------------------------------
// Finite-difference Levi-Civita oracle.

namespace {

MatrixXd metric_from_frame(const MatrixXd& phi) {
    // e_j orthonormal  <=>  phi^T G phi = I  =>  G = (phi phi^T)^{-1}
    return (phi * phi.transpose()).inverse();
}

template <class F>
MatrixXd central4(const F& f, const VectorXd& xi, int axis, double h) {
    VectorXd p = xi;
    p(axis) = xi(axis) - 2 * h;
    MatrixXd m2 = f(p);
    p(axis) = xi(axis) - h;
    MatrixXd m1 = f(p);
    p(axis) = xi(axis) + h;
    MatrixXd p1 = f(p);
    p(axis) = xi(axis) + 2 * h;
    MatrixXd p2 = f(p);
    return (m2 - 8.0 * m1 + 8.0 * p1 - p2) / (12.0 * h);
}

}  // namespace

std::vector<MatrixXd> christoffel_from_frame_fd(
    const std::function<MatrixXd(const VectorXd&)>& frame, const VectorXd& xi,
    double h) {
    const int n = static_cast<int>(xi.size());
    auto metric = [&](const VectorXd& p) { return metric_from_frame(frame(p)); };

    MatrixXd G = metric(xi);
    MatrixXd Ginv = G.inverse();
    std::vector<MatrixXd> dG(n);
    for (int a = 0; a < n; ++a) dG[a] = central4(metric, xi, a, h);

    // coordinate symbols Gc[a](c,b) = Gamma^c_{ab}
    std::vector<MatrixXd> Gc(n, MatrixXd::Zero(n, n));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c) {
                double s = 0.0;
                for (int d = 0; d < n; ++d)
                    s += Ginv(c, d) * (dG[a](d, b) + dG[b](d, a) - dG[d](a, b));
                Gc[a](c, b) = 0.5 * s;
            }

    MatrixXd phi = frame(xi);
    MatrixXd phi_inv = phi.inverse();
    std::vector<MatrixXd> dphi(n);
    for (int a = 0; a < n; ++a) dphi[a] = central4(frame, xi, a, h);

    // Gamma^i_{kj} = [phi^{-1} sum_a phi_ak (d_a phi_j + Gc[a] phi_j)]_i
    std::vector<MatrixXd> out(n, MatrixXd::Zero(n, n));
    for (int k = 0; k < n; ++k)
        for (int j = 0; j < n; ++j) {
            VectorXd w = VectorXd::Zero(n);
            for (int a = 0; a < n; ++a)
                w += phi(a, k) * (dphi[a].col(j) + Gc[a] * phi.col(j));
            out[k].col(j) = phi_inv * w;
        }
    // package as matrices indexed by the derivative direction k
    std::vector<MatrixXd> gammas(n, MatrixXd::Zero(n, n));
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) gammas[k](i, j) = out[k](i, j);
    return gammas;
}

ModelReport check_model(const Manifold& M, const std::vector<VectorXd>& points,
                        double fd_step) {
    ModelReport rep;
    rep.min_det_frame = std::numeric_limits<double>::infinity();
    bool square = M.state_dim() == M.dim();
    rep.torsion_checked = square;
    auto frame_fn = [&](const VectorXd& p) { return M.frame(p); };
    for (const auto& xi : points) {
        auto gammas = M.christoffel(xi);
        for (const auto& g : gammas) {
            double asym = (g + g.transpose()).cwiseAbs().maxCoeff();
            rep.max_antisymmetry = std::max(rep.max_antisymmetry, asym);
        }
        MatrixXd phi = M.frame(xi);
        Eigen::JacobiSVD<MatrixXd> svd(phi);
        double smin = svd.singularValues().minCoeff();
        double smax = svd.singularValues().maxCoeff();
        rep.max_condition = std::max(rep.max_condition, smax / smin);
        if (square) {
            rep.min_det_frame = std::min(rep.min_det_frame, phi.determinant());
            auto fd = christoffel_from_frame_fd(frame_fn, xi, fd_step);
            for (int k = 0; k < M.dim(); ++k) {
                double r = (gammas[k] - fd[k]).cwiseAbs().maxCoeff();
                rep.max_torsion_residual = std::max(rep.max_torsion_residual, r);
            }
        }
    }
    if (!square) rep.min_det_frame = 1.0;
    return rep;
}

// ---------------------------------------------------------------------------
// Grid-defined models.

namespace {

class GridModel final : public Manifold {
public:
    GridModel(int n, std::vector<VectorXd> axes, std::vector<MatrixXd> phis,
              std::vector<std::vector<MatrixXd>> gammas, double fd_step)
        : Manifold("grid", n),
          axes_(std::move(axes)),
          phis_(std::move(phis)),
          gammas_(std::move(gammas)),
          fd_step_(fd_step) {
        size_t total = 1;
        for (auto& ax : axes_) total *= ax.size();
        if (phis_.size() != total)
            throw std::invalid_argument("grid model: frame sample count mismatch");
        if (!gammas_.empty() && gammas_.size() != total)
            throw std::invalid_argument("grid model: christoffel sample count mismatch");
    }

    MatrixXd frame(const VectorXd& xi) const override {
        return interpolate(xi, [&](size_t idx) -> const MatrixXd& { return phis_[idx]; });
    }

    std::vector<MatrixXd> christoffel(const VectorXd& xi) const override {
        if (!gammas_.empty()) {
            std::vector<MatrixXd> out(n_);
            for (int k = 0; k < n_; ++k)
                out[k] = interpolate(xi, [&](size_t idx) -> const MatrixXd& {
                    return gammas_[idx][k];
                });
            return out;
        }
        auto fn = [this](const VectorXd& p) { return frame(p); };
        return christoffel_from_frame_fd(fn, xi, fd_step_);
    }

    bool in_domain(const VectorXd& xi) const override {
        for (int a = 0; a < n_; ++a) {
            const auto& ax = axes_[a];
            if (xi(a) < ax(0) || xi(a) > ax(ax.size() - 1)) return false;
        }
        return true;
    }

private:
    template <class Get>
    MatrixXd interpolate(const VectorXd& xi, const Get& get) const {
        std::vector<int> lo(n_);
        std::vector<double> w(n_);
        for (int a = 0; a < n_; ++a) {
            const auto& ax = axes_[a];
            int m = static_cast<int>(ax.size());
            int i = static_cast<int>(std::upper_bound(ax.data(), ax.data() + m, xi(a)) -
                                     ax.data()) - 1;
            i = std::clamp(i, 0, m - 2);
            lo[a] = i;
            w[a] = (xi(a) - ax(i)) / (ax(i + 1) - ax(i));
        }
        MatrixXd acc = MatrixXd::Zero(get(0).rows(), get(0).cols());
        int corners = 1 << n_;
        for (int c = 0; c < corners; ++c) {
            double weight = 1.0;
            size_t idx = 0;
            for (int a = 0; a < n_; ++a) {
                int bit = (c >> a) & 1;
                weight *= bit ? w[a] : 1.0 - w[a];
                idx = idx * axes_[a].size() + static_cast<size_t>(lo[a] + bit);
            }
            if (weight != 0.0) acc += weight * get(idx);
        }
        return acc;
    }

    std::vector<VectorXd> axes_;
    std::vector<MatrixXd> phis_;
    std::vector<std::vector<MatrixXd>> gammas_;
    double fd_step_;
};

// Reconstructs a tensor grid from scattered rows: unique sorted coordinate
// values per axis, then a lexicographic index for each row.
std::vector<VectorXd> infer_axes(const MatrixXd& pts, int n) {
    std::vector<VectorXd> axes(n);
    for (int a = 0; a < n; ++a) {
        std::vector<double> vals(pts.rows());
        for (long i = 0; i < pts.rows(); ++i) vals[i] = pts(i, a);
        std::sort(vals.begin(), vals.end());
        std::vector<double> uniq;
        for (double v : vals)
            if (uniq.empty() || v - uniq.back() > 1e-12) uniq.push_back(v);
        axes[a] = Eigen::Map<VectorXd>(uniq.data(), static_cast<long>(uniq.size()));
    }
    return axes;
}

size_t grid_index(const std::vector<VectorXd>& axes, const VectorXd& p) {
    size_t idx = 0;
    for (size_t a = 0; a < axes.size(); ++a) {
        const auto& ax = axes[a];
        long best = -1;
        for (long i = 0; i < ax.size(); ++i)
            if (std::abs(ax(i) - p(static_cast<long>(a))) <= 1e-12) {
                best = i;
                break;
            }
        if (best < 0) throw std::runtime_error("grid model: point off the tensor grid");
        idx = idx * static_cast<size_t>(ax.size()) + static_cast<size_t>(best);
    }
    return idx;
}

}  // namespace

ManifoldPtr grid_manifold(int n, const std::vector<VectorXd>& axes,
                          const std::vector<MatrixXd>& frame_samples,
                          const std::vector<std::vector<MatrixXd>>& gamma_samples,
                          double fd_step) {
    return std::make_shared<GridModel>(n, axes, frame_samples, gamma_samples, fd_step);
}

ManifoldPtr load_manifold_spec(const std::string& path) {
    auto kv = read_keyvalue_file(path);
    auto need = [&](const std::string& k) {
        auto it = kv.find(k);
        if (it == kv.end())
            throw std::runtime_error("manifold spec missing key '" + k + "': " + path);
        return it->second;
    };
    std::string name = need("name");
    std::map<std::string, double> params;
    if (kv.count("n")) params["n"] = std::stod(kv["n"]);

    if (name != "grid") {
        auto m = builtin_manifold(name, params);
        if (kv.count("chart_bound"))
            std::const_pointer_cast<Manifold>(m)->set_chart_bound(
                std::stod(kv["chart_bound"]));
        return m;
    }

    int n = static_cast<int>(std::stod(need("n")));
    auto dir = std::filesystem::path(path).parent_path();
    auto resolve = [&](const std::string& p) {
        std::filesystem::path fp(p);
        return fp.is_absolute() ? fp.string() : (dir / fp).string();
    };
    CsvTable frame_tab = read_csv(resolve(need("frame_csv")));
    if (frame_tab.data.cols() != n + n * n)
        throw std::runtime_error("frame csv must have n + n*n columns");
    MatrixXd pts = frame_tab.data.leftCols(n);
    auto axes = infer_axes(pts, n);
    size_t total = 1;
    for (auto& ax : axes) total *= ax.size();
    if (total != static_cast<size_t>(frame_tab.data.rows()))
        throw std::runtime_error("frame csv rows do not form a full tensor grid");

    std::vector<MatrixXd> phis(total);
    for (long r = 0; r < frame_tab.data.rows(); ++r) {
        size_t idx = grid_index(axes, pts.row(r).transpose());
        MatrixXd phi(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) phi(i, j) = frame_tab.data(r, n + i * n + j);
        phis[idx] = phi;
    }

    std::vector<std::vector<MatrixXd>> gammas;
    if (kv.count("christoffel_csv")) {
        CsvTable gtab = read_csv(resolve(kv["christoffel_csv"]));
        if (gtab.data.cols() != n + n * n * n)
            throw std::runtime_error("christoffel csv must have n + n^3 columns");
        gammas.resize(total);
        for (long r = 0; r < gtab.data.rows(); ++r) {
            size_t idx = grid_index(axes, gtab.data.row(r).head(n).transpose());
            std::vector<MatrixXd> g(n, MatrixXd(n, n));
            for (int k = 0; k < n; ++k)
                for (int i = 0; i < n; ++i)
                    for (int j = 0; j < n; ++j)
                        g[k](i, j) = gtab.data(r, n + (k * n + i) * n + j);
            gammas[idx] = std::move(g);
        }
    }
    double fd_step = kv.count("fd_step") ? std::stod(kv["fd_step"]) : 1e-5;
    return grid_manifold(n, axes, phis, gammas, fd_step);
}

ManifoldPtr parse_manifold_arg(const std::string& arg) {
    if (std::filesystem::exists(arg) && !std::filesystem::is_directory(arg))
        return load_manifold_spec(arg);
    size_t colon = arg.find(':');
    std::map<std::string, double> params;
    std::string name = arg;
    if (colon != std::string::npos) {
        name = arg.substr(0, colon);
        params["n"] = std::stod(arg.substr(colon + 1));
    }
    return builtin_manifold(name, params);
}

}  // namespace rollnd
