#include "rollnd/util.hpp"

#include <cmath>
#include <stdexcept>

namespace rollnd {

MatrixXd fd_derivative(const MatrixXd& samples, double h) {
    const int N = static_cast<int>(samples.rows());
    if (N < 5) throw std::invalid_argument("fd_derivative: need at least 5 samples");
    MatrixXd d(N, samples.cols());
    for (int i = 0; i < N; ++i) {
        if (i < 2) {
            d.row(i) = (-3.0 * samples.row(i) + 4.0 * samples.row(i + 1) -
                        samples.row(i + 2)) / (2.0 * h);
        } else if (i >= N - 2) {
            d.row(i) = (3.0 * samples.row(i) - 4.0 * samples.row(i - 1) +
                        samples.row(i - 2)) / (2.0 * h);
        } else {
            d.row(i) = (samples.row(i - 2) - 8.0 * samples.row(i - 1) +
                        8.0 * samples.row(i + 1) - samples.row(i + 2)) / (12.0 * h);
        }
    }
    return d;
}

VectorXd cumulative_integral(const VectorXd& f, double h) {
    const int N = static_cast<int>(f.size());
    VectorXd F(N);
    F(0) = 0.0;
    if (N < 5) {
        for (int i = 1; i < N; ++i) F(i) = F(i - 1) + 0.5 * h * (f(i - 1) + f(i));
        return F;
    }
    MatrixXd df = fd_derivative(f, h);
    for (int i = 1; i < N; ++i) {
        // trapezoid with endpoint-derivative correction (exact on cubics)
        F(i) = F(i - 1) + 0.5 * h * (f(i - 1) + f(i)) +
               h * h / 12.0 * (df(i - 1, 0) - df(i, 0));
    }
    return F;
}

double integrate(const VectorXd& f, double h) {
    VectorXd F = cumulative_integral(f, h);
    return F(F.size() - 1);
}

MatrixXd project_orthogonal(const MatrixXd& A) {
    MatrixXd Q = A;
    const int n = static_cast<int>(A.cols());
    for (int j = 0; j < n; ++j) {
        for (int k = 0; k < j; ++k) Q.col(j) -= Q.col(k).dot(Q.col(j)) * Q.col(k);
        double nrm = Q.col(j).norm();
        if (nrm <= 0.0) throw std::runtime_error("project_orthogonal: rank deficient");
        Q.col(j) /= nrm;
    }
    return Q;
}

double wrap_angle(double a) {
    const double two_pi = 2.0 * M_PI;
    double r = std::fmod(a, two_pi);
    if (r <= -M_PI) r += two_pi;
    if (r > M_PI) r -= two_pi;
    return r;
}

MatrixXd procrustes_rotation(const MatrixXd& X, const MatrixXd& Y,
                             const VectorXd& w, bool* reflection_best) {
    if (X.cols() != Y.cols() || X.rows() != Y.rows())
        throw std::invalid_argument("procrustes_rotation: shape mismatch");
    MatrixXd C = MatrixXd::Zero(X.rows(), X.rows());
    for (int i = 0; i < X.cols(); ++i) C += w(i) * Y.col(i) * X.col(i).transpose();
    Eigen::JacobiSVD<MatrixXd> svd(C, Eigen::ComputeFullU | Eigen::ComputeFullV);
    MatrixXd U = svd.matrixU(), V = svd.matrixV();
    double d = (U * V.transpose()).determinant();
    if (reflection_best) *reflection_best = d < 0.0;
    VectorXd s = VectorXd::Ones(X.rows());
    s(X.rows() - 1) = d < 0.0 ? -1.0 : 1.0;
    return U * s.asDiagonal() * V.transpose();
}

VectorXd rk4_step(double t, double h, const VectorXd& s,
                  const std::function<VectorXd(double, const VectorXd&)>& rhs) {
    VectorXd k1 = rhs(t, s);
    VectorXd k2 = rhs(t + 0.5 * h, s + 0.5 * h * k1);
    VectorXd k3 = rhs(t + 0.5 * h, s + 0.5 * h * k2);
    VectorXd k4 = rhs(t + h, s + h * k3);
    return s + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

MatrixXd rk4(double t0, double t1, int N, const VectorXd& s0,
             const std::function<VectorXd(double, const VectorXd&)>& rhs,
             const std::function<void(VectorXd&)>& post_step) {
    if (N < 1) throw std::invalid_argument("rk4: need at least one step");
    const double h = (t1 - t0) / N;
    MatrixXd out(N + 1, s0.size());
    VectorXd s = s0;
    if (post_step) post_step(s);
    out.row(0) = s;
    for (int i = 0; i < N; ++i) {
        double t = t0 + i * h;
        VectorXd k1 = rhs(t, s);
        VectorXd k2 = rhs(t + 0.5 * h, s + 0.5 * h * k1);
        VectorXd k3 = rhs(t + 0.5 * h, s + 0.5 * h * k2);
        VectorXd k4 = rhs(t + h, s + h * k3);
        s += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if (post_step) post_step(s);
        out.row(i + 1) = s;
    }
    return out;
}

VectorXd generalized_cross(const MatrixXd& V) {
    const int n = static_cast<int>(V.rows());
    if (V.cols() != n - 1)
        throw std::invalid_argument("generalized_cross: need n-1 columns");
    VectorXd c(n);
    MatrixXd minor(n - 1, n - 1);
    for (int i = 0; i < n; ++i) {
        int r = 0;
        for (int k = 0; k < n; ++k) {
            if (k == i) continue;
            minor.row(r++) = V.row(k);
        }
        // expanding det[V c] along the last column gives |c|^2 with this sign
        double sign = ((i + n) % 2 == 0) ? -1.0 : 1.0;
        c(i) = sign * minor.determinant();
    }
    return c;
}

namespace {
double simpson(const std::function<double(double)>& f, double a, double fa,
               double b, double fb, double m, double fm) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive_simpson_rec(const std::function<double(double)>& f, double a,
                            double fa, double b, double fb, double m, double fm,
                            double whole, double tol, int depth) {
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = f(lm), frm = f(rm);
    double left = simpson(f, a, fa, m, fm, lm, flm);
    double right = simpson(f, m, fm, b, fb, rm, frm);
    if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return adaptive_simpson_rec(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson_rec(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}
}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double tol, int max_depth) {
    double m = 0.5 * (a + b);
    double fa = f(a), fb = f(b), fm = f(m);
    double whole = simpson(f, a, fa, b, fb, m, fm);
    return adaptive_simpson_rec(f, a, fa, b, fb, m, fm, whole, tol, max_depth);
}

}  // namespace rollnd
