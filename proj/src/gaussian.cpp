#include "sqzlat/gaussian.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace sqzlat {

namespace {

using std::complex;
constexpr double kPi = std::numbers::pi;

double canonical_theta(double theta) {
    double t = std::fmod(theta, 2.0 * kPi);
    if (t < 0.0) t += 2.0 * kPi;
    return t;
}

void check_mode(const GaussianState& s, int n, const char* who) {
    if (n < 0 || n >= s.modes())
        throw std::invalid_argument(std::string(who) + ": mode index out of range");
}

void require_vacuum_mode(const GaussianState& s, int n) {
    const bool clean = s.nmat.row(n).isZero(0.0) && s.nmat.col(n).isZero(0.0) &&
                       s.mmat.row(n).isZero(0.0) && s.mmat.col(n).isZero(0.0);
    if (!clean)
        throw std::logic_error("inject: mode " + std::to_string(n) +
                               " already carries correlations");
}

// Optimal phase for a cross term B: the variance contribution
// Re(e^{-2i phi} B) is minimized at phi = (arg B + pi)/2, folded to [0, pi).
double optimal_phase(complex<double> b) {
    if (std::abs(b) == 0.0) return 0.0;
    double phi = (std::arg(b) + kPi) / 2.0;
    if (phi >= kPi) phi -= kPi;
    if (phi < 0.0) phi += kPi;
    return phi;
}

} // namespace

double db_of_variance_ratio(double ratio) {
    return 10.0 * std::log10(std::max(ratio, 1e-15));
}

GaussianState vacuum(int modes) {
    if (modes < 1) throw std::invalid_argument("vacuum: need at least one mode");
    return GaussianState{Eigen::MatrixXcd::Zero(modes, modes),
                         Eigen::MatrixXcd::Zero(modes, modes)};
}

GaussianState inject_single_mode(const GaussianState& s, int n, const SqueezeParam& xi) {
    check_mode(s, n, "inject_single_mode");
    require_vacuum_mode(s, n);
    GaussianState out = s;
    const double sh = std::sinh(xi.r), ch = std::cosh(xi.r);
    const complex<double> phase = std::polar(1.0, canonical_theta(xi.theta));
    out.nmat(n, n) = sh * sh;
    out.mmat(n, n) = -phase * sh * ch;
    return out;
}

GaussianState inject_two_mode(const GaussianState& s, int n, int m, const SqueezeParam& xi) {
    check_mode(s, n, "inject_two_mode");
    check_mode(s, m, "inject_two_mode");
    if (n == m)
        throw std::invalid_argument("inject_two_mode: modes must be distinct");
    require_vacuum_mode(s, n);
    require_vacuum_mode(s, m);
    GaussianState out = s;
    const double sh = std::sinh(xi.r), ch = std::cosh(xi.r);
    const complex<double> phase = std::polar(1.0, canonical_theta(xi.theta));
    out.nmat(n, n) = sh * sh;
    out.nmat(m, m) = sh * sh;
    out.mmat(n, m) = -phase * sh * ch;
    out.mmat(m, n) = out.mmat(n, m);
    return out;
}

GaussianState inject_collective(const EdgeMode& mode, const SqueezeParam& xi) {
    const int k = static_cast<int>(mode.coeffs.size());
    if (k < 1) throw std::invalid_argument("inject_collective: empty mode");
    if (std::abs(mode.coeffs.squaredNorm() - 1.0) > 1e-10)
        throw std::invalid_argument("inject_collective: coefficients must have unit norm");

    GaussianState out = vacuum(k);
    const double sh = std::sinh(xi.r), ch = std::cosh(xi.r);
    const complex<double> phase = std::polar(1.0, canonical_theta(xi.theta));
    for (int n = 0; n < k; ++n) {
        for (int m = 0; m < k; ++m) {
            out.nmat(n, m) = mode.coeffs(n) * std::conj(mode.coeffs(m)) * (sh * sh);
            out.mmat(n, m) =
                -phase * std::conj(mode.coeffs(n)) * std::conj(mode.coeffs(m)) * (sh * ch);
        }
    }
    return out;
}

GaussianState rotate_frame(const GaussianState& s, double phi) {
    GaussianState out = s;
    out.mmat *= std::polar(1.0, 2.0 * phi);
    return out;
}

Eigen::MatrixXd quad_cov(const GaussianState& s, const std::vector<int>& modes) {
    const int k = static_cast<int>(modes.size());
    if (k < 1) throw std::invalid_argument("quad_cov: empty mode selection");
    for (int i = 0; i < k; ++i) {
        check_mode(s, modes[i], "quad_cov");
        for (int j = i + 1; j < k; ++j)
            if (modes[i] == modes[j])
                throw std::invalid_argument("quad_cov: repeated mode index");
    }

    // <X_n(f) X_m(g)>_sym with X_n(f) = (a_n e^{-if} + h.c.)/2:
    //   (1/4) [ 2 Re(e^{-i(f+g)} M[n,m]) + 2 Re(e^{i(f-g)} N[n,m]) + d_nm cos(f-g) ].
    const double phases[2] = {0.0, kPi / 2.0};
    Eigen::MatrixXd v(2 * k, 2 * k);
    for (int i = 0; i < k; ++i) {
        for (int j = 0; j < k; ++j) {
            for (int si = 0; si < 2; ++si) {
                for (int sj = 0; sj < 2; ++sj) {
                    const double f = phases[si], g = phases[sj];
                    const complex<double> m = s.mmat(modes[i], modes[j]);
                    const complex<double> nn = s.nmat(modes[i], modes[j]);
                    double e = 2.0 * (std::polar(1.0, -(f + g)) * m).real() +
                               2.0 * (std::polar(1.0, f - g) * nn).real();
                    if (modes[i] == modes[j]) e += std::cos(f - g);
                    v(2 * i + si, 2 * j + sj) = 0.25 * e;
                }
            }
        }
    }
    return v;
}

Eigen::MatrixXd full_quad_cov(const GaussianState& s) {
    std::vector<int> all(s.modes());
    for (int i = 0; i < s.modes(); ++i) all[i] = i;
    return quad_cov(s, all);
}

double variance(const GaussianState& s, int n, double phi) {
    check_mode(s, n, "variance");
    const complex<double> m = s.mmat(n, n);
    const double nn = s.nmat(n, n).real();
    return 0.25 * (1.0 + 2.0 * nn + 2.0 * (std::polar(1.0, -2.0 * phi) * m).real());
}

double squeezing_db(const GaussianState& s, int n, double phi) {
    return db_of_variance_ratio(variance(s, n, phi) / 0.25);
}

MaxSqueezing max_squeezing_db(const GaussianState& s, int n) {
    check_mode(s, n, "max_squeezing_db");
    const complex<double> m = s.mmat(n, n);
    const double nn = s.nmat(n, n).real();
    const double ratio = 1.0 + 2.0 * nn - 2.0 * std::abs(m);
    return MaxSqueezing{db_of_variance_ratio(ratio), optimal_phase(m)};
}

double two_mode_variance(const GaussianState& s, int n, int m, double phi) {
    check_mode(s, n, "two_mode_variance");
    check_mode(s, m, "two_mode_variance");
    if (n == m) throw std::invalid_argument("two_mode_variance: modes must be distinct");
    const double a = s.nmat(n, n).real() + s.nmat(m, m).real() + 2.0 * s.nmat(n, m).real();
    const complex<double> b = s.mmat(n, n) + s.mmat(m, m) + 2.0 * s.mmat(n, m);
    return 0.25 * (1.0 + a + (std::polar(1.0, -2.0 * phi) * b).real());
}

double two_mode_squeezing_db(const GaussianState& s, int n, int m, double phi) {
    return db_of_variance_ratio(two_mode_variance(s, n, m, phi) / 0.25);
}

MaxSqueezing max_two_mode_squeezing_db(const GaussianState& s, int n, int m) {
    check_mode(s, n, "max_two_mode_squeezing_db");
    check_mode(s, m, "max_two_mode_squeezing_db");
    if (n == m)
        throw std::invalid_argument("max_two_mode_squeezing_db: modes must be distinct");
    const double a = s.nmat(n, n).real() + s.nmat(m, m).real() + 2.0 * s.nmat(n, m).real();
    const complex<double> b = s.mmat(n, n) + s.mmat(m, m) + 2.0 * s.mmat(n, m);
    return MaxSqueezing{db_of_variance_ratio(1.0 + a - std::abs(b)), optimal_phase(b)};
}

double analytic_eigenmode_squeezing(const Eigen::VectorXcd& coeffs, const SqueezeParam& xi, int n) {
    if (n < 0 || n >= coeffs.size())
        throw std::invalid_argument("analytic_eigenmode_squeezing: site out of range");
    const double weight = std::norm(coeffs(n));
    const double ratio = 1.0 - 2.0 * weight * std::exp(-xi.r) * std::sinh(xi.r);
    return db_of_variance_ratio(ratio);
}

double analytic_eigenmode_squeezing(const Eigen::VectorXcd& coeffs, const SqueezeParam& xi,
                                    int n, int m) {
    if (n < 0 || n >= coeffs.size() || m < 0 || m >= coeffs.size())
        throw std::invalid_argument("analytic_eigenmode_squeezing: site out of range");
    if (n == m)
        throw std::invalid_argument("analytic_eigenmode_squeezing: sites must be distinct");
    const double weight = std::norm(coeffs(n) + coeffs(m));
    const double ratio = 1.0 - weight * std::exp(-xi.r) * std::sinh(xi.r);
    return db_of_variance_ratio(ratio);
}

double photon_number(const GaussianState& s, int n) {
    check_mode(s, n, "photon_number");
    return std::max(0.0, s.nmat(n, n).real());
}

double total_photon_number(const GaussianState& s) {
    return std::max(0.0, s.nmat.trace().real());
}

namespace {

Eigen::MatrixXd symplectic_form(int modes) {
    Eigen::MatrixXd omega = Eigen::MatrixXd::Zero(2 * modes, 2 * modes);
    for (int i = 0; i < modes; ++i) {
        omega(2 * i, 2 * i + 1) = 1.0;
        omega(2 * i + 1, 2 * i) = -1.0;
    }
    return omega;
}

} // namespace

double physicality_min_eig(const GaussianState& s) {
    const Eigen::MatrixXd v = full_quad_cov(s);
    const int k = s.modes();
    Eigen::MatrixXcd a = v.cast<complex<double>>() +
                         complex<double>(0.0, 0.25) * symplectic_form(k).cast<complex<double>>();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(a);
    return solver.eigenvalues().minCoeff();
}

Eigen::VectorXd symplectic_eigenvalues(const Eigen::MatrixXd& v) {
    if (v.rows() != v.cols() || v.rows() % 2 != 0)
        throw std::invalid_argument("symplectic_eigenvalues: need a 2k x 2k matrix");
    const int k = static_cast<int>(v.rows()) / 2;
    Eigen::MatrixXcd t = complex<double>(0.0, 1.0) *
                         (symplectic_form(k) * v).cast<complex<double>>();
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(t);
    Eigen::VectorXd mags = solver.eigenvalues().cwiseAbs();
    std::sort(mags.data(), mags.data() + mags.size());
    return mags;
}

} // namespace sqzlat
