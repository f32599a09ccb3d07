#include "sqzlat/teleport.hpp"

#include <unsupported/Eigen/FFT>

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace sqzlat {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kRoot2 = std::numbers::sqrt2;

double gauss2(const Eigen::Vector2d& x, const Eigen::Matrix2d& inv, double norm) {
    return norm * std::exp(-0.5 * x.dot(inv * x));
}

struct Gauss2 {
    Eigen::Matrix2d inv;
    double norm = 0.0;

    explicit Gauss2(const Eigen::Matrix2d& cov) {
        const double det = cov.determinant();
        if (!(det > 1e-300))
            throw std::domain_error("teleport: degenerate covariance block");
        inv = cov.inverse();
        norm = 1.0 / (2.0 * kPi * std::sqrt(det));
    }
    double operator()(const Eigen::Vector2d& x) const { return gauss2(x, inv, norm); }
};

int clamp_index(int i, int n) { return std::min(std::max(i, 0), n - 1); }

} // namespace

TeleportResource extract_resource(const GaussianState& joint) {
    if (joint.modes() % 2 != 0)
        throw std::invalid_argument("extract_resource: expected two equal lattices");
    const int b0 = joint.modes() / 2;
    const Eigen::MatrixXd v = quad_cov(joint, {0, b0});
    return TeleportResource{Eigen::Matrix4d(v)};
}

TeleportResource tmsv_resource(const SqueezeParam& xi) {
    const GaussianState s = inject_two_mode(vacuum(2), 0, 1, xi);
    return TeleportResource{Eigen::Matrix4d(quad_cov(s, {0, 1}))};
}

TeleportKernel kernel_from_resource(const TeleportResource& res) {
    const Eigen::Matrix4d& v = res.vab;
    Eigen::Matrix2d k;
    // Noise quadratures at unit gain: (q_a + q_b, p_b - p_a).
    k(0, 0) = v(0, 0) + v(2, 2) + 2.0 * v(0, 2);
    k(1, 1) = v(1, 1) + v(3, 3) - 2.0 * v(1, 3);
    k(0, 1) = v(0, 3) - v(0, 1) + v(2, 3) - v(1, 2);
    k(1, 0) = k(0, 1);
    return TeleportKernel{k};
}

namespace {

// Conditional split of the 4x4 resource covariance: Alice block given Bob's.
struct ResourceSplit {
    Eigen::Matrix2d vaa, vbb, vab, cond;  // cond = vaa - vab vbb^{-1} vba
    Eigen::Matrix2d regression;           // T = vab vbb^{-1}
};

ResourceSplit split_resource(const TeleportResource& res) {
    ResourceSplit s;
    s.vaa = res.vab.topLeftCorner<2, 2>();
    s.vbb = res.vab.bottomRightCorner<2, 2>();
    s.vab = res.vab.topRightCorner<2, 2>();
    const Eigen::Matrix2d vbb_inv = s.vbb.inverse();
    s.regression = s.vab * vbb_inv;
    s.cond = s.vaa - s.regression * s.vab.transpose();
    return s;
}

double window_radius(const Eigen::Matrix2d& cov, double h) {
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(cov);
    return 8.0 * std::sqrt(es.eigenvalues().maxCoeff()) + 2.0 * h;
}

// Windowed Riemann sum of w_in(x, y) * g((sqrt2 qa - x, y - sqrt2 pc) - mu; cov).
double input_overlap(const WignerField& w_in, const Gauss2& g, double radius,
                     double q_a, double p_c, const Eigen::Vector2d& mu) {
    const PhaseGrid& grid = w_in.grid;
    const double h = grid.step();
    const double x0 = kRoot2 * q_a - mu(0);
    const double y0 = kRoot2 * p_c + mu(1);

    const int ix_lo = clamp_index(static_cast<int>(std::floor((x0 - radius + grid.extent) / h)),
                                  grid.resolution);
    const int ix_hi = clamp_index(static_cast<int>(std::ceil((x0 + radius + grid.extent) / h)),
                                  grid.resolution);
    const int iy_lo = clamp_index(static_cast<int>(std::floor((y0 - radius + grid.extent) / h)),
                                  grid.resolution);
    const int iy_hi = clamp_index(static_cast<int>(std::ceil((y0 + radius + grid.extent) / h)),
                                  grid.resolution);

    double acc = 0.0;
    for (int ix = ix_lo; ix <= ix_hi; ++ix) {
        const double x = grid.coord(ix);
        for (int iy = iy_lo; iy <= iy_hi; ++iy) {
            const double y = grid.coord(iy);
            const Eigen::Vector2d arg(kRoot2 * q_a - x - mu(0), y - kRoot2 * p_c - mu(1));
            acc += w_in.values(ix, iy) * g(arg);
        }
    }
    return acc * h * h;
}

} // namespace

double outcome_density(const WignerField& w_in, const TeleportResource& res,
                       double q_a, double p_c) {
    // Marginalizing Bob's mode leaves Alice's block; the factor 2 is the
    // Jacobian of the sqrt(2)-scaled splitter outputs.
    const ResourceSplit s = split_resource(res);
    const Gauss2 g(s.vaa);
    const double radius = window_radius(s.vaa, w_in.grid.step());
    return 2.0 * input_overlap(w_in, g, radius, q_a, p_c, Eigen::Vector2d::Zero());
}

WignerField brute_force_output(const WignerField& w_in, const TeleportResource& res,
                               double q_a, double p_c) {
    const double density = outcome_density(w_in, res, q_a, p_c);
    if (density < 1e-12)
        throw std::domain_error("brute_force_output: outcome-unlikely, density below 1e-12");

    const ResourceSplit s = split_resource(res);
    const Gauss2 g_bob(s.vbb);
    const Gauss2 g_cond(s.cond);
    const double radius = window_radius(s.cond, w_in.grid.step());

    const PhaseGrid& grid = w_in.grid;
    WignerField out{grid, Eigen::MatrixXd(grid.resolution, grid.resolution)};
    for (int iq = 0; iq < grid.resolution; ++iq) {
        for (int ip = 0; ip < grid.resolution; ++ip) {
            // Bob's mode is read at the outcome-displaced argument, the
            // unit-gain correction: chi_b = chi - sqrt(2) (q_a, p_c).
            const Eigen::Vector2d chib(grid.coord(iq) - kRoot2 * q_a,
                                       grid.coord(ip) - kRoot2 * p_c);
            const Eigen::Vector2d mu = s.regression * chib;
            const double inner = input_overlap(w_in, g_cond, radius, q_a, p_c, mu);
            out.values(iq, ip) = 2.0 * g_bob(chib) * inner / density;
        }
    }
    return out;
}

WignerField convolve_gaussian_direct(const WignerField& f, const Eigen::Matrix2d& cov) {
    const PhaseGrid& grid = f.grid;
    const double h = grid.step();
    const Gauss2 g(cov);
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(cov);
    const double sigma_min = std::sqrt(es.eigenvalues().minCoeff());
    if (sigma_min < 2.0 * h)
        throw std::domain_error("convolve_gaussian_direct: kernel narrower than grid support");
    const double radius = 8.0 * std::sqrt(es.eigenvalues().maxCoeff()) + 2.0 * h;
    const int reach = static_cast<int>(std::ceil(radius / h));

    WignerField out{grid, Eigen::MatrixXd::Zero(grid.resolution, grid.resolution)};
    for (int iq = 0; iq < grid.resolution; ++iq) {
        for (int ip = 0; ip < grid.resolution; ++ip) {
            double acc = 0.0;
            const int jx_lo = std::max(0, iq - reach), jx_hi = std::min(grid.resolution - 1, iq + reach);
            const int jy_lo = std::max(0, ip - reach), jy_hi = std::min(grid.resolution - 1, ip + reach);
            for (int jx = jx_lo; jx <= jx_hi; ++jx) {
                for (int jy = jy_lo; jy <= jy_hi; ++jy) {
                    const Eigen::Vector2d d(h * (iq - jx), h * (ip - jy));
                    acc += f.values(jx, jy) * g(d);
                }
            }
            out.values(iq, ip) = acc * h * h;
        }
    }
    return out;
}

WignerField convolve_gaussian(const WignerField& f, const Eigen::Matrix2d& cov) {
    const PhaseGrid& grid = f.grid;
    const int n = grid.resolution;
    const double h = grid.step();

    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(cov);
    const double lam_max = std::max(0.0, es.eigenvalues().maxCoeff());
    const int reach = static_cast<int>(std::ceil(8.0 * std::sqrt(lam_max) / h)) + 1;
    int size = 1;
    while (size < n + reach) size <<= 1;

    Eigen::MatrixXcd padded = Eigen::MatrixXcd::Zero(size, size);
    padded.topLeftCorner(n, n) = f.values.cast<std::complex<double>>();

    Eigen::FFT<double> fft;
    // Rows, then columns.
    for (int r = 0; r < size; ++r) {
        Eigen::VectorXcd row = padded.row(r), tr(size);
        fft.fwd(tr, row);
        padded.row(r) = tr;
    }
    for (int c = 0; c < size; ++c) {
        Eigen::VectorXcd col = padded.col(c), tc(size);
        fft.fwd(tc, col);
        padded.col(c) = tc;
    }

    // Multiply by the kernel's characteristic function exp(-w^T cov w / 2);
    // zero phase, so the output stays aligned with the input samples.
    auto omega = [&](int idx) {
        const int m = (idx <= size / 2) ? idx : idx - size;
        return 2.0 * kPi * static_cast<double>(m) / (size * h);
    };
    for (int a = 0; a < size; ++a) {
        const double w1 = omega(a);
        for (int b = 0; b < size; ++b) {
            const double w2 = omega(b);
            const double e = cov(0, 0) * w1 * w1 + 2.0 * cov(0, 1) * w1 * w2 +
                             cov(1, 1) * w2 * w2;
            padded(a, b) *= std::exp(-0.5 * std::max(e, 0.0));
        }
    }

    for (int r = 0; r < size; ++r) {
        Eigen::VectorXcd row = padded.row(r), tr(size);
        fft.inv(tr, row);
        padded.row(r) = tr;
    }
    for (int c = 0; c < size; ++c) {
        Eigen::VectorXcd col = padded.col(c), tc(size);
        fft.inv(tc, col);
        padded.col(c) = tc;
    }

    WignerField out{grid, padded.topLeftCorner(n, n).real()};
    return out;
}

TeleportReport teleport_average(const WignerField& w_in, const TeleportResource& res) {
    const TeleportKernel kernel = kernel_from_resource(res);
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(kernel.cov);
    if (es.eigenvalues().minCoeff() < -1e-12)
        throw std::domain_error("teleport_average: invalid-resource, noise kernel not PSD");

    // Clamp the tiny negative rounding tail so the characteristic function
    // stays a contraction.
    Eigen::Matrix2d cov = es.eigenvectors() *
                          es.eigenvalues().cwiseMax(0.0).asDiagonal() *
                          es.eigenvectors().transpose();

    TeleportReport report{0.0, 0.0, convolve_gaussian(w_in, cov)};
    report.fidelity = overlap_fidelity(w_in, report.w_out);
    if (report.fidelity < 0.0 || report.fidelity > 1.0 + 2e-3)
        throw std::logic_error("teleport_average: fidelity outside physical range");

    const int c = (w_in.grid.resolution - 1) / 2;
    if (w_in.grid.resolution % 2 == 0)
        throw std::invalid_argument("teleport_average: grid must contain the origin");
    report.peak_reduction = report.w_out.values(c, c) / w_in.values(c, c);
    return report;
}

} // namespace sqzlat
