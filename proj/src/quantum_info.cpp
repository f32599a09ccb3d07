#include "sqzlat/quantum_info.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace sqzlat {

namespace {

constexpr double kPi = std::numbers::pi;

Eigen::VectorXd trapezoid_weights(const PhaseGrid& g) {
    Eigen::VectorXd w = Eigen::VectorXd::Constant(g.resolution, g.step());
    w(0) *= 0.5;
    w(g.resolution - 1) *= 0.5;
    return w;
}

} // namespace

double entanglement_min_eig(const Eigen::Matrix4d& v) {
    // Partial transposition on mode b flips the sign of its momentum row and
    // column; entanglement shows as a violation of the physicality bound of
    // the transposed matrix.
    Eigen::Matrix4d gamma = Eigen::Vector4d(1.0, 1.0, 1.0, -1.0).asDiagonal();
    Eigen::Matrix4d vt = gamma * v * gamma;

    Eigen::Matrix4d omega = Eigen::Matrix4d::Zero();
    omega(0, 1) = 1.0; omega(1, 0) = -1.0;
    omega(2, 3) = 1.0; omega(3, 2) = -1.0;

    Eigen::Matrix4cd a = vt.cast<std::complex<double>>() +
                         std::complex<double>(0.0, 0.25) * omega.cast<std::complex<double>>();
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> solver(a);
    return solver.eigenvalues().minCoeff();
}

EntanglementResult entanglement(const Eigen::Matrix4d& v, double r_ref) {
    const double min_eig = entanglement_min_eig(v);
    const double bound = std::abs((std::exp(-2.0 * r_ref) - 1.0) / 4.0);
    return EntanglementResult{min_eig, min_eig / bound};
}

WignerField wigner_gaussian(const Eigen::Matrix2d& v, const PhaseGrid& grid) {
    const double det = v.determinant();
    if (!(det > 1e-300))
        throw std::domain_error("wigner_gaussian: degenerate covariance matrix");
    const Eigen::Matrix2d inv = v.inverse();
    const double norm = 1.0 / (2.0 * kPi * std::sqrt(det));

    WignerField f{grid, Eigen::MatrixXd(grid.resolution, grid.resolution)};
    for (int iq = 0; iq < grid.resolution; ++iq) {
        const double q = grid.coord(iq);
        for (int ip = 0; ip < grid.resolution; ++ip) {
            const double p = grid.coord(ip);
            const double quad =
                inv(0, 0) * q * q + 2.0 * inv(0, 1) * q * p + inv(1, 1) * p * p;
            f.values(iq, ip) = norm * std::exp(-0.5 * quad);
        }
    }
    return f;
}

WignerField wigner_fock1(const PhaseGrid& grid) {
    WignerField f{grid, Eigen::MatrixXd(grid.resolution, grid.resolution)};
    for (int iq = 0; iq < grid.resolution; ++iq) {
        const double q = grid.coord(iq);
        for (int ip = 0; ip < grid.resolution; ++ip) {
            const double p = grid.coord(ip);
            const double rho2 = q * q + p * p;
            f.values(iq, ip) = (2.0 / kPi) * (4.0 * rho2 - 1.0) * std::exp(-2.0 * rho2);
        }
    }
    return f;
}

WignerField ensemble_average_wigner(const std::vector<WignerField>& fields) {
    if (fields.empty())
        throw std::invalid_argument("ensemble_average_wigner: no fields");
    WignerField out = fields.front();
    for (std::size_t i = 1; i < fields.size(); ++i) {
        if (!(fields[i].grid == out.grid))
            throw std::invalid_argument("ensemble_average_wigner: grid mismatch");
        out.values += fields[i].values;
    }
    out.values /= static_cast<double>(fields.size());
    return out;
}

double integrate(const WignerField& f) {
    const Eigen::VectorXd w = trapezoid_weights(f.grid);
    return w.transpose() * f.values * w;
}

double overlap_fidelity(const WignerField& a, const WignerField& b) {
    if (!(a.grid == b.grid))
        throw std::invalid_argument("overlap_fidelity: grid mismatch");
    const Eigen::VectorXd w = trapezoid_weights(a.grid);
    const double overlap = w.transpose() * (a.values.cwiseProduct(b.values)) * w;
    return kPi * overlap;
}

} // namespace sqzlat
