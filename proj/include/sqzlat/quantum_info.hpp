#pragma once

#include <Eigen/Dense>
#include <vector>

namespace sqzlat {

// Square phase-space grid, coordinates [-extent, extent] on both axes.
// coord is written so the grid is exactly symmetric: coord(i) == -coord(N-1-i).
struct PhaseGrid {
    double extent = 6.0;
    int resolution = 241;

    double step() const { return 2.0 * extent / (resolution - 1); }
    double coord(int i) const {
        return extent * (2.0 * i - (resolution - 1)) / (resolution - 1);
    }
    bool operator==(const PhaseGrid& o) const {
        return extent == o.extent && resolution == o.resolution;
    }
};

// Sampled Wigner function; values(iq, ip) = W(coord(iq), coord(ip)).
struct WignerField {
    PhaseGrid grid;
    Eigen::MatrixXd values;
};

// Smallest eigenvalue of the partially transposed covariance matrix shifted
// by the commutator form; negative values witness entanglement. Input is the
// 4x4 quadrature covariance in the basis (X_a(0), X_a(pi/2), X_b(0), X_b(pi/2)).
double entanglement_min_eig(const Eigen::Matrix4d& v);

// min_eig together with its value normalized by the injected two-mode
// squeezed vacuum bound |(e^{-2 r_ref} - 1)/4|, so -1 marks the ideal input.
struct EntanglementResult {
    double min_eig = 0.0;
    double normalized = 0.0;
};
EntanglementResult entanglement(const Eigen::Matrix4d& v, double r_ref);

// Single-mode Gaussian Wigner function for a 2x2 quadrature covariance
// (vacuum = I/4): W(x) = exp(-x^T V^{-1} x / 2) / (2 pi sqrt(det V)).
WignerField wigner_gaussian(const Eigen::Matrix2d& v, const PhaseGrid& grid);

// One-photon Fock state: W = (2/pi) (4 rho^2 - 1) exp(-2 rho^2).
WignerField wigner_fock1(const PhaseGrid& grid);

// Pointwise mean of fields on a shared grid.
WignerField ensemble_average_wigner(const std::vector<WignerField>& fields);

// Trapezoidal integral over the grid.
double integrate(const WignerField& f);

// Overlap fidelity pi * Int W_a W_b for states with at least one pure.
double overlap_fidelity(const WignerField& a, const WignerField& b);

} // namespace sqzlat
