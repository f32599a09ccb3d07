#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>

namespace sqzlat {

enum class LatticeKind { SSH, Impurity };
enum class DisorderKind { Hopping, Onsite };

// Coupled-waveguide array description. `v` sets the coupling unit, so the
// propagation distance z is measured in units of 1/v throughout.
struct LatticeSpec {
    LatticeKind kind = LatticeKind::SSH;
    int sites = 15;
    double alpha = 0.3;  // coupling ratio, 0 < alpha < 1
    double v = 1.0;
    double beta = 0.0;   // common propagation constant of the bare waveguides

    double u() const { return alpha * v; }                  // weak bond of the dimerized chain
    double w() const { return v * alpha / (1.0 - alpha); }  // first coupling of the impurity chain
    double eps0() const { return -w() / alpha; }            // impurity site detuning
};

struct DisorderConfig {
    DisorderKind kind = DisorderKind::Hopping;
    double width = 0.0;  // uniform law on [p - width/2, p + width/2] around pristine p
    std::uint64_t seed = 0;
};

struct Hamiltonian {
    Eigen::MatrixXd mat;  // real symmetric coupling matrix
    LatticeSpec spec;
    std::optional<DisorderConfig> disorder;

    int sites() const { return static_cast<int>(mat.rows()); }
};

struct Eigensystem {
    Eigen::VectorXd eigenvalues;  // ascending
    Eigen::MatrixXd vectors;      // eigenvectors in matching columns
};

// Localized edge/impurity eigenmode. coeffs has unit norm with coeffs[0]
// real and non-negative; kappa is the mode's propagation constant.
struct EdgeMode {
    Eigen::VectorXcd coeffs;
    double kappa = 0.0;
};

Hamiltonian build_hamiltonian(const LatticeSpec& spec);

// Resamples every nonzero off-diagonal coupling (Hopping) or every diagonal
// entry (Onsite) around its pristine value. Deterministic in cfg.seed; the
// sparsity pattern is preserved exactly and values are never clamped.
Hamiltonian apply_disorder(const Hamiltonian& h, const DisorderConfig& cfg);

Eigensystem diagonalize(const Hamiltonian& h);

// Numerically selected localized mode: for SSH the eigenvalue closest to
// beta (ties broken by weight on site 0), for Impurity the level most
// detached from the band.
EdgeMode edge_mode(const Hamiltonian& h);

// Closed-form mode of the pristine lattice with finite-size normalization.
EdgeMode analytic_edge_mode(const LatticeSpec& spec);

} // namespace sqzlat
