#pragma once

#include "sqzlat/gaussian.hpp"
#include "sqzlat/lattice.hpp"

namespace sqzlat {

// Single-particle propagator U(z) = Q exp(-i Lambda z) Q^dag.
struct Propagator {
    Eigen::MatrixXcd umat;
    double z = 0.0;
};

// Uniform sample points over [0, z_max], endpoints included.
struct ZGrid {
    double z_max = 10.0;
    int steps = 201;

    double z_at(int i) const { return z_max * static_cast<double>(i) / (steps - 1); }
};

Propagator propagator(const Eigensystem& es, double z);
Propagator propagator(const Hamiltonian& h, double z);

// Heisenberg evolution of the correlation matrices:
//   N(z) = conj(U) N U^T,  M(z) = U M U^T.
GaussianState evolve(const GaussianState& s, const Propagator& u);

// Two independent lattices evolving side by side; the state holds lattice A's
// modes first, then lattice B's. Cross blocks transform with mixed factors.
GaussianState evolve_two_lattices(const GaussianState& s, const Propagator& ua,
                                  const Propagator& ub);
GaussianState evolve_two_lattices(const GaussianState& s, const Hamiltonian& ha,
                                  const Hamiltonian& hb, double z);

} // namespace sqzlat
