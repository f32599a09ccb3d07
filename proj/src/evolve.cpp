#include "sqzlat/evolve.hpp"

#include <stdexcept>

namespace sqzlat {

Propagator propagator(const Eigensystem& es, double z) {
    const int n = static_cast<int>(es.eigenvalues.size());
    Eigen::VectorXcd phases(n);
    for (int i = 0; i < n; ++i)
        phases(i) = std::polar(1.0, -es.eigenvalues(i) * z);
    Eigen::MatrixXcd q = es.vectors.cast<std::complex<double>>();
    return Propagator{q * phases.asDiagonal() * q.adjoint(), z};
}

Propagator propagator(const Hamiltonian& h, double z) {
    return propagator(diagonalize(h), z);
}

GaussianState evolve(const GaussianState& s, const Propagator& u) {
    if (s.modes() != u.umat.rows())
        throw std::invalid_argument("evolve: state and propagator dimensions differ");
    GaussianState out = s;
    out.nmat = u.umat.conjugate() * s.nmat * u.umat.transpose();
    out.mmat = u.umat * s.mmat * u.umat.transpose();
    return out;
}

GaussianState evolve_two_lattices(const GaussianState& s, const Propagator& ua,
                                  const Propagator& ub) {
    const int na = static_cast<int>(ua.umat.rows());
    const int nb = static_cast<int>(ub.umat.rows());
    if (s.modes() != na + nb)
        throw std::invalid_argument("evolve_two_lattices: state does not span both lattices");
    Eigen::MatrixXcd u = Eigen::MatrixXcd::Zero(na + nb, na + nb);
    u.topLeftCorner(na, na) = ua.umat;
    u.bottomRightCorner(nb, nb) = ub.umat;
    return evolve(s, Propagator{std::move(u), ua.z});
}

GaussianState evolve_two_lattices(const GaussianState& s, const Hamiltonian& ha,
                                  const Hamiltonian& hb, double z) {
    return evolve_two_lattices(s, propagator(ha, z), propagator(hb, z));
}

} // namespace sqzlat
