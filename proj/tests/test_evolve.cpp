#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "sqzlat/evolve.hpp"

using namespace sqzlat;
using std::numbers::pi;

namespace {

const SqueezeParam kXi{0.9, 0.0};

LatticeSpec ssh_spec() { return LatticeSpec{LatticeKind::SSH, 15, 0.3, 1.0, 0.0}; }

Hamiltonian disordered_ssh(std::uint64_t seed) {
    return apply_disorder(build_hamiltonian(ssh_spec()),
                          DisorderConfig{DisorderKind::Hopping, 0.6, seed});
}

} // namespace

TEST_SUITE("evolve") {

TEST_CASE("two-site coupler at a quarter period swaps the modes") {
    LatticeSpec spec{LatticeKind::SSH, 2, 0.5, 1.0, 0.0};
    // Single bond (the weak one): H = alpha*v * sigma_x.
    const Hamiltonian h = build_hamiltonian(spec);
    REQUIRE(h.mat(0, 1) == doctest::Approx(0.5));
    const Propagator u = propagator(h, pi);  // alpha*v*z = pi/2
    const std::complex<double> mi(0.0, -1.0);
    CHECK(std::abs(u.umat(0, 0)) < 1e-12);
    CHECK(std::abs(u.umat(0, 1) - mi) < 1e-12);
    CHECK(std::abs(u.umat(1, 0) - mi) < 1e-12);
    CHECK(std::abs(u.umat(1, 1)) < 1e-12);
}

TEST_CASE("propagator is unitary and composes as a semigroup") {
    const Hamiltonian h = disordered_ssh(11);
    const Propagator u1 = propagator(h, 1.7);
    const Propagator u2 = propagator(h, 2.6);
    const Propagator u12 = propagator(h, 4.3);
    const Eigen::MatrixXcd eye = Eigen::MatrixXcd::Identity(15, 15);
    CHECK((u1.umat.adjoint() * u1.umat - eye).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((u1.umat * u2.umat - u12.umat).cwiseAbs().maxCoeff() < 1e-9);
    CHECK((propagator(h, 0.0).umat - eye).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("zero distance leaves the state untouched") {
    const GaussianState s = inject_single_mode(vacuum(15), 0, kXi);
    const GaussianState e = evolve(s, propagator(disordered_ssh(3), 0.0));
    CHECK((e.nmat - s.nmat).cwiseAbs().maxCoeff() < 1e-14);
    CHECK((e.mmat - s.mmat).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("evolution conserves photons and keeps the state pure and physical") {
    const Hamiltonian h = disordered_ssh(7);
    const GaussianState s0 = inject_collective(edge_mode(h), kXi);
    for (const double z : {1.3, 3.7, 10.0}) {
        const GaussianState s = evolve(s0, propagator(h, z));
        CHECK(total_photon_number(s) ==
              doctest::Approx(total_photon_number(s0)).epsilon(1e-12));
        CHECK(physicality_min_eig(s) > -1e-12);
        const Eigen::VectorXd nu = symplectic_eigenvalues(full_quad_cov(s));
        CHECK((nu.array() - 0.25).abs().maxCoeff() < 1e-10);
    }
}

TEST_CASE("single-site occupation follows the propagator column exactly") {
    const LatticeSpec spec = ssh_spec();
    const Hamiltonian h = build_hamiltonian(spec);
    const GaussianState s0 = inject_single_mode(vacuum(15), 0, kXi);
    const double sh2 = std::sinh(0.9) * std::sinh(0.9);
    for (const double z : {2.0, 10.0}) {
        const Propagator u = propagator(h, z);
        const GaussianState s = evolve(s0, u);
        for (int n = 0; n < 15; ++n)
            CHECK(std::abs((photon_number(s, n)) - (sh2 * std::norm(u.umat(n, 0)))) < 1e-12);
    }
    // Edge survival: most of the excitation stays on the first site.
    const Propagator u10 = propagator(h, 10.0);
    CHECK(std::abs((std::norm(u10.umat(0, 0))) - (0.794)) < 0.01);
}

TEST_CASE("an eigenmode only precesses: the co-rotating frame freezes it") {
    const LatticeSpec spec = ssh_spec();
    const EdgeMode mode = analytic_edge_mode(spec);
    const GaussianState s0 = inject_collective(mode, kXi);
    const Hamiltonian h = build_hamiltonian(spec);
    const double z = 6.0;
    const GaussianState s = rotate_frame(evolve(s0, propagator(h, z)), mode.kappa * z);
    // The geometric profile is an exact eigenvector of the odd-length chain,
    // so nothing moves beyond eigensolver roundoff.
    CHECK(std::abs((max_squeezing_db(s, 0).db) - (max_squeezing_db(s0, 0).db)) < 1e-9);
    CHECK((s.nmat - s0.nmat).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("paired lattices evolve independently and keep their cross moments") {
    const Hamiltonian ha = disordered_ssh(21);
    const Hamiltonian hb = disordered_ssh(22);
    const GaussianState s0 = inject_two_mode(vacuum(30), 0, 15, kXi);
    const double z = 3.1;
    const GaussianState s = evolve_two_lattices(s0, ha, hb, z);

    // Manual block propagator over the doubled register.
    Eigen::MatrixXcd big = Eigen::MatrixXcd::Zero(30, 30);
    big.topLeftCorner(15, 15) = propagator(ha, z).umat;
    big.bottomRightCorner(15, 15) = propagator(hb, z).umat;
    const GaussianState want = evolve(s0, Propagator{big, z});
    CHECK((s.nmat - want.nmat).cwiseAbs().maxCoeff() < 1e-13);
    CHECK((s.mmat - want.mmat).cwiseAbs().maxCoeff() < 1e-13);
    CHECK(total_photon_number(s) ==
          doctest::Approx(total_photon_number(s0)).epsilon(1e-12));

    CHECK_THROWS_AS(evolve_two_lattices(inject_two_mode(vacuum(4), 0, 2, kXi), ha, hb, z),
                    std::invalid_argument);
    CHECK_THROWS_AS(evolve(s0, propagator(ha, 1.0)), std::invalid_argument);
}

} // TEST_SUITE
