#include <doctest.h>

#include <cmath>
#include <set>

#include "sqzlat/lattice.hpp"

using namespace sqzlat;

namespace {

LatticeSpec ssh_spec() { return LatticeSpec{LatticeKind::SSH, 15, 0.3, 1.0, 0.0}; }
LatticeSpec imp_spec() { return LatticeSpec{LatticeKind::Impurity, 15, 0.3, 1.0, 0.0}; }

double odd_site_weight(const EdgeMode& mode) {
    double w = 0.0;
    for (int i = 1; i < mode.coeffs.size(); i += 2) w += std::norm(mode.coeffs(i));
    return w;
}

} // namespace

TEST_SUITE("lattice") {

TEST_CASE("dimerized chain starts with the weak bond") {
    const Hamiltonian h = build_hamiltonian(ssh_spec());
    REQUIRE(h.mat.rows() == 15);
    CHECK(h.mat(0, 1) == doctest::Approx(0.3).epsilon(1e-15));
    CHECK(h.mat(1, 2) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(h.mat(2, 3) == doctest::Approx(0.3).epsilon(1e-15));
    CHECK(h.mat.diagonal().cwiseAbs().maxCoeff() == 0.0);
    CHECK(h.mat(0, 2) == 0.0);
    CHECK((h.mat - h.mat.transpose().eval()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("defect chain is uniform with a detuned first site") {
    const Hamiltonian h = build_hamiltonian(imp_spec());
    const double w = 0.3 / 0.7;
    for (int i = 0; i + 1 < 15; ++i)
        CHECK(h.mat(i, i + 1) == doctest::Approx(w).epsilon(1e-15));
    CHECK(h.mat(0, 0) == doctest::Approx(-w / 0.3).epsilon(1e-15));
    for (int i = 1; i < 15; ++i) CHECK(h.mat(i, i) == 0.0);
}

TEST_CASE("spec validation") {
    LatticeSpec bad = ssh_spec();
    bad.sites = 1;
    CHECK_THROWS_AS(build_hamiltonian(bad), std::invalid_argument);
    bad = ssh_spec();
    bad.alpha = 1.0;
    CHECK_THROWS_AS(build_hamiltonian(bad), std::invalid_argument);
    bad.alpha = -0.2;
    CHECK_THROWS_AS(build_hamiltonian(bad), std::invalid_argument);

    const Hamiltonian h = build_hamiltonian(ssh_spec());
    CHECK_THROWS_AS(apply_disorder(h, DisorderConfig{DisorderKind::Hopping, -0.1, 1}),
                    std::invalid_argument);
}

TEST_CASE("hopping disorder perturbs only existing bonds, within half the width") {
    const Hamiltonian h = build_hamiltonian(ssh_spec());
    const Hamiltonian d = apply_disorder(h, DisorderConfig{DisorderKind::Hopping, 0.6, 5});
    for (int i = 0; i < 15; ++i) {
        for (int j = 0; j < 15; ++j) {
            if (std::abs(i - j) == 1) {
                CHECK(std::abs(d.mat(i, j) - h.mat(i, j)) <= 0.3 + 1e-15);
            } else {
                CHECK(d.mat(i, j) == h.mat(i, j));
            }
        }
    }
    CHECK((d.mat - d.mat.transpose().eval()).cwiseAbs().maxCoeff() == 0.0);
    CHECK((d.mat - h.mat).cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("onsite disorder perturbs only the diagonal") {
    const Hamiltonian h = build_hamiltonian(imp_spec());
    const Hamiltonian d = apply_disorder(h, DisorderConfig{DisorderKind::Onsite, 0.4, 9});
    for (int i = 0; i < 15; ++i) {
        CHECK(std::abs(d.mat(i, i) - h.mat(i, i)) <= 0.2 + 1e-15);
        for (int j = i + 1; j < 15; ++j) CHECK(d.mat(i, j) == h.mat(i, j));
    }
}

TEST_CASE("disorder draws are deterministic in the seed and zero width is exact") {
    const Hamiltonian h = build_hamiltonian(ssh_spec());
    const DisorderConfig cfg{DisorderKind::Hopping, 0.6, 123};
    CHECK((apply_disorder(h, cfg).mat - apply_disorder(h, cfg).mat)
              .cwiseAbs()
              .maxCoeff() == 0.0);
    CHECK((apply_disorder(h, DisorderConfig{DisorderKind::Hopping, 0.6, 124}).mat -
           apply_disorder(h, cfg).mat)
              .cwiseAbs()
              .maxCoeff() > 0.0);
    CHECK((apply_disorder(h, DisorderConfig{DisorderKind::Hopping, 0.0, 123}).mat -
           h.mat)
              .cwiseAbs()
              .maxCoeff() == 0.0);
}

TEST_CASE("spectrum is ascending and chiral-paired for bond-disordered chains") {
    for (const std::uint64_t seed : {0ull, 1ull, 2ull}) {
        Hamiltonian h = build_hamiltonian(ssh_spec());
        if (seed > 0)
            h = apply_disorder(h, DisorderConfig{DisorderKind::Hopping, 0.6, seed});
        const Eigensystem es = diagonalize(h);
        for (int i = 0; i + 1 < 15; ++i)
            CHECK(es.eigenvalues(i) <= es.eigenvalues(i + 1));
        // Bipartite coupling: the spectrum is symmetric about zero and the odd
        // site count pins one level exactly at the bare constant.
        for (int i = 0; i < 15; ++i)
            CHECK(std::abs((es.eigenvalues(i) + es.eigenvalues(14 - i)) - (0.0)) < 1e-12);
        CHECK(std::abs(es.eigenvalues(7)) < 1e-12);
    }
}

TEST_CASE("dimerized-chain edge mode: frozen head coefficients and geometric tail") {
    const EdgeMode mode = edge_mode(build_hamiltonian(ssh_spec()));
    CHECK(std::abs((mode.kappa) - (0.0)) < 1e-12);
    CHECK(mode.coeffs.norm() == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(mode.coeffs(0).real() == doctest::Approx(0.9539392034701434).epsilon(1e-12));
    CHECK(mode.coeffs(2).real() == doctest::Approx(-0.2861817610410429).epsilon(1e-12));
    CHECK(mode.coeffs(4).real() == doctest::Approx(0.0858545283123129).epsilon(1e-12));
    CHECK(odd_site_weight(mode) < 1e-24);
}

TEST_CASE("defect-chain mode: geometric profile on every site, detached eigenvalue") {
    const LatticeSpec spec = imp_spec();
    const EdgeMode mode = edge_mode(build_hamiltonian(spec));
    const double w = spec.w();
    CHECK(mode.kappa ==
          doctest::Approx(-w * (1.0 + 0.09) / 0.3).epsilon(1e-12));
    // Outside the band (width 2w around beta), hence the most-detached level.
    CHECK(std::abs(mode.kappa) > 2.0 * w + 1e-6);
    // The finite chain reflects a weak growing tail off the far wall, so the
    // geometric ratio -alpha is contaminated by ~alpha^{2(N-1-n)} at site n
    // (measured amplitude 2.5e-2 at the last bond, decaying by alpha^2 inward).
    for (int i = 0; i + 1 < 15; ++i) {
        const double contamination = 1e-1 * std::pow(0.09, 13 - i) + 1e-14;
        CHECK(std::abs((mode.coeffs(i + 1) / mode.coeffs(i)).real() + 0.3) <
              contamination);
    }
}

TEST_CASE("analytic edge modes match the numerically extracted ones") {
    for (const LatticeSpec spec : {ssh_spec(), imp_spec()}) {
        const EdgeMode want = analytic_edge_mode(spec);
        const EdgeMode got = edge_mode(build_hamiltonian(spec));
        // The dimerized-chain profile is an exact eigenvector of the finite
        // chain; the defect-chain profile is truncated at the far boundary, so
        // it matches only to the residual tail weight alpha^sites ~ 1.4e-8.
        const double tol = spec.kind == LatticeKind::SSH ? 1e-12 : 2e-8;
        CHECK(want.coeffs.norm() == doctest::Approx(1.0).epsilon(1e-14));
        CHECK((want.coeffs - got.coeffs).cwiseAbs().maxCoeff() < tol);
        CHECK(std::abs(want.kappa - got.kappa) < tol);
    }
}

TEST_CASE("bond disorder keeps the edge mode on the even sublattice") {
    std::set<double> kappas;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const Hamiltonian h = apply_disorder(
            build_hamiltonian(ssh_spec()), DisorderConfig{DisorderKind::Hopping, 0.6, seed});
        const EdgeMode mode = edge_mode(h);
        CHECK(odd_site_weight(mode) < 1e-20);
        CHECK(std::abs(mode.kappa) < 1e-12);  // pinned by the sublattice symmetry
        kappas.insert(mode.kappa);
    }
    // Onsite disorder breaks the pinning.
    const Hamiltonian h = apply_disorder(build_hamiltonian(ssh_spec()),
                                         DisorderConfig{DisorderKind::Onsite, 0.6, 3});
    CHECK(std::abs(edge_mode(h).kappa) > 1e-3);
}

} // TEST_SUITE
