#include "sqzlat/lattice.hpp"

#include <cmath>
#include <stdexcept>

#include "sqzlat/rng.hpp"

namespace sqzlat {

namespace {

void check_spec(const LatticeSpec& spec) {
    if (spec.sites < 2)
        throw std::invalid_argument("lattice spec: sites must be >= 2");
    if (!(spec.alpha > 0.0 && spec.alpha < 1.0))
        throw std::invalid_argument("lattice spec: alpha must lie in (0, 1)");
}

} // namespace

Hamiltonian build_hamiltonian(const LatticeSpec& spec) {
    check_spec(spec);
    const int n = spec.sites;
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
    h.diagonal().setConstant(spec.beta);

    if (spec.kind == LatticeKind::SSH) {
        // Weak bond first: u on (2k, 2k+1), v on (2k+1, 2k+2).
        for (int i = 0; i + 1 < n; ++i) {
            const double c = (i % 2 == 0) ? spec.u() : spec.v;
            h(i, i + 1) = c;
            h(i + 1, i) = c;
        }
    } else {
        // Uniform chain with coupling w and a detuned first site.
        const double w = spec.w();
        for (int i = 0; i + 1 < n; ++i) {
            h(i, i + 1) = w;
            h(i + 1, i) = w;
        }
        h(0, 0) += spec.eps0();
    }
    return Hamiltonian{std::move(h), spec, std::nullopt};
}

Hamiltonian apply_disorder(const Hamiltonian& h, const DisorderConfig& cfg) {
    if (cfg.width < 0.0)
        throw std::invalid_argument("disorder config: width must be >= 0");

    Hamiltonian out = h;
    std::mt19937_64 eng(cfg.seed);
    const int n = h.sites();

    if (cfg.kind == DisorderKind::Hopping) {
        // Fixed row-major scan over the upper triangle keeps the sampling
        // order, and therefore the realization, independent of storage.
        for (int i = 0; i < n; ++i) {
            for (int j = i + 1; j < n; ++j) {
                if (out.mat(i, j) == 0.0) continue;
                const double s = uniform_about(eng, out.mat(i, j), cfg.width);
                out.mat(i, j) = s;
                out.mat(j, i) = s;
            }
        }
    } else {
        for (int i = 0; i < n; ++i)
            out.mat(i, i) = uniform_about(eng, out.mat(i, i), cfg.width);
    }
    out.disorder = cfg;
    return out;
}

Eigensystem diagonalize(const Hamiltonian& h) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h.mat);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("diagonalize: eigensolver failed to converge");
    return Eigensystem{solver.eigenvalues(), solver.eigenvectors()};
}

namespace {

EdgeMode mode_from_column(const Eigensystem& es, int idx) {
    Eigen::VectorXcd c = es.vectors.col(idx).cast<std::complex<double>>();
    c.normalize();
    // Fix the global phase so the head coefficient is real and >= 0.
    const std::complex<double> head = c(0);
    if (std::abs(head) > 0.0) c *= std::conj(head) / std::abs(head);
    return EdgeMode{std::move(c), es.eigenvalues(idx)};
}

} // namespace

EdgeMode edge_mode(const Hamiltonian& h) {
    const Eigensystem es = diagonalize(h);
    const int n = h.sites();
    const double beta = h.spec.beta;

    int best = 0;
    if (h.spec.kind == LatticeKind::SSH) {
        // Eigenvalue closest to the bare propagation constant; on a near-tie
        // take the candidate with the most weight on the terminating site.
        double best_gap = std::abs(es.eigenvalues(0) - beta);
        for (int i = 1; i < n; ++i) {
            const double gap = std::abs(es.eigenvalues(i) - beta);
            if (gap < best_gap - 1e-12) {
                best = i;
                best_gap = gap;
            } else if (gap < best_gap + 1e-12 &&
                       es.vectors(0, i) * es.vectors(0, i) >
                           es.vectors(0, best) * es.vectors(0, best)) {
                best = i;
                best_gap = std::min(gap, best_gap);
            }
        }
    } else {
        // Most-detached level; the defect state sits outside the band.
        double best_gap = -1.0;
        for (int i = 0; i < n; ++i) {
            const double gap = std::abs(es.eigenvalues(i) - beta);
            if (gap > best_gap + 1e-12) {
                best = i;
                best_gap = gap;
            } else if (gap > best_gap - 1e-12 &&
                       es.vectors(0, i) * es.vectors(0, i) >
                           es.vectors(0, best) * es.vectors(0, best)) {
                best = i;
            }
        }
    }
    return mode_from_column(es, best);
}

EdgeMode analytic_edge_mode(const LatticeSpec& spec) {
    check_spec(spec);
    const int n = spec.sites;
    const double a = spec.alpha;
    Eigen::VectorXcd c = Eigen::VectorXcd::Zero(n);

    double kappa = spec.beta;
    if (spec.kind == LatticeKind::SSH) {
        for (int k = 0; 2 * k < n; ++k)
            c(2 * k) = std::pow(-a, k);
    } else {
        for (int i = 0; i < n; ++i)
            c(i) = std::pow(-a, i);
        kappa += -spec.w() * (1.0 + a * a) / a;
    }
    c.normalize();
    return EdgeMode{std::move(c), kappa};
}

} // namespace sqzlat
