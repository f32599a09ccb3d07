#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "sqzlat/lattice.hpp"

namespace sqzlat {

// Squeeze parameter xi = r * exp(i*theta); theta is canonicalized to [0, 2*pi).
struct SqueezeParam {
    double r = 0.0;
    double theta = 0.0;
};

// Zero-mean Gaussian state of `modes()` bosonic modes, fully described by the
// correlation matrices N[n,m] = <a_n^dag a_m> (Hermitian, vacuum = 0) and
// M[n,m] = <a_n a_m> (symmetric, vacuum = 0).
struct GaussianState {
    Eigen::MatrixXcd nmat;
    Eigen::MatrixXcd mmat;

    int modes() const { return static_cast<int>(nmat.rows()); }
};

GaussianState vacuum(int modes);

// Single-mode squeezed vacuum written into mode n, which must still be in
// vacuum (these injections set correlations, they do not compose).
GaussianState inject_single_mode(const GaussianState& s, int n, const SqueezeParam& xi);

// Two-mode squeezed vacuum across distinct modes n and m.
GaussianState inject_two_mode(const GaussianState& s, int n, int m, const SqueezeParam& xi);

// Squeezed vacuum of the collective mode A = sum_n c_n a_n; coeffs must be
// unit-norm. Returns a fresh state over mode.coeffs.size() modes.
GaussianState inject_collective(const EdgeMode& mode, const SqueezeParam& xi);

// Measurement frame co-rotating at a reference propagation constant:
// a_n -> a_n e^{i phi}. N is invariant, M acquires e^{2 i phi}.
GaussianState rotate_frame(const GaussianState& s, double phi);

// Symmetrized quadrature covariance over the selected modes in the interleaved
// basis (X_{m0}(0), X_{m0}(pi/2), X_{m1}(0), ...), vacuum variance 1/4.
// Mode indices must be distinct.
Eigen::MatrixXd quad_cov(const GaussianState& s, const std::vector<int>& modes);
Eigen::MatrixXd full_quad_cov(const GaussianState& s);

// Variance of X_n(phi) = (a_n e^{-i phi} + a_n^dag e^{i phi}) / 2.
double variance(const GaussianState& s, int n, double phi);
double squeezing_db(const GaussianState& s, int n, double phi);

struct MaxSqueezing {
    double db = 0.0;
    double phi_star = 0.0;  // optimal phase in [0, pi)
};
MaxSqueezing max_squeezing_db(const GaussianState& s, int n);

// Joint quadrature X_{n,m}(phi) = (X_n(phi) + X_m(phi)) / sqrt(2), n != m.
double two_mode_variance(const GaussianState& s, int n, int m, double phi);
double two_mode_squeezing_db(const GaussianState& s, int n, int m, double phi);
MaxSqueezing max_two_mode_squeezing_db(const GaussianState& s, int n, int m);

// Closed-form optimal squeezing of a squeezed collective mode with
// coefficients c, evaluated at site n (or the pair n,m). Independent of the
// correlation-matrix machinery; used for cross-validation and fast sweeps.
double analytic_eigenmode_squeezing(const Eigen::VectorXcd& coeffs, const SqueezeParam& xi, int n);
double analytic_eigenmode_squeezing(const Eigen::VectorXcd& coeffs, const SqueezeParam& xi, int n, int m);

double photon_number(const GaussianState& s, int n);
double total_photon_number(const GaussianState& s);

// Smallest eigenvalue of V + (i/4)*Omega; >= 0 (to tolerance) iff physical.
double physicality_min_eig(const GaussianState& s);

// Magnitudes of the eigenvalues of i*Omega*V, in ascending order; each
// symplectic eigenvalue appears twice. Pure states give 1/4 throughout.
Eigen::VectorXd symplectic_eigenvalues(const Eigen::MatrixXd& v);

// 10*log10(variance / vacuum), floored at ratio 1e-15 to keep logs finite.
double db_of_variance_ratio(double ratio);

} // namespace sqzlat
