#pragma once

// Independent reference implementations used only by the test suites. These
// deliberately avoid the library's correlation-matrix machinery: moments come
// from truncated Fock expansions and Wigner values from wavefunction
// integrals, so agreement is meaningful.

#include <Eigen/Dense>
#include <complex>

#include "sqzlat/quantum_info.hpp"

namespace sqzlat::oracle {

struct FockMoments {
    double n_mean = 0.0;           // <a^dag a> per mode
    std::complex<double> m;        // <a a> (single mode) or <a_A a_B> (TMSV)
};

// Squeezed vacuum moments from the even-photon Fock expansion.
FockMoments smsv_moments(double r, double theta, int cutoff = 140);

// Two-mode squeezed vacuum: per-arm occupation and the cross pair moment.
FockMoments tmsv_moments(double r, double theta, int cutoff = 140);

// One-photon Wigner value from the position-wavefunction integral
// W(q,p) = (2/pi) Int psi(q+y) psi(q-y) e^{4ipy} dy (vacuum variance 1/4).
double fock1_wigner_integral(double q, double p);

// Gaussian smoothing of the one-photon Wigner function, in closed form.
Eigen::MatrixXd smeared_fock1_field(const Eigen::Matrix2d& kcov, const PhaseGrid& grid);

// Overlap results for isotropic noise kernels k * I2 against the one-photon
// (or coherent) input, all in closed form.
double fock1_fidelity_isotropic(double k);
double coherent_fidelity_isotropic(double k);
double fock1_peak_retention_isotropic(double k);

double field_rms(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);

} // namespace sqzlat::oracle
