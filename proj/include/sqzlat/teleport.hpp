#pragma once

#include "sqzlat/gaussian.hpp"
#include "sqzlat/quantum_info.hpp"

namespace sqzlat {

// Reduced 4x4 quadrature covariance of the two edge modes (a0 of lattice A,
// b0 of lattice B) in the basis (q_a, p_a, q_b, p_b); every other waveguide
// is traced out.
struct TeleportResource {
    Eigen::Matrix4d vab;
};

// Covariance of the additive phase-space noise the unit-gain protocol folds
// into the input, i.e. of the pair (q_a + q_b, p_b - p_a). The cross sign is
// fixed against the integration oracle and frozen in a regression test.
struct TeleportKernel {
    Eigen::Matrix2d cov;
};

struct TeleportReport {
    double fidelity = 0.0;
    // Origin value of the averaged output relative to the input origin value:
    // the input's negative dip is reduced TO this fraction.
    double peak_reduction = 0.0;
    WignerField w_out;
};

// b0 is taken to be the first mode of the second half of the register, so the
// joint state must hold an even number of modes (two equal lattices).
TeleportResource extract_resource(const GaussianState& joint);

// Two-mode squeezed vacuum resource without any lattice in between.
TeleportResource tmsv_resource(const SqueezeParam& xi);

TeleportKernel kernel_from_resource(const TeleportResource& res);

// Literal protocol for one measurement outcome (q_a, p_c): mix the input and
// Alice's share on a balanced splitter, condition Bob's mode on the outcome,
// renormalize, displace by sqrt(2)*(q_a, p_c). Slow; this is the arbiter for
// the fast path.
WignerField brute_force_output(const WignerField& w_in, const TeleportResource& res,
                               double q_a, double p_c);

// Probability density of the outcome pair (q_a, p_c) for the given input.
double outcome_density(const WignerField& w_in, const TeleportResource& res,
                       double q_a, double p_c);

// Measurement-averaged output: input convolved with the noise kernel,
// fidelity pi * Int w_in * w_out, origin retention.
TeleportReport teleport_average(const WignerField& w_in, const TeleportResource& res);

// Gaussian smoothing of a sampled field. The spectral path is exact for
// kernels narrower than the grid step; the direct path requires
// cov >> step^2 and exists as an independent cross-check.
WignerField convolve_gaussian(const WignerField& f, const Eigen::Matrix2d& cov);
WignerField convolve_gaussian_direct(const WignerField& f, const Eigen::Matrix2d& cov);

} // namespace sqzlat
