#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>

#include "sqzlat/ensemble.hpp"
#include "sqzlat/evolve.hpp"
#include "sqzlat/quantum_info.hpp"
#include "sqzlat/teleport.hpp"

namespace sqzlat {

inline constexpr std::string_view kVersion = "0.1.0";

// The teleportation channel spans two lattice sections per arm: the shares
// become entangled over the first z_max and Bob's correction lands only after
// his share has traversed an equal second section, so resources are extracted
// at 2 * z_max.
inline constexpr double kTeleportSections = 2.0;

// Resolved experiment parameters; figure defaults first, overrides on top.
struct Params {
    double alpha = 0.3;
    double xi_r = 0.9;
    double xi_theta = 0.0;
    int sites = 15;
    double z_max = 10.0;
    int z_steps = 201;
    double disorder_width = -1.0;  // negative: per-figure default
    std::uint64_t master_seed = 42;
    double grid_extent = 6.0;
    int grid_resolution = 241;
    int frames = 100;
    int workers = 0;

    SqueezeParam xi() const { return SqueezeParam{xi_r, xi_theta}; }
    PhaseGrid grid() const { return PhaseGrid{grid_extent, grid_resolution}; }
    ZGrid zgrid() const { return ZGrid{z_max, z_steps}; }
    LatticeSpec spec(LatticeKind kind) const {
        return LatticeSpec{kind, sites, alpha, 1.0, 0.0};
    }
};

// Applies `key=value` overrides; unknown keys raise std::invalid_argument
// listing the accepted keys.
Params apply_overrides(Params p, const std::map<std::string, std::string>& overrides);

struct RunConfig {
    std::string figure;  // fig2..fig9, movie1
    std::filesystem::path out_dir;
    Params params;
};

// Writes the figure's CSV/JSON artifacts plus a manifest; returns exit code.
int run_experiment(const RunConfig& cfg);

// Fast self-check battery; prints one pass/fail line per check to `out` and
// returns the number of failures (reported, never thrown).
int run_validate(std::ostream& out);

// Shared pipeline pieces, also exercised by the acceptance suite.

// Per-realization z-sweep of site-0 quadrature observables under single-mode
// injection, reported in the frame rotating at the pristine localized mode:
// [max dB | Var X(0) | Var X(pi/2)], each of length zgrid.steps.
Eigen::VectorXd quadrature_sweep_trace(const Params& p, LatticeKind kind,
                                       DisorderKind dkind, double width,
                                       std::uint64_t seed);

QuadraturePhaseStats quadrature_sweep_statistics(const Params& p, LatticeKind kind,
                                                 DisorderKind dkind, double width,
                                                 const EnsemblePlan& plan);

// Evolves a two-mode squeezed injection across two independently disordered
// copies of the lattice to z and returns the reduced edge-pair resource.
TeleportResource lattice_resource(const Params& p, LatticeKind kind,
                                  DisorderKind dkind, double width, double z,
                                  std::uint64_t seed);

struct TeleportEnsembleResult {
    double fidelity_mean = 0.0;
    double peak_reduction_mean = 0.0;
    WignerField w_out_mean;   // arithmetic mean over realizations
    double w_out_min = 0.0;   // most negative value of the mean field
    int realizations = 0;
};

// N flat realizations (no sextet grouping) of the full teleport pipeline.
TeleportEnsembleResult teleport_ensemble(const Params& p, LatticeKind kind,
                                         double width, int realizations);

} // namespace sqzlat
