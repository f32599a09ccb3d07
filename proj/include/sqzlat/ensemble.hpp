#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>

namespace sqzlat {

// Disorder ensembles run as `sextets` groups of `group_size` realizations;
// the spread is quoted as the standard deviation of the group means.
struct EnsemblePlan {
    int sextets = 50;
    int group_size = 6;
    std::uint64_t master_seed = 42;

    int realizations() const { return sextets * group_size; }
};

// Deterministic per-realization seed; independent of scheduling.
std::uint64_t realization_seed(std::uint64_t master, int group, int index);

// An experiment maps a realization seed to a fixed-length observable trace.
using Experiment = std::function<Eigen::VectorXd(std::uint64_t seed)>;

// Traces for every realization, row r = group*group_size + index. workers=0
// uses the hardware concurrency; results are identical for any worker count.
Eigen::MatrixXd collect_traces(const EnsemblePlan& plan, const Experiment& experiment,
                               int workers = 0);

struct EnsembleStats {
    Eigen::VectorXd mean;     // grand mean over all realizations
    Eigen::VectorXd stddev;   // sample std of the group means
    Eigen::VectorXd ci_low;   // mean -/+ stddev
    Eigen::VectorXd ci_high;
    int n = 0;
};

EnsembleStats reduce_traces(const Eigen::MatrixXd& traces, int sextets, int group_size);
EnsembleStats run_ensemble(const EnsemblePlan& plan, const Experiment& experiment,
                           int workers = 0);

// Reduce variance-domain traces and report in dB: the mean variance converts
// directly; the spread is the dB-domain std of the group means.
EnsembleStats reduce_variance_traces_db(const Eigen::MatrixXd& var_traces, int sextets,
                                        int group_size);

// Quadrature-phase observables need mixed-domain averaging: variances at a
// fixed phase average in the variance domain and convert to dB afterwards,
// while per-realization optimal squeezing averages directly in dB.
// The experiment trace must hold three stacked segments of length trace_len:
// [max squeezing dB | Var at X(0) | Var at X(pi/2)].
struct QuadraturePhaseStats {
    EnsembleStats max_db;
    EnsembleStats x1_db;
    EnsembleStats x2_db;
};

QuadraturePhaseStats quadrature_phase_statistics(const EnsemblePlan& plan,
                                                 const Experiment& experiment,
                                                 int trace_len, int workers = 0);

} // namespace sqzlat
