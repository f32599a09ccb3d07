#include "sqzlat/ensemble.hpp"

#include <atomic>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "sqzlat/gaussian.hpp"
#include "sqzlat/rng.hpp"

namespace sqzlat {

std::uint64_t realization_seed(std::uint64_t master, int group, int index) {
    // The (group, index) pair maps to a unique tag word; splitmix64 is a
    // bijection, so distinct realizations can never collide under one master.
    const std::uint64_t tag =
        (static_cast<std::uint64_t>(group) << 32) | static_cast<std::uint32_t>(index);
    return mix_seed(master, tag);
}

Eigen::MatrixXd collect_traces(const EnsemblePlan& plan, const Experiment& experiment,
                               int workers) {
    if (plan.sextets < 1 || plan.group_size < 1)
        throw std::invalid_argument("ensemble plan: needs at least one group and member");
    const int total = plan.realizations();

    // First realization runs inline to fix the trace length.
    const Eigen::VectorXd first = experiment(realization_seed(plan.master_seed, 0, 0));
    const auto len = first.size();
    Eigen::MatrixXd traces(total, len);
    traces.row(0) = first;

    int n_workers = workers > 0 ? workers
                                : static_cast<int>(std::thread::hardware_concurrency());
    n_workers = std::max(1, std::min(n_workers, total - 1));

    std::atomic<int> next{1};
    std::mutex fail_mutex;
    std::optional<std::pair<std::uint64_t, std::string>> failure;

    auto body = [&] {
        for (;;) {
            const int r = next.fetch_add(1);
            if (r >= total) return;
            {
                std::lock_guard<std::mutex> lock(fail_mutex);
                if (failure) return;
            }
            const std::uint64_t seed =
                realization_seed(plan.master_seed, r / plan.group_size, r % plan.group_size);
            try {
                const Eigen::VectorXd t = experiment(seed);
                if (t.size() != len)
                    throw std::length_error("trace length changed between realizations");
                traces.row(r) = t;  // rows are disjoint across workers
            } catch (const std::exception& e) {
                std::lock_guard<std::mutex> lock(fail_mutex);
                if (!failure) failure = {seed, e.what()};
                return;
            }
        }
    };

    if (total > 1) {
        std::vector<std::thread> pool;
        pool.reserve(n_workers);
        for (int i = 0; i < n_workers; ++i) pool.emplace_back(body);
        for (auto& t : pool) t.join();
    }
    if (failure)
        throw std::runtime_error("ensemble realization with seed " +
                                 std::to_string(failure->first) + " failed: " +
                                 failure->second);
    return traces;
}

EnsembleStats reduce_traces(const Eigen::MatrixXd& traces, int sextets, int group_size) {
    const auto len = traces.cols();
    EnsembleStats stats;
    stats.n = static_cast<int>(traces.rows());
    stats.mean = traces.colwise().mean();

    Eigen::MatrixXd group_means(sextets, len);
    for (int g = 0; g < sextets; ++g)
        group_means.row(g) = traces.middleRows(g * group_size, group_size).colwise().mean();

    stats.stddev = Eigen::VectorXd::Zero(len);
    if (sextets > 1) {
        const Eigen::MatrixXd centered =
            group_means.rowwise() - group_means.colwise().mean();
        stats.stddev =
            (centered.colwise().squaredNorm() / static_cast<double>(sextets - 1))
                .cwiseSqrt()
                .transpose();
    }
    stats.ci_low = stats.mean - stats.stddev;
    stats.ci_high = stats.mean + stats.stddev;
    return stats;
}

EnsembleStats run_ensemble(const EnsemblePlan& plan, const Experiment& experiment,
                           int workers) {
    return reduce_traces(collect_traces(plan, experiment, workers), plan.sextets,
                         plan.group_size);
}

EnsembleStats reduce_variance_traces_db(const Eigen::MatrixXd& var_traces, int sextets,
                                        int group_size) {
    const auto len = var_traces.cols();
    EnsembleStats stats;
    stats.n = static_cast<int>(var_traces.rows());

    stats.mean.resize(len);
    const Eigen::VectorXd grand = var_traces.colwise().mean();
    for (Eigen::Index i = 0; i < len; ++i)
        stats.mean(i) = db_of_variance_ratio(grand(i) / 0.25);

    Eigen::MatrixXd group_db(sextets, len);
    for (int g = 0; g < sextets; ++g) {
        const Eigen::VectorXd gm =
            var_traces.middleRows(g * group_size, group_size).colwise().mean();
        for (Eigen::Index i = 0; i < len; ++i)
            group_db(g, i) = db_of_variance_ratio(gm(i) / 0.25);
    }

    stats.stddev = Eigen::VectorXd::Zero(len);
    if (sextets > 1) {
        const Eigen::MatrixXd centered = group_db.rowwise() - group_db.colwise().mean();
        stats.stddev =
            (centered.colwise().squaredNorm() / static_cast<double>(sextets - 1))
                .cwiseSqrt()
                .transpose();
    }
    stats.ci_low = stats.mean - stats.stddev;
    stats.ci_high = stats.mean + stats.stddev;
    return stats;
}

QuadraturePhaseStats quadrature_phase_statistics(const EnsemblePlan& plan,
                                                 const Experiment& experiment,
                                                 int trace_len, int workers) {
    const Eigen::MatrixXd traces = collect_traces(plan, experiment, workers);
    if (traces.cols() != 3 * trace_len)
        throw std::invalid_argument(
            "quadrature_phase_statistics: trace must stack three segments");

    QuadraturePhaseStats out;
    out.max_db = reduce_traces(traces.leftCols(trace_len), plan.sextets, plan.group_size);
    out.x1_db = reduce_variance_traces_db(traces.middleCols(trace_len, trace_len),
                                          plan.sextets, plan.group_size);
    out.x2_db = reduce_variance_traces_db(traces.rightCols(trace_len), plan.sextets,
                                          plan.group_size);
    return out;
}

} // namespace sqzlat
