#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sqzlat/ensemble.hpp"
#include "sqzlat/gaussian.hpp"
#include "sqzlat/lattice.hpp"
#include "sqzlat/quantum_info.hpp"

namespace sqzlat {

// All floats are serialized as %.17g so repeated runs are byte-identical and
// round-trip exactly.
std::string format_double(double x);

void write_table_csv(const std::filesystem::path& path,
                     const std::vector<std::string>& header,
                     const Eigen::MatrixXd& rows);

void write_matrix_csv(const std::filesystem::path& path, const Eigen::MatrixXd& m);

// Four sibling files: <base>_n_re.csv, _n_im.csv, _m_re.csv, _m_im.csv.
void write_state_csv(const std::filesystem::path& base, const GaussianState& s);

// Grid metadata header (q_min, q_max, p_min, p_max, resolution), then the
// field values row-major (one row per q sample).
void write_wigner_csv(const std::filesystem::path& path, const WignerField& f);
WignerField read_wigner_csv(const std::filesystem::path& path);

// Long-format statistics table: x, observable, mean, std, ci_low, ci_high, n.
struct StatsColumn {
    std::string observable;
    EnsembleStats stats;
};
void write_stats_csv(const std::filesystem::path& path, const std::string& x_name,
                     const Eigen::VectorXd& x, const std::vector<StatsColumn>& columns);

// key = value lines, '#' comments. Keys: kind, sites, alpha, beta,
// disorder.kind, disorder.width, disorder.seed.
std::pair<LatticeSpec, std::optional<DisorderConfig>> read_lattice_config(
    const std::filesystem::path& path);

} // namespace sqzlat
