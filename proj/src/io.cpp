#include "sqzlat/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace sqzlat {

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
    if (path.has_parent_path())
        std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);  // binary: no platform newline games
    if (!out)
        throw std::runtime_error("cannot open for writing: " + path.string());
    return out;
}

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

} // namespace

std::string format_double(double x) {
    // Shortest decimal form that parses back to the same bits; %g flips to
    // scientific notation early, so compare candidates by length.
    char buf[40];
    std::string best;
    for (int prec = 1; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof(buf), "%.*g", prec, x);
        if (std::strtod(buf, nullptr) == x &&
            (best.empty() || std::strlen(buf) < best.size()))
            best = buf;
    }
    return best;
}

void write_table_csv(const std::filesystem::path& path,
                     const std::vector<std::string>& header,
                     const Eigen::MatrixXd& rows) {
    if (static_cast<Eigen::Index>(header.size()) != rows.cols())
        throw std::invalid_argument("write_table_csv: header/column mismatch");
    std::ofstream out = open_out(path);
    for (std::size_t i = 0; i < header.size(); ++i)
        out << (i ? "," : "") << header[i];
    out << "\n";
    for (Eigen::Index r = 0; r < rows.rows(); ++r) {
        for (Eigen::Index c = 0; c < rows.cols(); ++c)
            out << (c ? "," : "") << format_double(rows(r, c));
        out << "\n";
    }
}

void write_matrix_csv(const std::filesystem::path& path, const Eigen::MatrixXd& m) {
    std::ofstream out = open_out(path);
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c)
            out << (c ? "," : "") << format_double(m(r, c));
        out << "\n";
    }
}

void write_state_csv(const std::filesystem::path& base, const GaussianState& s) {
    const auto stem = base.string();
    write_matrix_csv(stem + "_n_re.csv", s.nmat.real());
    write_matrix_csv(stem + "_n_im.csv", s.nmat.imag());
    write_matrix_csv(stem + "_m_re.csv", s.mmat.real());
    write_matrix_csv(stem + "_m_im.csv", s.mmat.imag());
}

void write_wigner_csv(const std::filesystem::path& path, const WignerField& f) {
    std::ofstream out = open_out(path);
    out << "q_min,q_max,p_min,p_max,resolution\n";
    out << format_double(-f.grid.extent) << "," << format_double(f.grid.extent) << ","
        << format_double(-f.grid.extent) << "," << format_double(f.grid.extent) << ","
        << f.grid.resolution << "\n";
    for (int iq = 0; iq < f.grid.resolution; ++iq) {
        for (int ip = 0; ip < f.grid.resolution; ++ip)
            out << (ip ? "," : "") << format_double(f.values(iq, ip));
        out << "\n";
    }
}

WignerField read_wigner_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open: " + path.string());
    std::string line;
    std::getline(in, line);  // header names
    std::getline(in, line);
    std::stringstream meta(line);
    std::string tok;
    std::vector<double> vals;
    while (std::getline(meta, tok, ',')) vals.push_back(std::stod(tok));
    if (vals.size() != 5)
        throw std::runtime_error("wigner csv: malformed metadata row");
    PhaseGrid grid{vals[1], static_cast<int>(vals[4])};
    WignerField f{grid, Eigen::MatrixXd(grid.resolution, grid.resolution)};
    for (int iq = 0; iq < grid.resolution; ++iq) {
        if (!std::getline(in, line))
            throw std::runtime_error("wigner csv: truncated field");
        std::stringstream row(line);
        for (int ip = 0; ip < grid.resolution; ++ip) {
            if (!std::getline(row, tok, ','))
                throw std::runtime_error("wigner csv: short row");
            f.values(iq, ip) = std::stod(tok);
        }
    }
    return f;
}

void write_stats_csv(const std::filesystem::path& path, const std::string& x_name,
                     const Eigen::VectorXd& x, const std::vector<StatsColumn>& columns) {
    std::ofstream out = open_out(path);
    out << x_name << ",observable,mean,std,ci_low,ci_high,n_realizations\n";
    for (const auto& col : columns) {
        if (col.stats.mean.size() != x.size())
            throw std::invalid_argument("write_stats_csv: stats length mismatch");
        for (Eigen::Index i = 0; i < x.size(); ++i) {
            out << format_double(x(i)) << "," << col.observable << ","
                << format_double(col.stats.mean(i)) << ","
                << format_double(col.stats.stddev(i)) << ","
                << format_double(col.stats.ci_low(i)) << ","
                << format_double(col.stats.ci_high(i)) << "," << col.stats.n << "\n";
        }
    }
}

std::pair<LatticeSpec, std::optional<DisorderConfig>> read_lattice_config(
    const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open: " + path.string());

    LatticeSpec spec;
    DisorderConfig dis;
    bool has_disorder = false;

    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error(path.string() + ":" + std::to_string(lineno) +
                                     ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));

        if (key == "kind") {
            if (val == "SSH") spec.kind = LatticeKind::SSH;
            else if (val == "Impurity") spec.kind = LatticeKind::Impurity;
            else throw std::runtime_error("unknown lattice kind: " + val);
        } else if (key == "sites") {
            spec.sites = std::stoi(val);
        } else if (key == "alpha") {
            spec.alpha = std::stod(val);
        } else if (key == "beta") {
            spec.beta = std::stod(val);
        } else if (key == "v") {
            spec.v = std::stod(val);
        } else if (key == "disorder.kind") {
            if (val == "Hopping") dis.kind = DisorderKind::Hopping;
            else if (val == "Onsite") dis.kind = DisorderKind::Onsite;
            else throw std::runtime_error("unknown disorder kind: " + val);
            has_disorder = true;
        } else if (key == "disorder.width") {
            dis.width = std::stod(val);
            has_disorder = true;
        } else if (key == "disorder.seed") {
            dis.seed = std::stoull(val);
            has_disorder = true;
        } else {
            throw std::runtime_error("unknown config key: " + key);
        }
    }
    return {spec, has_disorder ? std::optional<DisorderConfig>(dis) : std::nullopt};
}

} // namespace sqzlat
