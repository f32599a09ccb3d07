#include "sqzlat/experiments.hpp"

#include <json.hpp>

#include <atomic>
#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <stdexcept>
#include <thread>

#include "sqzlat/io.hpp"
#include "sqzlat/rng.hpp"

namespace sqzlat {

namespace {

constexpr double kPi = std::numbers::pi;

// Arm salts so the two lattices of a teleportation pair draw independent
// disorder from one realization seed.
constexpr std::uint64_t kArmA = 0xa11ce;
constexpr std::uint64_t kArmB = 0xb0b;

std::uint64_t case_master(std::uint64_t master, LatticeKind kind, DisorderKind dkind) {
    return mix_seed(master, 0x100u + 2u * static_cast<unsigned>(kind) +
                                static_cast<unsigned>(dkind));
}

Hamiltonian realization_hamiltonian(const LatticeSpec& spec, DisorderKind dkind,
                                    double width, std::uint64_t seed) {
    Hamiltonian h = build_hamiltonian(spec);
    if (width > 0.0) h = apply_disorder(h, DisorderConfig{dkind, width, seed});
    return h;
}

const char* kind_name(LatticeKind k) {
    return k == LatticeKind::SSH ? "topological" : "impurity";
}

const char* disorder_name(DisorderKind d) {
    return d == DisorderKind::Hopping ? "hopping" : "onsite";
}

void parallel_for(int n, int workers, const std::function<void(int)>& fn) {
    int n_workers = workers > 0 ? workers
                                : static_cast<int>(std::thread::hardware_concurrency());
    n_workers = std::max(1, std::min(n_workers, n));
    if (n_workers == 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(n_workers);
    for (int t = 0; t < n_workers; ++t)
        pool.emplace_back([&] {
            for (;;) {
                const int i = next.fetch_add(1);
                if (i >= n) return;
                fn(i);
            }
        });
    for (auto& t : pool) t.join();
}

} // namespace

Params apply_overrides(Params p, const std::map<std::string, std::string>& overrides) {
    for (const auto& [key, value] : overrides) {
        std::size_t used = 0;
        auto as_double = [&] { return std::stod(value, &used); };
        auto as_int = [&] { return std::stoi(value, &used); };
        if (key == "alpha") p.alpha = as_double();
        else if (key == "xi_r") p.xi_r = as_double();
        else if (key == "xi_theta") p.xi_theta = as_double();
        else if (key == "sites") p.sites = as_int();
        else if (key == "z_max") p.z_max = as_double();
        else if (key == "z_steps") p.z_steps = as_int();
        else if (key == "disorder.width") p.disorder_width = as_double();
        else if (key == "grid.extent") p.grid_extent = as_double();
        else if (key == "grid.resolution") p.grid_resolution = as_int();
        else if (key == "master_seed") p.master_seed = std::stoull(value, &used);
        else if (key == "frames") p.frames = as_int();
        else if (key == "workers") p.workers = as_int();
        else
            throw std::invalid_argument(
                "unknown override key '" + key +
                "'; accepted: alpha, xi_r, xi_theta, sites, z_max, z_steps, "
                "disorder.width, grid.extent, grid.resolution, master_seed, "
                "frames, workers");
        if (used != value.size())
            throw std::invalid_argument("override " + key + ": malformed value '" +
                                        value + "'");
    }
    return p;
}

Eigen::VectorXd quadrature_sweep_trace(const Params& p, LatticeKind kind,
                                       DisorderKind dkind, double width,
                                       std::uint64_t seed) {
    const LatticeSpec spec = p.spec(kind);
    const Eigensystem es =
        diagonalize(realization_hamiltonian(spec, dkind, width, seed));
    const double kappa = analytic_edge_mode(spec).kappa;
    const GaussianState s0 = inject_single_mode(vacuum(spec.sites), 0, p.xi());
    const ZGrid zg = p.zgrid();

    Eigen::VectorXd trace(3 * zg.steps);
    for (int i = 0; i < zg.steps; ++i) {
        const double z = zg.z_at(i);
        const GaussianState st =
            rotate_frame(evolve(s0, propagator(es, z)), kappa * z);
        trace(i) = max_squeezing_db(st, 0).db;
        trace(zg.steps + i) = variance(st, 0, 0.0);
        trace(2 * zg.steps + i) = variance(st, 0, kPi / 2.0);
    }
    return trace;
}

QuadraturePhaseStats quadrature_sweep_statistics(const Params& p, LatticeKind kind,
                                                 DisorderKind dkind, double width,
                                                 const EnsemblePlan& plan) {
    const auto experiment = [&](std::uint64_t seed) {
        return quadrature_sweep_trace(p, kind, dkind, width, seed);
    };
    return quadrature_phase_statistics(plan, experiment, p.zgrid().steps, p.workers);
}

TeleportResource lattice_resource(const Params& p, LatticeKind kind,
                                  DisorderKind dkind, double width, double z,
                                  std::uint64_t seed) {
    const LatticeSpec spec = p.spec(kind);
    const Hamiltonian ha =
        realization_hamiltonian(spec, dkind, width, mix_seed(seed, kArmA));
    const Hamiltonian hb =
        realization_hamiltonian(spec, dkind, width, mix_seed(seed, kArmB));
    const double kappa = analytic_edge_mode(spec).kappa;

    GaussianState joint = inject_two_mode(vacuum(2 * spec.sites), 0, spec.sites, p.xi());
    joint = evolve_two_lattices(joint, ha, hb, z);
    joint = rotate_frame(joint, kappa * z);
    return extract_resource(joint);
}

TeleportEnsembleResult teleport_ensemble(const Params& p, LatticeKind kind,
                                         double width, int realizations) {
    const double z = kTeleportSections * p.z_max;
    const WignerField win = wigner_fock1(p.grid());
    const int c = (p.grid_resolution - 1) / 2;

    TeleportEnsembleResult result;
    result.w_out_mean.grid = p.grid();

    if (width <= 0.0) {
        const TeleportResource res =
            lattice_resource(p, kind, DisorderKind::Hopping, 0.0, z, 0);
        TeleportReport report = teleport_average(win, res);
        result.fidelity_mean = report.fidelity;
        result.peak_reduction_mean = report.peak_reduction;
        result.w_out_mean = std::move(report.w_out);
        result.w_out_min = result.w_out_mean.values.minCoeff();
        result.realizations = 1;
        return result;
    }

    // Gather the reduced resources in parallel, then fold the convolutions in
    // realization order so the mean field is schedule-independent.
    const EnsemblePlan plan{realizations, 1,
                            case_master(p.master_seed, kind, DisorderKind::Hopping)};
    const auto experiment = [&](std::uint64_t seed) {
        const TeleportResource res =
            lattice_resource(p, kind, DisorderKind::Hopping, width, z, seed);
        return Eigen::VectorXd(Eigen::Map<const Eigen::VectorXd>(res.vab.data(), 16));
    };
    const Eigen::MatrixXd traces = collect_traces(plan, experiment, p.workers);

    Eigen::MatrixXd mean_field =
        Eigen::MatrixXd::Zero(p.grid_resolution, p.grid_resolution);
    for (int r = 0; r < realizations; ++r) {
        TeleportResource res;
        const Eigen::VectorXd row = traces.row(r);  // rows are strided, not contiguous
        res.vab = Eigen::Map<const Eigen::Matrix4d>(row.data());
        mean_field += teleport_average(win, res).w_out.values;
    }
    mean_field /= static_cast<double>(realizations);

    result.w_out_mean.values = std::move(mean_field);
    // Fidelity and origin retention are linear in the field, so the values of
    // the mean field equal the ensemble means.
    result.fidelity_mean = overlap_fidelity(win, result.w_out_mean);
    result.peak_reduction_mean = result.w_out_mean.values(c, c) / win.values(c, c);
    result.w_out_min = result.w_out_mean.values.minCoeff();
    result.realizations = realizations;
    return result;
}

namespace {

// ---------------------------------------------------------------------------
// Artifact bookkeeping

struct ArtifactSet {
    std::filesystem::path dir;
    std::vector<std::string> names;

    std::filesystem::path file(const std::string& name) {
        names.push_back(name);
        return dir / name;
    }
};

nlohmann::json params_json(const Params& p) {
    return nlohmann::json{
        {"alpha", p.alpha},
        {"xi_r", p.xi_r},
        {"xi_theta", p.xi_theta},
        {"sites", p.sites},
        {"z_max", p.z_max},
        {"z_steps", p.z_steps},
        {"disorder_width", p.disorder_width},
        {"master_seed", p.master_seed},
        {"grid_extent", p.grid_extent},
        {"grid_resolution", p.grid_resolution},
        {"frames", p.frames},
    };
}

void write_manifest(const RunConfig& cfg, const ArtifactSet& artifacts,
                    const nlohmann::json& summary = {}) {
    nlohmann::json manifest{
        {"figure", cfg.figure},
        {"version", std::string(kVersion)},
        {"params", params_json(cfg.params)},
        {"artifacts", artifacts.names},
    };
    if (!summary.is_null()) manifest["summary"] = summary;
    std::ofstream out(artifacts.dir / "manifest.json", std::ios::binary);
    out << manifest.dump(2) << "\n";
}

Eigen::VectorXd zgrid_values(const ZGrid& zg) {
    Eigen::VectorXd z(zg.steps);
    for (int i = 0; i < zg.steps; ++i) z(i) = zg.z_at(i);
    return z;
}

double default_width(const std::string& figure, const Params& p) {
    if (p.disorder_width >= 0.0) return p.disorder_width;
    return figure == "fig6" ? 0.3 : 0.6;
}

EnsembleStats scale_stats(EnsembleStats s, double factor) {
    s.mean *= factor;
    s.stddev *= std::abs(factor);
    s.ci_low = s.mean - s.stddev;
    s.ci_high = s.mean + s.stddev;
    return s;
}

Eigen::Matrix2d site_cov(const GaussianState& st, int site) {
    const Eigen::MatrixXd v = quad_cov(st, {site});
    Eigen::Matrix2d v2;
    v2 << v(0, 0), v(0, 1), v(1, 0), v(1, 1);
    return v2;
}

// Single-realization site-0 Wigner field under single-mode injection, in the
// rotated frame.
WignerField site_wigner(const Params& p, LatticeKind kind, DisorderKind dkind,
                        double width, std::uint64_t seed, double z) {
    const LatticeSpec spec = p.spec(kind);
    const double kappa = analytic_edge_mode(spec).kappa;
    const GaussianState s0 = inject_single_mode(vacuum(spec.sites), 0, p.xi());
    const Eigensystem es =
        diagonalize(realization_hamiltonian(spec, dkind, width, seed));
    const GaussianState st = rotate_frame(evolve(s0, propagator(es, z)), kappa * z);
    return wigner_gaussian(site_cov(st, 0), p.grid());
}

// Per-realization site-0 covariances at a set of distances: trace layout
// [v_qq(z0), v_qp(z0), v_pp(z0), v_qq(z1), ...].
Eigen::MatrixXd site_cov_traces(const Params& p, LatticeKind kind, DisorderKind dkind,
                                double width, const EnsemblePlan& plan,
                                const std::vector<double>& zs) {
    const LatticeSpec spec = p.spec(kind);
    const double kappa = analytic_edge_mode(spec).kappa;
    const GaussianState s0 = inject_single_mode(vacuum(spec.sites), 0, p.xi());

    const auto experiment = [&, spec](std::uint64_t seed) {
        const Eigensystem es =
            diagonalize(realization_hamiltonian(spec, dkind, width, seed));
        Eigen::VectorXd t(3 * zs.size());
        for (std::size_t i = 0; i < zs.size(); ++i) {
            const GaussianState st =
                rotate_frame(evolve(s0, propagator(es, zs[i])), kappa * zs[i]);
            const Eigen::Matrix2d v = site_cov(st, 0);
            t(3 * i) = v(0, 0);
            t(3 * i + 1) = v(0, 1);
            t(3 * i + 2) = v(1, 1);
        }
        return t;
    };
    return collect_traces(plan, experiment, p.workers);
}

WignerField mean_wigner_from_covs(const Eigen::MatrixXd& traces, int offset,
                                  const PhaseGrid& grid) {
    Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(grid.resolution, grid.resolution);
    for (Eigen::Index r = 0; r < traces.rows(); ++r) {
        Eigen::Matrix2d v;
        v << traces(r, offset), traces(r, offset + 1), traces(r, offset + 1),
            traces(r, offset + 2);
        sum += wigner_gaussian(v, grid).values;
    }
    sum /= static_cast<double>(traces.rows());
    return WignerField{grid, std::move(sum)};
}

// ---------------------------------------------------------------------------
// Figure pipelines

void run_fig2(const RunConfig& cfg, ArtifactSet& artifacts) {
    const Params& p = cfg.params;
    const Eigen::VectorXd widths =
        (Eigen::VectorXd(6) << 0.0, 0.2, 0.4, 0.6, 0.8, 1.0).finished();

    for (const DisorderKind dkind : {DisorderKind::Hopping, DisorderKind::Onsite}) {
        std::vector<StatsColumn> columns;
        for (const LatticeKind kind : {LatticeKind::SSH, LatticeKind::Impurity}) {
            const LatticeSpec spec = p.spec(kind);
            const int single_site = kind == LatticeKind::SSH ? 2 : 1;
            const int pair_site = kind == LatticeKind::SSH ? 4 : 2;

            Eigen::MatrixXd mean(widths.size(), 3), stddev(widths.size(), 3),
                lo(widths.size(), 3), hi(widths.size(), 3);
            int n_real = 0;
            for (Eigen::Index wi = 0; wi < widths.size(); ++wi) {
                const EnsemblePlan plan{
                    50, 6, mix_seed(case_master(p.master_seed, kind, dkind),
                                    static_cast<std::uint64_t>(wi))};
                const auto experiment = [&](std::uint64_t seed) {
                    const EdgeMode mode = edge_mode(
                        realization_hamiltonian(spec, dkind, widths(wi), seed));
                    Eigen::VectorXd t(3);
                    t(0) = analytic_eigenmode_squeezing(mode.coeffs, p.xi(), 0);
                    t(1) = analytic_eigenmode_squeezing(mode.coeffs, p.xi(), single_site);
                    t(2) = analytic_eigenmode_squeezing(mode.coeffs, p.xi(), 0, pair_site);
                    return t;
                };
                const EnsembleStats stats = run_ensemble(plan, experiment, p.workers);
                mean.row(wi) = stats.mean;
                stddev.row(wi) = stats.stddev;
                lo.row(wi) = stats.ci_low;
                hi.row(wi) = stats.ci_high;
                n_real = stats.n;
            }

            const std::string names[3] = {
                std::string("s0_") + kind_name(kind),
                "s" + std::to_string(single_site) + "_" + kind_name(kind),
                "s0" + std::to_string(pair_site) + "_" + kind_name(kind)};
            for (int k = 0; k < 3; ++k) {
                EnsembleStats s;
                s.mean = mean.col(k);
                s.stddev = stddev.col(k);
                s.ci_low = lo.col(k);
                s.ci_high = hi.col(k);
                s.n = n_real;
                columns.push_back({names[k], std::move(s)});
            }
        }
        write_stats_csv(
            artifacts.file(std::string("fig2_") + disorder_name(dkind) + ".csv"), "d",
            widths, columns);
    }
}

void run_fig3(const RunConfig& cfg, ArtifactSet& artifacts) {
    const Params& p = cfg.params;
    const double width = default_width(cfg.figure, p);
    const ZGrid zg = p.zgrid();
    const double sh2 = std::sinh(p.xi_r) * std::sinh(p.xi_r);
    const double norm = sh2 > 0.0 ? sh2 : 1.0;

    for (const LatticeKind kind : {LatticeKind::SSH, LatticeKind::Impurity}) {
        const LatticeSpec spec = p.spec(kind);
        const GaussianState s0 = inject_single_mode(vacuum(spec.sites), 0, p.xi());

        struct Row {
            std::string name;
            DisorderKind dkind;
            double width;
            EnsemblePlan plan;
        };
        const Row rows[3] = {
            {"pristine", DisorderKind::Hopping, 0.0, EnsemblePlan{1, 1, 0}},
            {"hopping", DisorderKind::Hopping, width,
             EnsemblePlan{50, 6, case_master(p.master_seed, kind, DisorderKind::Hopping)}},
            {"onsite", DisorderKind::Onsite, width,
             EnsemblePlan{50, 6, case_master(p.master_seed, kind, DisorderKind::Onsite)}},
        };

        for (const Row& row : rows) {
            const auto experiment = [&, spec](std::uint64_t seed) {
                const Eigensystem es = diagonalize(
                    realization_hamiltonian(spec, row.dkind, row.width, seed));
                Eigen::VectorXd t(zg.steps * spec.sites);
                for (int i = 0; i < zg.steps; ++i) {
                    const GaussianState st = evolve(s0, propagator(es, zg.z_at(i)));
                    for (int n = 0; n < spec.sites; ++n)
                        t(i * spec.sites + n) = photon_number(st, n) / norm;
                }
                return t;
            };
            const EnsembleStats stats = run_ensemble(row.plan, experiment, p.workers);

            Eigen::MatrixXd table(zg.steps, 1 + spec.sites);
            table.col(0) = zgrid_values(zg);
            for (int i = 0; i < zg.steps; ++i)
                table.row(i).tail(spec.sites) =
                    stats.mean.segment(i * spec.sites, spec.sites);
            std::vector<std::string> header{"z"};
            for (int n = 0; n < spec.sites; ++n)
                header.push_back("site_" + std::to_string(n));
            write_table_csv(artifacts.file(std::string("fig3_") + kind_name(kind) +
                                           "_" + row.name + ".csv"),
                            header, table);
        }

        // Streamed per-z diagnostics for the pristine lattice: photon numbers,
        // optimal squeezing, and optimal phase per site.
        const Eigensystem es = diagonalize(build_hamiltonian(spec));
        const double kappa = analytic_edge_mode(spec).kappa;
        Eigen::MatrixXd sweep(zg.steps, 1 + 3 * spec.sites);
        std::vector<std::string> header{"z"};
        for (int n = 0; n < spec.sites; ++n)
            header.push_back("photon_" + std::to_string(n));
        for (int n = 0; n < spec.sites; ++n)
            header.push_back("max_db_" + std::to_string(n));
        for (int n = 0; n < spec.sites; ++n)
            header.push_back("phi_star_" + std::to_string(n));
        for (int i = 0; i < zg.steps; ++i) {
            const double z = zg.z_at(i);
            const GaussianState st =
                rotate_frame(evolve(s0, propagator(es, z)), kappa * z);
            sweep(i, 0) = z;
            for (int n = 0; n < spec.sites; ++n) {
                const MaxSqueezing ms = max_squeezing_db(st, n);
                sweep(i, 1 + n) = photon_number(st, n);
                sweep(i, 1 + spec.sites + n) = ms.db;
                sweep(i, 1 + 2 * spec.sites + n) = ms.phi_star;
            }
        }
        write_table_csv(artifacts.file(std::string("fig3_sweep_") + kind_name(kind) +
                                       "_pristine.csv"),
                        header, sweep);
    }
}

void write_quadrature_stats(ArtifactSet& artifacts, const std::string& name,
                            const Eigen::VectorXd& z, const QuadraturePhaseStats& s) {
    write_stats_csv(artifacts.file(name), "z", z,
                    {{"max_db", s.max_db}, {"x1_db", s.x1_db}, {"x2_db", s.x2_db}});
}

void run_fig4(const RunConfig& cfg, ArtifactSet& artifacts) {
    const Params& p = cfg.params;
    const double width = default_width(cfg.figure, p);
    const Eigen::VectorXd z = zgrid_values(p.zgrid());

    for (const LatticeKind kind : {LatticeKind::SSH, LatticeKind::Impurity}) {
        write_quadrature_stats(
            artifacts, std::string("fig4a_") + kind_name(kind) + "_pristine.csv", z,
            quadrature_sweep_statistics(p, kind, DisorderKind::Hopping, 0.0,
                                        EnsemblePlan{1, 1, 0}));
        for (const DisorderKind dkind : {DisorderKind::Hopping, DisorderKind::Onsite}) {
            const EnsemblePlan plan{50, 6, case_master(p.master_seed, kind, dkind)};
            write_quadrature_stats(artifacts,
                                   std::string("fig4a_") + kind_name(kind) + "_" +
                                       disorder_name(dkind) + ".csv",
                                   z, quadrature_sweep_statistics(p, kind, dkind, width, plan));
        }
    }

    // Wigner panels: the injected state and hopping-disordered endpoints.
    const GaussianState input = inject_single_mode(vacuum(p.sites), 0, p.xi());
    write_wigner_csv(artifacts.file("fig4_w_input.csv"),
                     wigner_gaussian(site_cov(input, 0), p.grid()));

    for (const LatticeKind kind : {LatticeKind::SSH, LatticeKind::Impurity}) {
        const EnsemblePlan plan{50, 6,
                                case_master(p.master_seed, kind, DisorderKind::Hopping)};
        const int n_single = kind == LatticeKind::SSH ? 1 : 2;
        for (int r = 0; r < n_single; ++r) {
            const std::uint64_t seed = realization_seed(plan.master_seed, 0, r);
            write_wigner_csv(
                artifacts.file(std::string("fig4_w_") + kind_name(kind) +
                               "_hopping_realization" + std::to_string(r) + ".csv"),
                site_wigner(p, kind, DisorderKind::Hopping, width, seed, p.z_max));
        }
        const Eigen::MatrixXd covs =
            site_cov_traces(p, kind, DisorderKind::Hopping, width, plan, {p.z_max});
        write_wigner_csv(artifacts.file(std::string("fig4_w_") + kind_name(kind) +
                                        "_hopping_mean.csv"),
                         mean_wigner_from_covs(covs, 0, p.grid()));
    }
}

// Two-lattice sweep statistics: joint edge-pair squeezing and entanglement.
struct TwoLatticeStats {
    EnsembleStats max_db, x1_db, x2_db, ent, ent_norm;
};

TwoLatticeStats two_lattice_statistics(const Params& p, LatticeKind kind,
                                       DisorderKind dkind, double width,
                                       const EnsemblePlan& plan) {
    const LatticeSpec spec = p.spec(kind);
    const double kappa = analytic_edge_mode(spec).kappa;
    const ZGrid zg = p.zgrid();
    const int b0 = spec.sites;

    const auto experiment = [&, spec](std::uint64_t seed) {
        const Hamiltonian ha =
            realization_hamiltonian(spec, dkind, width, mix_seed(seed, kArmA));
        const Hamiltonian hb =
            realization_hamiltonian(spec, dkind, width, mix_seed(seed, kArmB));
        const Eigensystem esa = diagonalize(ha), esb = diagonalize(hb);
        const GaussianState s0 = inject_two_mode(vacuum(2 * spec.sites), 0, b0, p.xi());

        Eigen::VectorXd t(4 * zg.steps);
        for (int i = 0; i < zg.steps; ++i) {
            const double z = zg.z_at(i);
            const GaussianState st = rotate_frame(
                evolve_two_lattices(s0, propagator(esa, z), propagator(esb, z)),
                kappa * z);
            t(i) = max_two_mode_squeezing_db(st, 0, b0).db;
            t(zg.steps + i) = two_mode_variance(st, 0, b0, 0.0);
            t(2 * zg.steps + i) = two_mode_variance(st, 0, b0, kPi / 2.0);
            t(3 * zg.steps + i) =
                entanglement_min_eig(Eigen::Matrix4d(quad_cov(st, {0, b0})));
        }
        return t;
    };

    const Eigen::MatrixXd traces = collect_traces(plan, experiment, p.workers);
    const int L = zg.steps;
    TwoLatticeStats out;
    out.max_db = reduce_traces(traces.leftCols(L), plan.sextets, plan.group_size);
    out.x1_db = reduce_variance_traces_db(traces.middleCols(L, L), plan.sextets,
                                          plan.group_size);
    out.x2_db = reduce_variance_traces_db(traces.middleCols(2 * L, L), plan.sextets,
                                          plan.group_size);
    out.ent = reduce_traces(traces.rightCols(L), plan.sextets, plan.group_size);
    const double bound = std::abs((std::exp(-2.0 * p.xi_r) - 1.0) / 4.0);
    out.ent_norm = scale_stats(out.ent, 1.0 / bound);
    return out;
}

void write_two_lattice_stats(ArtifactSet& artifacts, const std::string& name,
                             const Eigen::VectorXd& z, const TwoLatticeStats& s) {
    write_stats_csv(artifacts.file(name), "z", z,
                    {{"twomode_max_db", s.max_db},
                     {"twomode_x1_db", s.x1_db},
                     {"twomode_x2_db", s.x2_db},
                     {"ent_min_eig", s.ent},
                     {"ent_normalized", s.ent_norm}});
}

void run_fig5(const RunConfig& cfg, ArtifactSet& artifacts) {
    const Params& p = cfg.params;
    const double width = default_width(cfg.figure, p);
    const Eigen::VectorXd z = zgrid_values(p.zgrid());

    for (const LatticeKind kind : {LatticeKind::SSH, LatticeKind::Impurity}) {
        write_two_lattice_stats(
            artifacts, std::string("fig5_") + kind_name(kind) + "_pristine.csv", z,
            two_lattice_statistics(p, kind, DisorderKind::Hopping, 0.0,
                                   EnsemblePlan{1, 1, 0}));
        for (const DisorderKind dkind : {DisorderKind::Hopping, DisorderKind::Onsite}) {
            const EnsemblePlan plan{50, 6, case_master(p.master_seed, kind, dkind)};
            write_two_lattice_stats(artifacts,
                                    std::string("fig5_") + kind_name(kind) + "_" +
                                        disorder_name(dkind) + ".csv",
                                    z, two_lattice_statistics(p, kind, dkind, width, plan));
        }
    }
}

void run_fig6(const RunConfig& cfg, ArtifactSet& artifacts) {
    const Params& p = cfg.params;
    const double width = default_width(cfg.figure, p);
    constexpr int kRealizations = 300;

    write_wigner_csv(artifacts.file("fig6_w_input.csv"), wigner_fock1(p.grid()));

    nlohmann::json fidelity, peak, wmin, nreal;
    const struct {
        const char* key;
        LatticeKind kind;
        double width;
    } cases[4] = {
        {"pristine_topo", LatticeKind::SSH, 0.0},
        {"pristine_triv", LatticeKind::Impurity, 0.0},
        {"disordered_topo", LatticeKind::SSH, width},
        {"disordered_triv", LatticeKind::Impurity, width},
    };
    for (const auto& c : cases) {
        const TeleportEnsembleResult r =
            teleport_ensemble(p, c.kind, c.width, kRealizations);
        write_wigner_csv(artifacts.file(std::string("fig6_w_") + c.key + ".csv"),
                         r.w_out_mean);
        fidelity[c.key] = r.fidelity_mean;
        peak[c.key] = r.peak_reduction_mean;
        wmin[c.key] = r.w_out_min;
        nreal[c.key] = r.realizations;
    }

    const nlohmann::json summary{{"fidelity", fidelity},
                                 {"peak_reduction", peak},
                                 {"w_out_min", wmin},
                                 {"realizations", nreal}};
    std::ofstream out(artifacts.file("fig6_summary.json"), std::ios::binary);
    out << summary.dump(2) << "\n";
    write_manifest(cfg, artifacts, summary);
}

// Appendix sweeps: per-site max squeezing (fig7) and per-pair max two-mode
// squeezing (fig8) under single-mode injection at waveguide 0.
void run_fig78(const RunConfig& cfg, ArtifactSet& artifacts, bool pairs) {
    const Params& p = cfg.params;
    const double width = default_width(cfg.figure, p);
    const ZGrid zg = p.zgrid();
    const Eigen::VectorXd z = zgrid_values(zg);

    for (const LatticeKind kind : {LatticeKind::SSH, LatticeKind::Impurity}) {
        const LatticeSpec spec = p.spec(kind);
        const double kappa = analytic_edge_mode(spec).kappa;
        const GaussianState s0 = inject_single_mode(vacuum(spec.sites), 0, p.xi());
        const std::vector<int> sites = kind == LatticeKind::SSH
                                           ? std::vector<int>{1, 2, 4}
                                           : std::vector<int>{1, 2};
        const int k = static_cast<int>(sites.size());

        const auto experiment_for = [&](DisorderKind dkind, double w) {
            return [&, dkind, w, spec](std::uint64_t seed) {
                const Eigensystem es =
                    diagonalize(realization_hamiltonian(spec, dkind, w, seed));
                Eigen::VectorXd t(k * zg.steps);
                for (int i = 0; i < zg.steps; ++i) {
                    const double zi = zg.z_at(i);
                    const GaussianState st =
                        rotate_frame(evolve(s0, propagator(es, zi)), kappa * zi);
                    for (int s = 0; s < k; ++s)
                        t(s * zg.steps + i) =
                            pairs ? max_two_mode_squeezing_db(st, 0, sites[s]).db
                                  : max_squeezing_db(st, sites[s]).db;
                }
                return t;
            };
        };

        struct Row {
            std::string name;
            DisorderKind dkind;
            double width;
            EnsemblePlan plan;
        };
        const Row rows[3] = {
            {"pristine", DisorderKind::Hopping, 0.0, EnsemblePlan{1, 1, 0}},
            {"hopping", DisorderKind::Hopping, width,
             EnsemblePlan{50, 6, case_master(p.master_seed, kind, DisorderKind::Hopping)}},
            {"onsite", DisorderKind::Onsite, width,
             EnsemblePlan{50, 6, case_master(p.master_seed, kind, DisorderKind::Onsite)}},
        };
        for (const Row& row : rows) {
            const Eigen::MatrixXd traces =
                collect_traces(row.plan, experiment_for(row.dkind, row.width), p.workers);
            std::vector<StatsColumn> columns;
            for (int s = 0; s < k; ++s) {
                const std::string name = pairs
                                             ? "pair_0_" + std::to_string(sites[s])
                                             : "site_" + std::to_string(sites[s]);
                columns.push_back({name, reduce_traces(traces.middleCols(s * zg.steps,
                                                                         zg.steps),
                                                       row.plan.sextets,
                                                       row.plan.group_size)});
            }
            write_stats_csv(artifacts.file(cfg.figure + "_" + kind_name(kind) + "_" +
                                           row.name + ".csv"),
                            "z", z, columns);
        }
    }
}

void run_fig9(const RunConfig& cfg, ArtifactSet& artifacts) {
    const Params& p = cfg.params;
    const double width = default_width(cfg.figure, p);
    const Eigen::VectorXd z = zgrid_values(p.zgrid());

    std::vector<StatsColumn> onemode, twomode, ent;
    for (const LatticeKind kind : {LatticeKind::SSH, LatticeKind::Impurity}) {
        for (const DisorderKind dkind : {DisorderKind::Hopping, DisorderKind::Onsite}) {
            const std::string tag =
                std::string(kind_name(kind)) + "_" + disorder_name(dkind);
            const EnsemblePlan plan{50, 6, case_master(p.master_seed, kind, dkind)};
            onemode.push_back(
                {"onemode_max_db_" + tag,
                 quadrature_sweep_statistics(p, kind, dkind, width, plan).max_db});
            const TwoLatticeStats tl = two_lattice_statistics(p, kind, dkind, width, plan);
            twomode.push_back({"twomode_max_db_" + tag, tl.max_db});
            ent.push_back({"ent_normalized_" + tag, tl.ent_norm});
        }
    }
    write_stats_csv(artifacts.file("fig9_onemode_max.csv"), "z", z, onemode);
    write_stats_csv(artifacts.file("fig9_twomode_max.csv"), "z", z, twomode);
    write_stats_csv(artifacts.file("fig9_entanglement.csv"), "z", z, ent);
}

void run_movie1(const RunConfig& cfg, ArtifactSet& artifacts) {
    const Params& p = cfg.params;
    const double width = default_width(cfg.figure, p);
    if (p.frames < 2) throw std::invalid_argument("movie1: needs at least 2 frames");

    std::vector<double> zs(p.frames);
    for (int f = 0; f < p.frames; ++f)
        zs[f] = p.z_max * static_cast<double>(f) / (p.frames - 1);

    char buf[32];
    for (const LatticeKind kind : {LatticeKind::SSH, LatticeKind::Impurity}) {
        struct Row {
            std::string name;
            DisorderKind dkind;
            double width;
            EnsemblePlan plan;
        };
        const Row rows[3] = {
            {"pristine", DisorderKind::Hopping, 0.0, EnsemblePlan{1, 1, 0}},
            {"hopping", DisorderKind::Hopping, width,
             EnsemblePlan{50, 6, case_master(p.master_seed, kind, DisorderKind::Hopping)}},
            {"onsite", DisorderKind::Onsite, width,
             EnsemblePlan{50, 6, case_master(p.master_seed, kind, DisorderKind::Onsite)}},
        };
        for (const Row& row : rows) {
            const Eigen::MatrixXd covs =
                site_cov_traces(p, kind, row.dkind, row.width, row.plan, zs);
            std::vector<std::filesystem::path> paths(p.frames);
            for (int f = 0; f < p.frames; ++f) {
                std::snprintf(buf, sizeof(buf), "_f%03d.csv", f);
                paths[f] = artifacts.file(std::string("movie1_") + kind_name(kind) +
                                          "_" + row.name + buf);
            }
            // Frames are independent; each worker owns whole frames.
            parallel_for(p.frames, p.workers, [&](int f) {
                write_wigner_csv(paths[f], mean_wigner_from_covs(covs, 3 * f, p.grid()));
            });
        }
    }
}

} // namespace

int run_experiment(const RunConfig& cfg) {
    ArtifactSet artifacts{cfg.out_dir / cfg.figure, {}};
    std::filesystem::create_directories(artifacts.dir);

    if (cfg.figure == "fig2") run_fig2(cfg, artifacts);
    else if (cfg.figure == "fig3") run_fig3(cfg, artifacts);
    else if (cfg.figure == "fig4") run_fig4(cfg, artifacts);
    else if (cfg.figure == "fig5") run_fig5(cfg, artifacts);
    else if (cfg.figure == "fig6") {
        run_fig6(cfg, artifacts);  // writes its own manifest with the summary
        std::cout << "wrote " << artifacts.names.size() + 1 << " artifacts to "
                  << artifacts.dir.string() << "\n";
        return 0;
    } else if (cfg.figure == "fig7") run_fig78(cfg, artifacts, false);
    else if (cfg.figure == "fig8") run_fig78(cfg, artifacts, true);
    else if (cfg.figure == "fig9") run_fig9(cfg, artifacts);
    else if (cfg.figure == "movie1") run_movie1(cfg, artifacts);
    else
        throw std::invalid_argument(
            "unknown figure '" + cfg.figure +
            "'; expected one of fig2..fig9, movie1");

    write_manifest(cfg, artifacts);
    std::cout << "wrote " << artifacts.names.size() + 1 << " artifacts to "
              << artifacts.dir.string() << "\n";
    return 0;
}

// ---------------------------------------------------------------------------
// Fast self-check battery

namespace {

struct Validator {
    std::ostream& out;
    int failures = 0;

    void check(const std::string& name, bool ok, const std::string& detail) {
        out << (ok ? "PASS" : "FAIL") << "  " << name << ": " << detail << "\n";
        if (!ok) ++failures;
    }
};

// Closed-form Gaussian smoothing of the one-photon Wigner function with noise
// covariance kcov; used as the independent reference for the spectral path.
WignerField smeared_fock1_closed_form(const Eigen::Matrix2d& kcov, const PhaseGrid& grid) {
    const Eigen::Matrix2d sigma = kcov + 0.25 * Eigen::Matrix2d::Identity();
    const Eigen::Matrix2d inv = sigma.inverse();
    const Eigen::Matrix2d inv2 = inv * inv;
    const double norm = 1.0 / (2.0 * kPi * std::sqrt(sigma.determinant()));
    const double tr_inv = inv.trace();

    WignerField f{grid, Eigen::MatrixXd(grid.resolution, grid.resolution)};
    for (int iq = 0; iq < grid.resolution; ++iq) {
        for (int ip = 0; ip < grid.resolution; ++ip) {
            const Eigen::Vector2d x(grid.coord(iq), grid.coord(ip));
            const double g = norm * std::exp(-0.5 * x.dot(inv * x));
            f.values(iq, ip) = g * (1.0 - 0.25 * (tr_inv - x.dot(inv2 * x)));
        }
    }
    return f;
}

double field_rms(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    return std::sqrt((a - b).squaredNorm() / static_cast<double>(a.size()));
}

} // namespace

int run_validate(std::ostream& out) {
    Validator v{out};
    const Params p;

    // 1. Correlation-matrix squeezing agrees with the closed forms for the
    //    squeezed collective mode, across random parameters.
    {
        std::mt19937_64 eng(2024);
        double max_err = 0.0;
        for (int trial = 0; trial < 20; ++trial) {
            const double alpha = 0.1 + 0.6 * uniform01(eng);
            const SqueezeParam xi{0.1 + 1.4 * uniform01(eng), 0.0};
            for (const LatticeKind kind : {LatticeKind::SSH, LatticeKind::Impurity}) {
                LatticeSpec spec = p.spec(kind);
                spec.alpha = alpha;
                const EdgeMode mode = analytic_edge_mode(spec);
                const GaussianState st = inject_collective(mode, xi);
                for (int n = 0; n < spec.sites; ++n) {
                    const double got = max_squeezing_db(st, n).db;
                    const double want = analytic_eigenmode_squeezing(mode.coeffs, xi, n);
                    max_err = std::max(max_err, std::abs(got - want));
                }
                const double got2 = max_two_mode_squeezing_db(st, 0, 2).db;
                const double want2 = analytic_eigenmode_squeezing(mode.coeffs, xi, 0, 2);
                max_err = std::max(max_err, std::abs(got2 - want2));
            }
        }
        v.check("eigenmode squeezing equivalence", max_err < 1e-10,
                "max error " + format_double(max_err) + " dB");
    }

    // 2. Reference squeezing values of the default configuration.
    {
        const EdgeMode topo = analytic_edge_mode(p.spec(LatticeKind::SSH));
        const double s0 = analytic_eigenmode_squeezing(topo.coeffs, p.xi(), 0);
        const double s2 = analytic_eigenmode_squeezing(topo.coeffs, p.xi(), 2);
        const double s04 = analytic_eigenmode_squeezing(topo.coeffs, p.xi(), 0, 4);
        const double s02 = analytic_eigenmode_squeezing(topo.coeffs, p.xi(), 0, 2);
        const bool ok = std::abs(s0 - (-6.19)) < 5e-3 && std::abs(s2 - (-0.31)) < 5e-3 &&
                        std::abs(s04 - (-2.61)) < 5e-3 && std::abs(s02 - (-0.89)) < 5e-3;
        v.check("reference squeezing values", ok,
                "S0=" + format_double(s0) + " S2=" + format_double(s2) +
                    " S04=" + format_double(s04) + " S02=" + format_double(s02));
    }

    // 3. Entanglement bound of the two-mode squeezed injection.
    {
        const double want = (std::exp(-1.8) - 1.0) / 4.0;
        const GaussianState s = inject_two_mode(vacuum(2), 0, 1, p.xi());
        const double got = entanglement_min_eig(Eigen::Matrix4d(quad_cov(s, {0, 1})));
        double theta_dev = 0.0;
        for (const double theta : {0.7, 2.1, 4.4}) {
            const GaussianState st =
                inject_two_mode(vacuum(2), 0, 1, SqueezeParam{p.xi_r, theta});
            theta_dev = std::max(
                theta_dev,
                std::abs(entanglement_min_eig(Eigen::Matrix4d(quad_cov(st, {0, 1}))) -
                         got));
        }
        v.check("entanglement bound", std::abs(got - want) < 1e-9 && theta_dev < 1e-10,
                "min eig " + format_double(got) + ", phase spread " +
                    format_double(theta_dev));
    }

    // 4. Evolution sanity on a disordered lattice.
    {
        const LatticeSpec spec = p.spec(LatticeKind::SSH);
        const Hamiltonian h = apply_disorder(build_hamiltonian(spec),
                                             DisorderConfig{DisorderKind::Hopping, 0.6, 7});
        const Propagator u = propagator(h, 3.3);
        const double unitarity =
            (u.umat.adjoint() * u.umat - Eigen::MatrixXcd::Identity(spec.sites, spec.sites))
                .cwiseAbs()
                .maxCoeff();
        const GaussianState s0 = inject_collective(edge_mode(h), p.xi());
        const GaussianState st = evolve(s0, u);
        const double dn =
            std::abs(total_photon_number(st) - total_photon_number(s0)) /
            total_photon_number(s0);
        const double phys = physicality_min_eig(st);
        const Eigen::VectorXd nus = symplectic_eigenvalues(full_quad_cov(st));
        const double purity_dev = (nus.array() - 0.25).abs().maxCoeff();
        const bool ok = unitarity < 1e-10 && dn < 1e-10 && phys > -1e-10 &&
                        purity_dev < 1e-9;
        v.check("evolution sanity", ok,
                "unitarity " + format_double(unitarity) + ", photon drift " +
                    format_double(dn) + ", physicality " + format_double(phys) +
                    ", purity dev " + format_double(purity_dev));
    }

    // 5. Teleportation kernel closed form and the spectral convolution against
    //    the analytic smoothing of the one-photon state.
    {
        const TeleportResource res = tmsv_resource(p.xi());
        const TeleportKernel k = kernel_from_resource(res);
        const double want = std::exp(-2.0 * p.xi_r) / 2.0;
        const double kernel_err =
            std::max({std::abs(k.cov(0, 0) - want), std::abs(k.cov(1, 1) - want),
                      std::abs(k.cov(0, 1))});

        const PhaseGrid grid = p.grid();
        const WignerField win = wigner_fock1(grid);
        const WignerField fast = convolve_gaussian(win, k.cov);
        const WignerField closed = smeared_fock1_closed_form(k.cov, grid);
        const double rms = field_rms(fast.values, closed.values);
        v.check("teleport kernel closed form", kernel_err < 1e-12 && rms < 1e-9,
                "kernel err " + format_double(kernel_err) + ", smear RMS " +
                    format_double(rms));
    }

    // 6. Teleportation calibration points.
    {
        const PhaseGrid grid = p.grid();
        const WignerField coherent =
            wigner_gaussian(0.25 * Eigen::Matrix2d::Identity(), grid);
        const double f_coh =
            teleport_average(coherent, tmsv_resource(SqueezeParam{0.0, 0.0})).fidelity;
        const double f_strong =
            teleport_average(wigner_fock1(grid), tmsv_resource(SqueezeParam{3.0, 0.0}))
                .fidelity;
        v.check("teleport calibration", std::abs(f_coh - 0.5) < 2e-3 && f_strong > 0.98,
                "coherent F " + format_double(f_coh) + ", strong-squeezing F " +
                    format_double(f_strong));
    }

    // 7. Negative control: a sign slip in the noise-pair assembly must be
    //    caught by the closed-form comparison.
    {
        const TeleportResource res = tmsv_resource(p.xi());
        const Eigen::Matrix4d& m = res.vab;
        Eigen::Matrix2d wrong;
        // EPR pair transcribed with swapped signs: (q_a - q_b, p_a + p_b).
        wrong(0, 0) = m(0, 0) + m(2, 2) - 2.0 * m(0, 2);
        wrong(1, 1) = m(1, 1) + m(3, 3) + 2.0 * m(1, 3);
        wrong(0, 1) = wrong(1, 0) = -(m(0, 3) - m(0, 1) + m(2, 3) - m(1, 2));

        const PhaseGrid grid = p.grid();
        const WignerField win = wigner_fock1(grid);
        const TeleportKernel k = kernel_from_resource(res);
        const WignerField closed = smeared_fock1_closed_form(k.cov, grid);
        const double rms_bad =
            field_rms(convolve_gaussian(win, wrong).values, closed.values);
        v.check("kernel sign sensitivity", rms_bad > 1e-4,
                "corrupted-kernel RMS " + format_double(rms_bad) + " (detected)");
    }

    // 8. Resource extraction at z=0 equals the direct two-mode construction.
    {
        const TeleportResource direct = tmsv_resource(p.xi());
        const TeleportResource viaLattice =
            lattice_resource(p, LatticeKind::SSH, DisorderKind::Hopping, 0.0, 0.0, 0);
        const double err = (direct.vab - viaLattice.vab).cwiseAbs().maxCoeff();
        v.check("resource extraction", err < 1e-12, "max deviation " + format_double(err));
    }

    out << (v.failures == 0 ? "all checks passed\n"
                            : std::to_string(v.failures) + " check(s) failed\n");
    return v.failures;
}

} // namespace sqzlat
