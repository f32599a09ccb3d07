#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "sqzlat/experiments.hpp"

int main(int argc, char** argv) {
    CLI::App app{"squeezed-light waveguide lattice experiments"};
    app.require_subcommand(1);

    std::string figure;
    std::string out_dir = "out";
    if (const char* env = std::getenv("SQZLAT_OUT"); env != nullptr && *env != '\0')
        out_dir = env;
    std::vector<std::string> override_args;
    int workers = 0;
    std::uint64_t seed = 0;
    int frames = 0;

    CLI::App* run = app.add_subcommand("run", "generate one figure's data artifacts");
    run->add_option("figure,--figure", figure,
                    "figure to produce: fig2..fig9 or movie1")
        ->required();
    run->add_option("--out-dir", out_dir,
                    "artifact directory root (default $SQZLAT_OUT or ./out)");
    run->add_option("--workers", workers, "worker threads, 0 = hardware count");
    CLI::Option* seed_opt = run->add_option("--seed", seed, "master seed");
    CLI::Option* frames_opt =
        run->add_option("--frames", frames, "frame count for movie1");
    run->add_option("--override", override_args,
                    "parameter override as key=value, repeatable");

    CLI::App* validate =
        app.add_subcommand("validate", "run the fast self-check battery");

    CLI11_PARSE(app, argc, argv);

    try {
        if (validate->parsed())
            return sqzlat::run_validate(std::cout) == 0 ? 0 : 1;

        std::map<std::string, std::string> overrides;
        for (const std::string& kv : override_args) {
            const std::size_t eq = kv.find('=');
            if (eq == std::string::npos || eq == 0)
                throw std::invalid_argument("override must be key=value, got '" + kv +
                                            "'");
            overrides[kv.substr(0, eq)] = kv.substr(eq + 1);
        }

        sqzlat::RunConfig cfg;
        cfg.figure = figure;
        cfg.out_dir = out_dir;
        cfg.params = sqzlat::apply_overrides(cfg.params, overrides);
        if (seed_opt->count() > 0) cfg.params.master_seed = seed;
        if (frames_opt->count() > 0) cfg.params.frames = frames;
        cfg.params.workers = workers;
        return sqzlat::run_experiment(cfg);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
