// Batch front end: gen, run, sweep, portrait, table1, export-pgm.

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <string>

#include "diffmap/harness.hpp"
#include "diffmap/io.hpp"

using namespace diffmap;

namespace {

// Options shared by run and sweep. Values stay as strings so they can be
// merged over a config file with the same keys.
struct SpecOptions {
    std::string config;
    std::map<std::string, std::string> values;
    std::map<std::string, CLI::Option*> options;

    void attach(CLI::App* app) {
        app->add_option("--config", config, "key=value config file; flags override it");
        const std::pair<const char*, const char*> keys[] = {
            {"instance", "atoms | disk | random"},
            {"grid", "extents, comma separated (e.g. 64,64)"},
            {"atoms", "atom count"},
            {"xi", "clustering length in pixels (0 = white)"},
            {"diameter", "disk diameter for disk instances"},
            {"constraint", "hist | atom | sayre | support"},
            {"sayre-k", "gradient steps per Sayre projection"},
            {"sayre-alpha", "Sayre step size"},
            {"positivity", "1 to add positivity to the support constraint"},
            {"beta", "difference map beta"},
            {"iterations", "iteration budget"},
            {"threshold", "success threshold on e"},
            {"tolerance", "stop once e falls below this"},
            {"settle", "iterations kept after the first success"},
            {"snapshot-every", "snapshot period (0 = none)"},
            {"seeds", "comma separated seed list"},
            {"out", "output directory"},
            {"threads", "worker threads"},
        };
        for (const auto& [key, help] : keys) options[key] = app->add_option(std::string("--") + key, values[key], help);
    }

    ExperimentSpec build() const {
        ExperimentSpec spec;
        std::map<std::string, std::string> kv;
        if (!config.empty()) kv = read_config(config);
        for (const auto& [key, opt] : options)
            if (opt->count()) kv[key] = values.at(key);
        apply_config(spec, kv);
        spec.validate();
        return spec;
    }
};

void write_json(const std::filesystem::path& path, const nlohmann::json& j) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream os(path);
    if (!os) throw Error("cannot write " + path.string());
    os << j.dump(2) << '\n';
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"difference map phase retrieval"};
    app.require_subcommand(1);

    // gen
    auto* gen = app.add_subcommand("gen", "generate a ground-truth object and its Fourier modulus");
    SpecOptions gen_opts;
    gen_opts.attach(gen);
    std::string gen_stem = "object";
    gen->add_option("--name", gen_stem, "file stem inside the output directory");

    // run
    auto* run_cmd = app.add_subcommand("run", "run the difference map on generated instances");
    SpecOptions run_opts;
    run_opts.attach(run_cmd);

    // sweep
    auto* sweep = app.add_subcommand("sweep", "success rate against beta");
    SpecOptions sweep_opts;
    sweep_opts.attach(sweep);
    std::vector<double> betas{-1.0, -0.7, -0.5, -0.3, -0.1, 0.1, 0.3, 0.5, 0.7, 1.0};
    sweep->add_option("--betas", betas, "beta values")->delimiter(',');

    // portrait
    auto* portrait = app.add_subcommand("portrait", "attractor section for fabricated binary-sequence data");
    std::size_t length = 32, ones = 16;
    std::uint64_t seed_a = 1, seed_b = 2;
    PortraitSpec pspec;
    std::string portrait_out = "portrait";
    portrait->add_option("--length", length, "sequence length");
    portrait->add_option("--ones", ones, "number of ones per sequence");
    portrait->add_option("--seed-a", seed_a, "seed of the first sequence");
    portrait->add_option("--seed-b", seed_b, "seed of the second sequence");
    portrait->add_option("--beta", pspec.beta, "difference map beta");
    portrait->add_option("--iterations", pspec.iterations, "iterations");
    portrait->add_option("--window", pspec.window, "half width of the selection window on phases 3 and 4");
    portrait->add_option("--bins", pspec.bins, "occupancy grid size per axis");
    portrait->add_option("--seed", pspec.seed, "start seed");
    portrait->add_option("--out", portrait_out, "output directory");

    // table1
    auto* table1 = app.add_subcommand("table1", "sampled Gaussian widths against the reference table");
    std::string table1_out;
    table1->add_option("--out", table1_out, "CSV path (default: stdout)");

    // export-pgm
    auto* exp = app.add_subcommand("export-pgm", "convert a PGF grid to an 8-bit PGM image");
    std::string pgf_in, pgm_out;
    exp->add_option("input", pgf_in, "PGF file")->required();
    exp->add_option("output", pgm_out, "PGM file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) {
            const ExperimentSpec spec = gen_opts.build();
            for (std::uint64_t seed : spec.seeds) {
                const Instance inst = make_instance(spec.instance, seed);
                const std::string stem = gen_stem + "_" + std::to_string(seed);
                io::write_pgf(spec.output_dir / (stem + ".pgf"), inst.truth);
                ObjectField mod(inst.modulus.grid(),
                                std::vector<double>(inst.modulus.values().begin(), inst.modulus.values().end()));
                io::write_pgf(spec.output_dir / (stem + ".modulus.pgf"), mod);
                nlohmann::json side;
                side["config"] = to_config(spec);
                side["seed"] = seed;
                nlohmann::json atoms = nlohmann::json::array();
                for (const auto& p : inst.placements)
                    atoms.push_back({{"center", p.center}, {"t", p.t}});
                side["placements"] = atoms;
                write_json(spec.output_dir / (stem + ".json"), side);
                std::cout << (spec.output_dir / (stem + ".pgf")).string() << '\n';
            }
        } else if (run_cmd->parsed()) {
            const ExperimentSpec spec = run_opts.build();
            for (const auto& o : run_experiment(spec)) {
                std::cout << "seed " << o.seed << ": " << (o.solved() ? "solved" : "unsolved") << " after "
                          << o.run.iterations << " iterations, e = " << o.run.trace.errors.back()
                          << ", registered distance = " << o.registered_distance << '\n';
                for (const auto& w : o.run.trace.warnings) std::cerr << "warning: " << w << '\n';
            }
        } else if (sweep->parsed()) {
            const ExperimentSpec spec = sweep_opts.build();
            const SweepResult r = sweep_beta(spec, betas);
            r.write_csv(spec.output_dir / "sweep.csv");
            nlohmann::json m;
            m["command"] = "sweep";
            m["config"] = to_config(spec);
            m["betas"] = betas;
            write_json(spec.output_dir / "manifest.json", m);
            for (const auto& p : r.points) std::cout << p.beta << ' ' << p.successes << '/' << p.runs << '\n';
        } else if (portrait->parsed()) {
            const ObjectField a = binary_sequence(length, ones, seed_a);
            const ObjectField b = binary_sequence(length, ones, seed_b);
            const PortraitResult r = attractor_portrait(a, b, pspec);
            const std::filesystem::path dir = portrait_out;
            r.write(dir / "portrait.csv", dir / "portrait.pgm");
            nlohmann::json m;
            m["command"] = "portrait";
            m["length"] = length;
            m["ones"] = ones;
            m["seed_a"] = seed_a;
            m["seed_b"] = seed_b;
            m["beta"] = pspec.beta;
            m["iterations"] = pspec.iterations;
            m["window"] = pspec.window;
            m["bins"] = pspec.bins;
            m["seed"] = pspec.seed;
            m["points"] = r.points.size();
            m["occupied_cells"] = r.occupied_cells();
            write_json(dir / "manifest.json", m);
            for (const auto& w : r.warnings) std::cerr << "warning: " << w << '\n';
            std::cout << r.points.size() << " points, " << r.occupied_cells() << " occupied cells\n";
        } else if (table1->parsed()) {
            const auto rows = table1_report();
            if (table1_out.empty())
                write_table1_csv(std::cout, rows);
            else
                write_table1_csv(std::filesystem::path(table1_out), rows);
        } else if (exp->parsed()) {
            io::write_pgm(pgm_out, io::read_pgf(std::filesystem::path(pgf_in)));
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
