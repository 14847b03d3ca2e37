#include "diffmap/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "diffmap/fft.hpp"
#include "diffmap/io.hpp"
#include "diffmap/registration.hpp"
#include "diffmap/sayre.hpp"

namespace diffmap {

namespace {

constexpr const char* kVersion = "0.1.0";

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

template <class T>
T parse_number(const std::string& key, const std::string& value) {
    std::istringstream is(value);
    T out{};
    is >> out;
    if (!is || !(is >> std::ws).eof()) throw Error("config: bad value for " + key + ": '" + value + "'");
    return out;
}

template <class T>
std::vector<T> parse_list(const std::string& key, const std::string& value) {
    std::vector<T> out;
    std::string item;
    std::istringstream is(value);
    while (std::getline(is, item, ','))
        if (!trim(item).empty()) out.push_back(parse_number<T>(key, trim(item)));
    return out;
}

template <class T>
std::string join(const std::vector<T>& v) {
    std::ostringstream os;
    for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
    return os.str();
}

void parallel_for(std::size_t count, std::size_t threads, const std::function<void(std::size_t)>& body) {
    threads = std::max<std::size_t>(1, std::min(threads, count));
    if (threads == 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(threads);
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t)
        pool.emplace_back([&, t] {
            try {
                for (std::size_t i = next++; i < count; i = next++) body(i);
            } catch (...) {
                errors[t] = std::current_exception();
            }
        });
    for (auto& th : pool) th.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

}  // namespace

std::string to_string(InstanceKind k) {
    switch (k) {
        case InstanceKind::kAtoms: return "atoms";
        case InstanceKind::kRandomDisk: return "disk";
        case InstanceKind::kRandom: return "random";
    }
    return "?";
}

std::string to_string(ConstraintKind k) {
    switch (k) {
        case ConstraintKind::kHistogram: return "hist";
        case ConstraintKind::kAtomicity: return "atom";
        case ConstraintKind::kSayre: return "sayre";
        case ConstraintKind::kSupport: return "support";
    }
    return "?";
}

InstanceKind parse_instance_kind(const std::string& s) {
    if (s == "atoms") return InstanceKind::kAtoms;
    if (s == "disk") return InstanceKind::kRandomDisk;
    if (s == "random") return InstanceKind::kRandom;
    throw Error("unknown instance kind '" + s + "' (atoms, disk, random)");
}

ConstraintKind parse_constraint_kind(const std::string& s) {
    if (s == "hist") return ConstraintKind::kHistogram;
    if (s == "atom") return ConstraintKind::kAtomicity;
    if (s == "sayre") return ConstraintKind::kSayre;
    if (s == "support") return ConstraintKind::kSupport;
    throw Error("unknown constraint '" + s + "' (hist, atom, sayre, support)");
}

Instance make_instance(const InstanceSpec& spec, std::uint64_t seed) {
    const Grid grid(spec.extents);
    Instance inst;
    switch (spec.kind) {
        case InstanceKind::kAtoms: {
            const AtomicityConfig cfg = unit_atomic_config(grid, spec.atoms);
            AtomicObject a = make_atomic_object(grid, cfg, ClusterSpec{spec.xi, seed});
            inst.truth = std::move(a.object);
            inst.placements = std::move(a.placements);
            inst.atoms = spec.atoms;
            inst.support = SupportMask::full(grid);
            break;
        }
        case InstanceKind::kRandomDisk: {
            double diameter = spec.diameter;
            if (diameter <= 0.0) {
                diameter = static_cast<double>(*std::min_element(spec.extents.begin(), spec.extents.end())) / 2.0;
            }
            inst.truth = random_disk(grid, diameter, seed);
            inst.support = SupportMask::disk(grid, diameter);
            break;
        }
        case InstanceKind::kRandom:
            inst.truth = random_object(grid, seed);
            inst.support = SupportMask::full(grid);
            break;
    }
    inst.histogram = histogram_of(inst.truth);
    inst.modulus = modulus_of(inst.truth);
    return inst;
}

ProjectionPair make_projections(const Instance& instance, const ConstraintSpec& spec) {
    const Grid& grid = instance.truth.grid();
    ProjectionPair pair;
    pair.modulus = std::make_shared<ModulusProjector>(instance.modulus);
    switch (spec.kind) {
        case ConstraintKind::kHistogram:
            pair.constraint = std::make_shared<HistogramProjector>(instance.histogram);
            break;
        case ConstraintKind::kAtomicity:
            if (!instance.atoms) throw Error("atomicity constraint needs an atomic instance");
            pair.constraint = std::make_shared<AtomicityProjector>(grid, unit_atomic_config(grid, instance.atoms));
            break;
        case ConstraintKind::kSayre: {
            if (!instance.atoms) throw Error("sayre constraint needs an atomic instance");
            SayreConfig cfg;
            cfg.kernel = std::make_shared<SayreKernel>(grid, standard_template(grid.dims()).sigma());
            cfg.alpha = spec.sayre_alpha;
            cfg.iterations = spec.sayre_iterations;
            cfg.atoms = instance.atoms;
            pair.constraint = std::make_shared<SayreProjector>(cfg, 1.0);
            break;
        }
        case ConstraintKind::kSupport:
            pair.constraint = std::make_shared<SupportProjector>(instance.support, spec.positivity, true);
            break;
    }
    return pair;
}

void ExperimentSpec::validate() const {
    if (seeds.empty()) throw Error("experiment: seed list is empty");
    if (max_iterations < 1) throw Error("experiment: iteration budget must be >= 1");
    if (beta == 0.0 || !std::isfinite(beta)) throw Error("experiment: beta must be nonzero");
    if (instance.extents.empty() || instance.extents.size() > 3) throw Error("experiment: grid must have 1-3 axes");
}

std::map<std::string, std::string> read_config(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw Error("cannot read config " + path.string());
    std::map<std::string, std::string> kv;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw Error(path.string() + ":" + std::to_string(lineno) + ": expected key=value");
        kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    return kv;
}

void apply_config(ExperimentSpec& spec, const std::map<std::string, std::string>& kv) {
    for (const auto& [key, value] : kv) {
        if (key == "instance") spec.instance.kind = parse_instance_kind(value);
        else if (key == "grid") spec.instance.extents = parse_list<std::size_t>(key, value);
        else if (key == "atoms") spec.instance.atoms = parse_number<std::size_t>(key, value);
        else if (key == "xi") spec.instance.xi = parse_number<double>(key, value);
        else if (key == "diameter") spec.instance.diameter = parse_number<double>(key, value);
        else if (key == "constraint") spec.constraint.kind = parse_constraint_kind(value);
        else if (key == "sayre-k") spec.constraint.sayre_iterations = parse_number<std::size_t>(key, value);
        else if (key == "sayre-alpha") spec.constraint.sayre_alpha = parse_number<double>(key, value);
        else if (key == "positivity") spec.constraint.positivity = parse_number<int>(key, value) != 0;
        else if (key == "beta") spec.beta = parse_number<double>(key, value);
        else if (key == "iterations") spec.max_iterations = parse_number<std::size_t>(key, value);
        else if (key == "threshold") spec.success_threshold = parse_number<double>(key, value);
        else if (key == "tolerance") spec.tolerance = parse_number<double>(key, value);
        else if (key == "settle") {
            if (value.empty() || value == "none") spec.settle_iterations.reset();
            else spec.settle_iterations = parse_number<std::size_t>(key, value);
        }
        else if (key == "snapshot-every") spec.snapshot_every = parse_number<std::size_t>(key, value);
        else if (key == "seeds") spec.seeds = parse_list<std::uint64_t>(key, value);
        else if (key == "out") spec.output_dir = value;
        else if (key == "threads") spec.threads = parse_number<std::size_t>(key, value);
        else throw Error("config: unknown key '" + key + "'");
    }
}

std::map<std::string, std::string> to_config(const ExperimentSpec& spec) {
    auto num = [](double v) {
        std::ostringstream os;
        os.precision(17);
        os << v;
        return os.str();
    };
    return {
        {"instance", to_string(spec.instance.kind)},
        {"grid", join(spec.instance.extents)},
        {"atoms", std::to_string(spec.instance.atoms)},
        {"xi", num(spec.instance.xi)},
        {"diameter", num(spec.instance.diameter)},
        {"constraint", to_string(spec.constraint.kind)},
        {"sayre-k", std::to_string(spec.constraint.sayre_iterations)},
        {"sayre-alpha", num(spec.constraint.sayre_alpha)},
        {"positivity", spec.constraint.positivity ? "1" : "0"},
        {"beta", num(spec.beta)},
        {"iterations", std::to_string(spec.max_iterations)},
        {"threshold", num(spec.success_threshold)},
        {"tolerance", num(spec.tolerance)},
        {"settle", spec.settle_iterations ? std::to_string(*spec.settle_iterations) : "none"},
        {"snapshot-every", std::to_string(spec.snapshot_every)},
        {"seeds", join(spec.seeds)},
        {"out", spec.output_dir.string()},
        {"threads", std::to_string(spec.threads)},
    };
}

std::uint64_t start_seed(std::uint64_t seed) { return seed * 0x9E3779B97F4A7C15ULL + 0x632BE59BD9B4E019ULL; }

SeedOutcome run_seed(const ExperimentSpec& spec, std::uint64_t seed) {
    const Instance inst = make_instance(spec.instance, seed);
    DifferenceMapConfig cfg;
    cfg.pair = make_projections(inst, spec.constraint);
    cfg.beta = spec.beta;
    cfg.max_iterations = spec.max_iterations;
    cfg.tolerance = spec.tolerance;
    cfg.success_threshold = spec.success_threshold;
    cfg.settle_iterations = spec.settle_iterations;
    cfg.snapshot_every = spec.snapshot_every;
    cfg.seed = start_seed(seed);

    SeedOutcome out;
    out.seed = seed;
    out.run = run(inst.truth.grid(), cfg);
    out.registered_distance = registered_distance(inst.truth, out.run.solution);
    return out;
}

namespace {

void write_json(const std::filesystem::path& path, const nlohmann::json& j) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream os(path);
    if (!os) throw Error("cannot write " + path.string());
    os << j.dump(2) << '\n';
}

bool is_2d(const Grid& g) { return g.dims() == 2; }

void write_image(const std::filesystem::path& stem, const ObjectField& f) {
    io::write_pgf(stem.string() + ".pgf", f);
    if (is_2d(f.grid())) io::write_pgm(stem.string() + ".pgm", f);
}

}  // namespace

std::vector<SeedOutcome> run_experiment(const ExperimentSpec& spec) {
    spec.validate();
    std::vector<SeedOutcome> outcomes(spec.seeds.size());
    parallel_for(spec.seeds.size(), spec.threads, [&](std::size_t i) {
        SeedOutcome o = run_seed(spec, spec.seeds[i]);
        const auto dir = spec.output_dir / ("seed_" + std::to_string(o.seed));
        std::filesystem::create_directories(dir);
        o.run.trace.write_csv(dir / "trace.csv");
        for (const auto& [k, snap] : o.run.trace.snapshots) write_image(dir / ("iter_" + std::to_string(k)), snap);
        write_image(dir / "solution", o.run.solution);

        const auto& errs = o.run.trace.errors;
        nlohmann::json s;
        s["seed"] = o.seed;
        s["success"] = o.solved();
        s["converged"] = o.run.success;
        s["iterations"] = o.run.iterations;
        s["first_success"] =
            o.run.trace.first_success ? nlohmann::json(*o.run.trace.first_success) : nlohmann::json(nullptr);
        s["final_error"] = errs.empty() ? 0.0 : errs.back();
        s["min_error"] = errs.empty() ? 0.0 : *std::min_element(errs.begin(), errs.end());
        s["success_threshold"] = spec.success_threshold;
        s["registered_distance"] = o.registered_distance;
        s["wall_ms"] = o.run.trace.wall_ms.empty() ? 0.0 : o.run.trace.wall_ms.back();
        s["warnings"] = o.run.trace.warnings;
        write_json(dir / "summary.json", s);
        outcomes[i] = std::move(o);
    });

    nlohmann::json m;
    m["version"] = kVersion;
    m["command"] = "run";
    m["config"] = to_config(spec);
    m["seeds"] = spec.seeds;
    std::size_t solved = 0;
    for (const auto& o : outcomes) solved += o.solved() ? 1 : 0;
    m["solved"] = solved;
    write_json(spec.output_dir / "manifest.json", m);
    return outcomes;
}

void SweepResult::write_csv(const std::filesystem::path& path) const {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream os(path);
    if (!os) throw Error("cannot write " + path.string());
    os << "beta,runs,successes,fraction,iterations_to_success\n";
    for (const auto& p : points) {
        os << p.beta << ',' << p.runs << ',' << p.successes << ',' << p.fraction() << ',';
        for (std::size_t i = 0; i < p.iterations_to_success.size(); ++i) {
            if (i) os << ';';
            if (p.iterations_to_success[i]) os << *p.iterations_to_success[i];
            else os << '-';
        }
        os << '\n';
    }
}

SweepResult sweep_beta(const ExperimentSpec& spec, const std::vector<double>& betas) {
    spec.validate();
    if (betas.empty()) throw Error("sweep: beta list is empty");
    for (double b : betas)
        if (b == 0.0 || !std::isfinite(b)) throw Error("sweep: beta must be nonzero");
    const std::size_t n_seeds = spec.seeds.size();
    std::vector<std::optional<std::size_t>> first(betas.size() * n_seeds);
    parallel_for(first.size(), spec.threads, [&](std::size_t task) {
        ExperimentSpec s = spec;
        s.beta = betas[task / n_seeds];
        s.snapshot_every = 0;
        // the success statistic only needs the first crossing
        s.settle_iterations = 0;
        first[task] = run_seed(s, spec.seeds[task % n_seeds]).run.trace.first_success;
    });
    SweepResult result;
    for (std::size_t b = 0; b < betas.size(); ++b) {
        SweepPoint p;
        p.beta = betas[b];
        p.runs = n_seeds;
        for (std::size_t s = 0; s < n_seeds; ++s) {
            const auto& f = first[b * n_seeds + s];
            p.iterations_to_success.push_back(f);
            if (f) ++p.successes;
        }
        result.points.push_back(std::move(p));
    }
    return result;
}

std::vector<std::size_t> leading_phase_indices(const Grid& grid, std::size_t count) {
    std::vector<std::size_t> reps;
    for (std::size_t i = 1; i < grid.size(); ++i) {
        const std::size_t j = grid.negated(i);
        if (j != i && i < j) reps.push_back(i);
    }
    std::stable_sort(reps.begin(), reps.end(), [&](std::size_t a, std::size_t b) {
        return grid.wavevector_norm2(a) < grid.wavevector_norm2(b);
    });
    if (reps.size() < count) throw Error("leading_phase_indices: grid has too few independent phases");
    reps.resize(count);
    return reps;
}

std::size_t PortraitResult::occupied_cells() const {
    return static_cast<std::size_t>(std::count_if(counts.begin(), counts.end(), [](std::size_t c) { return c > 0; }));
}

void PortraitResult::write(const std::filesystem::path& csv, const std::filesystem::path& pgm) const {
    if (csv.has_parent_path()) std::filesystem::create_directories(csv.parent_path());
    std::ofstream os(csv);
    if (!os) throw Error("cannot write " + csv.string());
    os.precision(17);
    os << "phi1,phi2\n";
    for (const auto& [a, b] : points) os << a << ',' << b << '\n';
    std::vector<double> density(counts.begin(), counts.end());
    io::write_pgm(pgm, bins, bins, density);
}

PortraitResult attractor_portrait(const ObjectField& a, const ObjectField& b, const PortraitSpec& spec) {
    if (spec.bins < 1) throw Error("portrait: bins must be >= 1");
    if (!(spec.window > 0.0)) throw Error("portrait: window must be positive");
    auto [modulus, hist] = fabricate_unsolvable(a, b);
    const Grid& grid = a.grid();
    const auto idx = leading_phase_indices(grid, 4);

    DifferenceMapConfig cfg;
    cfg.pair.modulus = std::make_shared<ModulusProjector>(std::move(modulus));
    cfg.pair.constraint = std::make_shared<HistogramProjector>(std::move(hist));
    cfg.beta = spec.beta;

    PortraitResult out;
    out.bins = spec.bins;
    out.counts.assign(spec.bins * spec.bins, 0);
    const double two_pi = 2.0 * std::numbers::pi;
    auto bin_of = [&](double phi) {
        auto k = static_cast<std::size_t>(std::floor((phi + std::numbers::pi) / two_pi * static_cast<double>(spec.bins)));
        return std::min(k, spec.bins - 1);
    };

    ObjectField x = random_start(grid, spec.seed);
    for (std::size_t it = 0; it < spec.iterations; ++it) {
        const SpectrumField s = fft_forward(x);
        const double p3 = std::arg(s[idx[2]]);
        const double p4 = std::arg(s[idx[3]]);
        if (std::abs(p3) <= spec.window && std::abs(p4) <= spec.window) {
            const double p1 = std::arg(s[idx[0]]);
            const double p2 = std::arg(s[idx[1]]);
            out.points.emplace_back(p1, p2);
            ++out.counts[bin_of(p2) * spec.bins + bin_of(p1)];
        }
        StepResult step = dm_step(x, cfg);
        out.iterations = it + 1;
        if (step.error < 1e-12) {
            out.converged_at = it;
            break;
        }
        x = std::move(step.next);
    }
    if (out.points.size() < 100)
        out.warnings.push_back("only " + std::to_string(out.points.size()) + " points in the section");
    return out;
}

std::vector<Table1Report> table1_report() {
    std::vector<Table1Report> rows;
    for (const Table1Row& ref : table1_reference())
        rows.push_back({ref, optimal_sigma(AtomSupport(ref.dims, ref.radius))});
    return rows;
}

void write_table1_csv(std::ostream& os, const std::vector<Table1Report>& rows) {
    os << "d,R,pixels,sigma,delta_ave,sigma_ref,delta_ave_ref,sigma_dev,delta_ratio\n";
    for (const auto& r : rows) {
        os << r.reference.dims << ',' << r.reference.radius_label << ',' << r.reference.pixels << ','
           << r.computed.sigma << ',' << r.computed.delta_ave << ',' << r.reference.sigma << ','
           << r.reference.delta_ave << ',' << r.computed.sigma - r.reference.sigma << ','
           << r.computed.delta_ave / r.reference.delta_ave << '\n';
    }
}

void write_table1_csv(const std::filesystem::path& path, const std::vector<Table1Report>& rows) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream os(path);
    if (!os) throw Error("cannot write " + path.string());
    write_table1_csv(os, rows);
}

}  // namespace diffmap
