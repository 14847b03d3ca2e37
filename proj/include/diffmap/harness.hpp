#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "diffmap/atoms.hpp"
#include "diffmap/dynamics.hpp"
#include "diffmap/projections.hpp"
#include "diffmap/synth.hpp"

namespace diffmap {

enum class InstanceKind { kAtoms, kRandomDisk, kRandom };
enum class ConstraintKind { kHistogram, kAtomicity, kSayre, kSupport };

std::string to_string(InstanceKind k);
std::string to_string(ConstraintKind k);
InstanceKind parse_instance_kind(const std::string& s);
ConstraintKind parse_constraint_kind(const std::string& s);

struct InstanceSpec {
    InstanceKind kind = InstanceKind::kAtoms;
    std::vector<std::size_t> extents{64, 64};
    std::size_t atoms = 30;
    double xi = 0.0;
    /// Disk diameter in pixels; 0 means half the smallest extent.
    double diameter = 0.0;
};

/// Ground truth plus everything a constraint might need.
struct Instance {
    ObjectField truth;
    ModulusData modulus;
    Histogram histogram;
    SupportMask support;
    std::vector<AtomPlacement> placements;
    std::size_t atoms = 0;
};

Instance make_instance(const InstanceSpec& spec, std::uint64_t seed);

struct ConstraintSpec {
    ConstraintKind kind = ConstraintKind::kHistogram;
    std::size_t sayre_iterations = 3;
    double sayre_alpha = 0.37;
    bool positivity = true;
};

ProjectionPair make_projections(const Instance& instance, const ConstraintSpec& spec);

struct ExperimentSpec {
    InstanceSpec instance;
    ConstraintSpec constraint;
    double beta = 1.0;
    std::size_t max_iterations = 10000;
    double success_threshold = 1e-3;
    double tolerance = 1e-8;
    /// Stop this many iterations after e first drops below the threshold (unset: run to tolerance).
    std::optional<std::size_t> settle_iterations;
    std::size_t snapshot_every = 0;
    std::vector<std::uint64_t> seeds{0};
    std::filesystem::path output_dir = "out";
    std::size_t threads = 1;

    void validate() const;
};

/// Flat key=value text; blank lines and '#' comments ignored.
std::map<std::string, std::string> read_config(const std::filesystem::path& path);
/// Applies known keys to `spec`; unknown keys throw.
void apply_config(ExperimentSpec& spec, const std::map<std::string, std::string>& kv);
std::map<std::string, std::string> to_config(const ExperimentSpec& spec);

/// Start-point seed derived from the instance seed.
std::uint64_t start_seed(std::uint64_t seed);

struct SeedOutcome {
    std::uint64_t seed = 0;
    RunResult run;
    double registered_distance = 0.0;

    /// e dropped below the success threshold at some iteration.
    bool solved() const { return run.trace.first_success.has_value(); }
};

/// One instance + one difference-map run, no files.
SeedOutcome run_seed(const ExperimentSpec& spec, std::uint64_t seed);

/// Runs every seed and writes trace.csv, snapshots, solution.pgf/pgm and
/// summary.json per seed, plus manifest.json at the top level.
std::vector<SeedOutcome> run_experiment(const ExperimentSpec& spec);

struct SweepPoint {
    double beta = 0.0;
    std::size_t runs = 0;
    std::size_t successes = 0;
    /// First iteration with e below threshold, per run (empty when unsolved).
    std::vector<std::optional<std::size_t>> iterations_to_success;

    double fraction() const { return runs ? static_cast<double>(successes) / static_cast<double>(runs) : 0.0; }
};

struct SweepResult {
    std::vector<SweepPoint> points;
    void write_csv(const std::filesystem::path& path) const;
};

/// For every beta and seed, a fresh instance and a run of `spec.max_iterations`.
SweepResult sweep_beta(const ExperimentSpec& spec, const std::vector<double>& betas);

/// Indices of the four lowest-frequency coefficients that are not their own
/// conjugates, one per conjugate pair, excluding q = 0.
std::vector<std::size_t> leading_phase_indices(const Grid& grid, std::size_t count = 4);

struct PortraitSpec {
    double beta = 0.7;
    std::size_t iterations = 100000;
    double window = 0.3;
    std::size_t bins = 64;
    std::uint64_t seed = 0;
};

struct PortraitResult {
    std::vector<std::pair<double, double>> points;
    std::vector<std::size_t> counts;  // bins x bins occupancy, row = angle 2
    std::size_t bins = 0;
    std::size_t iterations = 0;
    std::optional<std::size_t> converged_at;
    std::vector<std::string> warnings;

    std::size_t occupied_cells() const;
    void write(const std::filesystem::path& csv, const std::filesystem::path& pgm) const;
};

/// Histogram-constrained difference map on the averaged moduli of two objects,
/// sampling the first two leading phases whenever the next two lie within the window of 0.
PortraitResult attractor_portrait(const ObjectField& a, const ObjectField& b, const PortraitSpec& spec);

struct Table1Report {
    Table1Row reference;
    SigmaFit computed;
};

std::vector<Table1Report> table1_report();
void write_table1_csv(std::ostream& os, const std::vector<Table1Report>& rows);
void write_table1_csv(const std::filesystem::path& path, const std::vector<Table1Report>& rows);

}  // namespace diffmap
