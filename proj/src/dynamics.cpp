#include "diffmap/dynamics.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <random>

namespace diffmap {

void DifferenceMapConfig::validate() const {
    if (beta == 0.0 || !std::isfinite(beta)) throw Error("difference map: beta must be nonzero");
    if (!(tolerance > 0.0)) throw Error("difference map: tolerance must be positive");
    if (!pair.constraint || !pair.modulus) throw Error("difference map: missing projection");
}

StepResult dm_step(const ObjectField& obj, const DifferenceMapConfig& cfg) {
    cfg.validate();
    const Projector& pi1 = *cfg.pair.constraint;
    const Projector& pi2 = *cfg.pair.modulus;
    auto step = difference_map_update(obj, pi1, pi2, cfg.beta, cfg.gamma1(), cfg.gamma2());
    return {std::move(step.next), step.error};
}

double angle_from_error(double e) {
    if (e < 0.0 || e > 2.0) return std::numeric_limits<double>::quiet_NaN();
    return 2.0 * std::asin(0.5 * e);
}

double error_from_angle(double theta) { return 2.0 * std::sin(0.5 * theta); }

std::vector<double> IterationTrace::angles() const {
    std::vector<double> out;
    out.reserve(errors.size());
    for (double e : errors) out.push_back(angle_from_error(e));
    return out;
}

void IterationTrace::write_csv(const std::filesystem::path& path) const {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream os(path);
    if (!os) throw Error("cannot write " + path.string());
    os.precision(17);
    os << "iteration,e,theta,wall_ms\n";
    for (std::size_t i = 0; i < errors.size(); ++i) {
        const double theta = angle_from_error(errors[i]);
        os << i << ',' << errors[i] << ',';
        if (std::isfinite(theta)) os << theta;
        os << ',' << wall_ms[i] << '\n';
    }
}

ObjectField random_start(const Grid& grid, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    std::vector<double> v(grid.size());
    for (double& x : v) x = uni(rng);
    return normalize(ObjectField(grid, std::move(v)));
}

ObjectField extract_solution(const ObjectField& fixed_point, const DifferenceMapConfig& cfg) {
    cfg.validate();
    const Projector& pi1 = *cfg.pair.constraint;
    const Projector& pi2 = *cfg.pair.modulus;
    if (cfg.beta == -1.0) return pi1(fixed_point);
    if (cfg.beta == 1.0) return pi2(fixed_point);
    const double inv = 1.0 / cfg.beta;
    return pi2((1.0 - inv) * pi1(fixed_point) + inv * fixed_point);
}

RunResult run(const ObjectField& start, const DifferenceMapConfig& cfg) {
    cfg.validate();
    using clock = std::chrono::steady_clock;
    const auto t0 = clock::now();

    RunResult result;
    result.trace.seed = cfg.seed;
    ObjectField x = start;
    ObjectField best = start;
    double best_error = std::numeric_limits<double>::infinity();

    for (std::size_t i = 0; i < cfg.max_iterations; ++i) {
        if (cfg.snapshot_every && i % cfg.snapshot_every == 0) result.trace.snapshots.emplace_back(i, x);
        StepResult step = dm_step(x, cfg);
        const double e = step.error;
        result.trace.errors.push_back(e);
        result.trace.wall_ms.push_back(
            std::chrono::duration<double, std::milli>(clock::now() - t0).count());
        if (i == 0 && e < 0.1)
            result.trace.warnings.push_back(
                "initial error below 0.1: the object constraint may be too weak");
        if (e < best_error) {
            best_error = e;
            best = x;
        }
        if (!result.trace.first_success && e < cfg.success_threshold) result.trace.first_success = i;
        result.iterations = i + 1;
        if (e < cfg.tolerance) break;
        if (cfg.settle_iterations && result.trace.first_success &&
            i - *result.trace.first_success >= *cfg.settle_iterations)
            break;
        x = std::move(step.next);
    }

    result.success = best_error < cfg.tolerance;
    result.fixed_point = std::move(best);
    result.solution = extract_solution(result.fixed_point, cfg);
    return result;
}

RunResult run(const Grid& grid, const DifferenceMapConfig& cfg) {
    return run(random_start(grid, cfg.seed), cfg);
}

namespace {

template <class F>
ObjectField support_wise(const ObjectField& obj, const SupportMask& support, F&& f) {
    require_same_grid(obj.grid(), support.grid(), "support map");
    ObjectField out(obj.grid());
    for (std::size_t n = 0; n < obj.size(); ++n) out[n] = f(n, support.contains(n));
    return out;
}

}  // namespace

ObjectField fienup_hybrid(const ObjectField& obj, const SupportMask& support, double beta_f,
                          const ModulusData& modulus) {
    const ObjectField pm = project_modulus(obj, modulus);
    return support_wise(obj, support,
                        [&](std::size_t n, bool in) { return in ? pm[n] : obj[n] - beta_f * pm[n]; });
}

ObjectField fienup_in_out(const ObjectField& obj, const SupportMask& support, double beta_f,
                          const ModulusData& modulus) {
    const ObjectField pm = project_modulus(obj, modulus);
    return support_wise(obj, support,
                        [&](std::size_t n, bool in) { return in ? obj[n] : obj[n] - beta_f * pm[n]; });
}

ObjectField fienup_out_out(const ObjectField& obj, const SupportMask& support, double beta_f,
                           const ModulusData& modulus) {
    const ObjectField pm = project_modulus(obj, modulus);
    return support_wise(obj, support,
                        [&](std::size_t n, bool in) { return in ? pm[n] : (1.0 - beta_f) * pm[n]; });
}

ObjectField flip_sign(const ObjectField& obj, const SupportMask& support) {
    return support_wise(obj, support, [&](std::size_t n, bool in) { return in ? obj[n] : -obj[n]; });
}

ObjectField support_map_beta_minus_one(const ObjectField& obj, const SupportMask& support,
                                       const ModulusData& modulus) {
    const ObjectField pr = project_modulus(flip_sign(obj, support), modulus);
    return support_wise(obj, support, [&](std::size_t n, bool in) { return in ? pr[n] : obj[n] + pr[n]; });
}

ObjectField gerchberg_saxton_step(const ObjectField& obj, const Projector& pi1, const Projector& pi2) {
    return pi1(pi2(obj));
}

}  // namespace diffmap
