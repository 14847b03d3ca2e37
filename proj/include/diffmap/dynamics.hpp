#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "diffmap/field.hpp"
#include "diffmap/projections.hpp"

namespace diffmap {

inline double l2_norm(const ObjectField& v) { return norm(v); }
inline double l2_norm(const Eigen::VectorXd& v) { return v.norm(); }

template <class V>
struct DifferenceStep {
    V next;
    double error;  // ||pi1(f2(x)) - pi2(f1(x))||
};

/// One difference-map update x -> x + beta (pi1(f2(x)) - pi2(f1(x))) with
/// estimate maps f_i(x) = (1 + gamma_i) pi_i(x) - gamma_i x.
///
/// A projection whose coefficient in an estimate vanishes is not evaluated, so
/// beta = +-1 with the optimal gammas costs two projections instead of four
/// while producing the same result as the general form.
template <class V, class P1, class P2>
DifferenceStep<V> difference_map_update(const V& x, const P1& pi1, const P2& pi2, double beta,
                                        double gamma1, double gamma2) {
    std::optional<V> p1, p2;
    auto proj1 = [&]() -> const V& {
        if (!p1) p1 = pi1(x);
        return *p1;
    };
    auto proj2 = [&]() -> const V& {
        if (!p2) p2 = pi2(x);
        return *p2;
    };

    V a;  // pi1(f2(x))
    if (1.0 + gamma2 == 0.0 && -gamma2 == 1.0)
        a = proj1();
    else
        a = pi1(V((1.0 + gamma2) * proj2() - gamma2 * x));

    V b;  // pi2(f1(x))
    if (1.0 + gamma1 == 0.0 && -gamma1 == 1.0)
        b = proj2();
    else
        b = pi2(V((1.0 + gamma1) * proj1() - gamma1 * x));

    V delta = a - b;
    const double err = l2_norm(delta);
    return {V(x + beta * delta), err};
}

/// Object-domain constraint pi1 and Fourier modulus projection pi2.
struct ProjectionPair {
    std::shared_ptr<const Projector> constraint;
    std::shared_ptr<const Projector> modulus;
};

struct DifferenceMapConfig {
    ProjectionPair pair;
    double beta = 1.0;
    std::size_t max_iterations = 10000;
    /// Iteration stops once e_i drops below this.
    double tolerance = 1e-8;
    /// e_i below this counts as a solved instance in experiment statistics.
    double success_threshold = 1e-3;
    /// When set, stop this many iterations after the first success crossing.
    std::optional<std::size_t> settle_iterations;
    /// Store every k-th iterate in the trace (0 disables).
    std::size_t snapshot_every = 0;
    std::uint64_t seed = 0;

    double gamma1() const { return -1.0 / beta; }
    double gamma2() const { return 1.0 / beta; }
    void validate() const;
};

struct StepResult {
    ObjectField next;
    double error;
};

StepResult dm_step(const ObjectField& obj, const DifferenceMapConfig& cfg);

/// e = 2 sin(theta / 2) for unit-normalized constraint sets.
double angle_from_error(double e);
double error_from_angle(double theta);

struct IterationTrace {
    std::vector<double> errors;
    std::vector<double> wall_ms;  // cumulative
    std::optional<std::size_t> first_success;
    std::vector<std::pair<std::size_t, ObjectField>> snapshots;
    std::vector<std::string> warnings;
    std::uint64_t seed = 0;

    std::vector<double> angles() const;
    void write_csv(const std::filesystem::path& path) const;
};

struct RunResult {
    IterationTrace trace;
    /// Iterate with the smallest error seen.
    ObjectField fixed_point;
    ObjectField solution;
    /// e fell below the stop tolerance.
    bool success = false;
    std::size_t iterations = 0;
};

/// Uniform random start, normalized, from `seed`.
ObjectField random_start(const Grid& grid, std::uint64_t seed);

RunResult run(const ObjectField& start, const DifferenceMapConfig& cfg);
RunResult run(const Grid& grid, const DifferenceMapConfig& cfg);

/// Solution implied by a fixed point: pi1(rho*) for beta = -1, otherwise pi2(f1(rho*)).
ObjectField extract_solution(const ObjectField& fixed_point, const DifferenceMapConfig& cfg);

ObjectField fienup_hybrid(const ObjectField& obj, const SupportMask& support, double beta_f,
                          const ModulusData& modulus);
ObjectField fienup_in_out(const ObjectField& obj, const SupportMask& support, double beta_f,
                          const ModulusData& modulus);
ObjectField fienup_out_out(const ObjectField& obj, const SupportMask& support, double beta_f,
                           const ModulusData& modulus);

/// rho_n inside the support, -rho_n outside.
ObjectField flip_sign(const ObjectField& obj, const SupportMask& support);

/// Closed form of the beta = -1 support map: pi_mod(R_S rho) inside, rho + pi_mod(R_S rho) outside.
ObjectField support_map_beta_minus_one(const ObjectField& obj, const SupportMask& support,
                                       const ModulusData& modulus);

ObjectField gerchberg_saxton_step(const ObjectField& obj, const Projector& pi1, const Projector& pi2);

}  // namespace diffmap
