#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <utility>

namespace diffmap {

/// Locally linearized pair of constraint sets:
///   C1 = X1 + a2 + b1,  C2 = a1 + X2 + b2,
/// with X1, X2, Y mutually orthogonal and spanning the ambient space.
struct AffineModel {
    Eigen::MatrixXd x1;  // orthonormal columns
    Eigen::MatrixXd x2;
    Eigen::MatrixXd y;
    Eigen::VectorXd a1;  // in X1
    Eigen::VectorXd a2;  // in X2
    Eigen::VectorXd b1;  // in Y
    Eigen::VectorXd b2;  // in Y

    std::size_t ambient() const { return static_cast<std::size_t>(x1.rows()); }

    /// Random orientation of dimensions (k1, k2, n - k1 - k2). With
    /// `intersecting`, b1 = b2 and the sets meet at a1 + a2 + b1.
    static AffineModel random(std::size_t n, std::size_t k1, std::size_t k2, std::uint64_t seed,
                              bool intersecting);

    /// Throws unless the bases are orthonormal, mutually orthogonal and complete,
    /// and the offsets lie in their subspaces.
    void validate(double tol = 1e-10) const;

    struct Parts {
        Eigen::VectorXd x1, x2, y;
    };
    Parts decompose(const Eigen::VectorXd& point) const;
};

enum class AffineSet { kFirst, kSecond };

/// pi1(x1 + x2 + y) = x1 + a2 + b1;  pi2(x1 + x2 + y) = a1 + x2 + b2.
Eigen::VectorXd affine_project(const AffineModel& model, AffineSet which, const Eigen::VectorXd& point);

/// Difference map step with the optimal estimate parameters gamma1 = -1/beta, gamma2 = 1/beta.
Eigen::VectorXd affine_dm_step(const AffineModel& model, const Eigen::VectorXd& point, double beta);
Eigen::VectorXd affine_dm_step(const AffineModel& model, const Eigen::VectorXd& point, double beta,
                               double gamma1, double gamma2);

/// pi1(pi2(x))
Eigen::VectorXd affine_gs_step(const AffineModel& model, const Eigen::VectorXd& point);

/// Linear factors multiplying (x1 - a1) and (x2 - a2) in one step: (1 - beta g2, 1 + beta g1).
std::pair<double, double> contraction_factors(double beta, double gamma1, double gamma2);

}  // namespace diffmap
