#include "diffmap/affine.hpp"

#include <random>

#include "diffmap/dynamics.hpp"
#include "diffmap/grid.hpp"

namespace diffmap {

AffineModel AffineModel::random(std::size_t n, std::size_t k1, std::size_t k2, std::uint64_t seed,
                                bool intersecting) {
    if (k1 + k2 > n) throw Error("affine model: subspace dimensions exceed ambient dimension");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss;
    const auto ni = static_cast<Eigen::Index>(n);
    Eigen::MatrixXd m(ni, ni);
    for (Eigen::Index i = 0; i < ni; ++i)
        for (Eigen::Index j = 0; j < ni; ++j) m(i, j) = gauss(rng);
    const Eigen::MatrixXd q = Eigen::HouseholderQR<Eigen::MatrixXd>(m).householderQ();

    const auto i1 = static_cast<Eigen::Index>(k1);
    const auto i2 = static_cast<Eigen::Index>(k2);
    AffineModel model;
    model.x1 = q.leftCols(i1);
    model.x2 = q.middleCols(i1, i2);
    model.y = q.rightCols(ni - i1 - i2);

    auto in_span = [&](const Eigen::MatrixXd& basis) {
        Eigen::VectorXd c(basis.cols());
        for (Eigen::Index i = 0; i < c.size(); ++i) c(i) = gauss(rng);
        return Eigen::VectorXd(basis * c);
    };
    model.a1 = in_span(model.x1);
    model.a2 = in_span(model.x2);
    model.b1 = in_span(model.y);
    model.b2 = intersecting ? model.b1 : in_span(model.y);
    return model;
}

void AffineModel::validate(double tol) const {
    const auto n = x1.rows();
    if (x2.rows() != n || y.rows() != n || x1.cols() + x2.cols() + y.cols() != n)
        throw Error("affine model: bases do not span the ambient space");
    Eigen::MatrixXd all(n, n);
    all << x1, x2, y;
    if (!(all.transpose() * all).isIdentity(tol)) throw Error("affine model: bases are not orthonormal");
    auto residual = [](const Eigen::MatrixXd& b, const Eigen::VectorXd& v) {
        return (v - b * (b.transpose() * v)).norm();
    };
    if (residual(x1, a1) > tol || residual(x2, a2) > tol || residual(y, b1) > tol || residual(y, b2) > tol)
        throw Error("affine model: offsets outside their subspaces");
}

AffineModel::Parts AffineModel::decompose(const Eigen::VectorXd& point) const {
    return {x1 * (x1.transpose() * point), x2 * (x2.transpose() * point), y * (y.transpose() * point)};
}

Eigen::VectorXd affine_project(const AffineModel& model, AffineSet which, const Eigen::VectorXd& point) {
    const auto p = model.decompose(point);
    if (which == AffineSet::kFirst) return p.x1 + model.a2 + model.b1;
    return model.a1 + p.x2 + model.b2;
}

Eigen::VectorXd affine_dm_step(const AffineModel& model, const Eigen::VectorXd& point, double beta) {
    return affine_dm_step(model, point, beta, -1.0 / beta, 1.0 / beta);
}

Eigen::VectorXd affine_dm_step(const AffineModel& model, const Eigen::VectorXd& point, double beta,
                               double gamma1, double gamma2) {
    if (beta == 0.0) throw Error("affine_dm_step: beta must be nonzero");
    auto pi1 = [&](const Eigen::VectorXd& v) { return affine_project(model, AffineSet::kFirst, v); };
    auto pi2 = [&](const Eigen::VectorXd& v) { return affine_project(model, AffineSet::kSecond, v); };
    return difference_map_update(point, pi1, pi2, beta, gamma1, gamma2).next;
}

Eigen::VectorXd affine_gs_step(const AffineModel& model, const Eigen::VectorXd& point) {
    return affine_project(model, AffineSet::kFirst, affine_project(model, AffineSet::kSecond, point));
}

std::pair<double, double> contraction_factors(double beta, double gamma1, double gamma2) {
    return {1.0 - beta * gamma2, 1.0 + beta * gamma1};
}

}  // namespace diffmap
