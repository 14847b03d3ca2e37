#pragma once

#include <array>
#include <string>
#include <vector>

#include "diffmap/field.hpp"
#include "diffmap/fft.hpp"
#include "diffmap/projections.hpp"

namespace diffmap {

/// Fractional translation of an atom center from its support center.
using Translation = std::array<double, 3>;

/// Integer offsets within distance R of the origin.
class AtomSupport {
public:
    AtomSupport() = default;
    AtomSupport(std::size_t dims, double radius);

    std::size_t dims() const { return dims_; }
    double radius() const { return radius_; }
    std::size_t size() const { return offsets_.size(); }
    const std::vector<Offset>& offsets() const { return offsets_; }

    /// Offset differences S - S, deduplicated.
    std::vector<Offset> differences() const;

private:
    std::size_t dims_ = 0;
    double radius_ = 0.0;
    std::vector<Offset> offsets_;
};

/// Continuum Gaussian atom with unit L2 norm, evaluated at squared distance r2.
double continuum_gaussian(std::size_t dims, double sigma, double r2);

/// Normalized restriction of the continuum Gaussian centered at t to the support.
std::vector<double> sampled_gaussian(const AtomSupport& support, double sigma, const Translation& t);

/// Finitely sampled Gaussian of a given width on a support.
class AtomTemplate {
public:
    AtomTemplate() = default;
    AtomTemplate(AtomSupport support, double sigma);

    const AtomSupport& support() const { return support_; }
    double sigma() const { return sigma_; }
    std::vector<double> values(const Translation& t) const { return sampled_gaussian(support_, sigma_, t); }

private:
    AtomSupport support_;
    double sigma_ = 1.0;
};

/// Squared distance between the sampled and the continuum Gaussian,
/// averaged over fractional translations with an n^d midpoint rule.
double delta_average(const AtomSupport& support, double sigma, std::size_t points_per_axis);

struct SigmaFit {
    double sigma = 0.0;
    double delta_ave = 0.0;
};

/// Width minimizing delta_average, by golden-section search on [0.1, 5].
SigmaFit optimal_sigma(const AtomSupport& support);

/// Width estimated from the mean |q|^2 of the intensity data.
double estimate_sigma(const ModulusData& modulus);

struct Table1Row {
    std::size_t dims;
    const char* radius_label;
    double radius;
    std::size_t pixels;
    double sigma;
    double delta_ave;
};

/// Published widths and errors of finitely sampled Gaussians.
const std::array<Table1Row, 9>& table1_reference();

/// Support and tabulated width for the usual "3 pixels per axis" atom in d dims.
AtomTemplate standard_template(std::size_t dims);

struct AtomPlacement {
    std::size_t center = 0;
    Translation t{0.0, 0.0, 0.0};
};

enum class OverlapRule {
    /// p_m - p_n not in S - S: atom supports are disjoint.
    kDisjointSupports,
    /// Centers distinct only; the synthesized object is renormalized.
    kAllowOverlap,
};

struct AtomicityConfig {
    std::size_t atoms = 1;
    AtomTemplate atom;
    /// Scale applied to every template; 1/sqrt(M) gives unit-norm objects.
    double amplitude = 1.0;
    OverlapRule overlap = OverlapRule::kDisjointSupports;

    /// Throws unless M >= 1 and M |S| <= N on the grid.
    void validate(const Grid& grid) const;
};

struct AtomicObject {
    ObjectField object;
    std::vector<AtomPlacement> placements;
};

/// Sum of amplitude * template(t_m) placed at each center.
ObjectField synthesize_atoms(const Grid& grid, const AtomicityConfig& cfg,
                             const std::vector<AtomPlacement>& placements);

/// Maps an object to a nearby object of M identical atoms.
///
/// Centers come from a greedy pass over the template-convolved object in
/// descending order, subject to the overlap rule. Each atom's fractional
/// translation starts at the centroid of the convolved values on its support
/// and is then refined to maximize the overlap of the template with the object
/// there, which makes atomic objects exact fixed points.
AtomicObject project_atomicity(const ObjectField& obj, const AtomicityConfig& cfg);

class AtomicityProjector final : public Projector {
public:
    AtomicityProjector(const Grid& grid, AtomicityConfig cfg);
    ObjectField operator()(const ObjectField& obj) const override;
    AtomicObject project(const ObjectField& obj) const;
    std::string name() const override { return "atomicity"; }
    const AtomicityConfig& config() const { return cfg_; }

private:
    AtomicityConfig cfg_;
    PeriodicConvolution smoothing_;
    std::vector<Offset> exclusion_;
};

}  // namespace diffmap
