#include "diffmap/synth.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>

#include "diffmap/fft.hpp"

namespace diffmap {

double ClusterSpec::q0() const { return xi > 0.0 ? 2.0 * std::numbers::pi / xi : 0.0; }

void ClusterSpec::validate() const {
    if (!(xi >= 0.0) || !std::isfinite(xi)) throw Error("cluster spec: xi must be finite and >= 0");
}

ObjectField random_object(const Grid& grid, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    std::vector<double> v(grid.size());
    for (double& x : v) x = uni(rng);
    return normalize(ObjectField(grid, std::move(v)));
}

ObjectField clustered_random(const Grid& grid, const ClusterSpec& spec) {
    spec.validate();
    std::mt19937_64 rng(spec.seed);
    std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
    const double q02 = spec.q0() * spec.q0();

    SpectrumField s(grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const std::size_t j = grid.negated(i);
        if (j < i) continue;
        const double mag = spec.xi > 0.0 ? std::sqrt(q02 / (grid.wavevector_norm2(i) + q02)) : 1.0;
        if (i == j) {
            s[i] = Complex(mag, 0.0);
        } else {
            s[i] = std::polar(mag, phase(rng));
            s[j] = std::conj(s[i]);
        }
    }
    return normalize(fft_inverse(s));
}

AtomicityConfig unit_atomic_config(const Grid& grid, std::size_t atoms) {
    AtomicityConfig cfg;
    cfg.atoms = atoms;
    cfg.atom = standard_template(grid.dims());
    cfg.amplitude = 1.0 / std::sqrt(static_cast<double>(atoms));
    cfg.validate(grid);
    return cfg;
}

AtomicObject make_atomic_object(const Grid& grid, const AtomicityConfig& cfg, const ClusterSpec& spec) {
    return AtomicityProjector(grid, cfg).project(clustered_random(grid, spec));
}

Histogram histogram_of(const ObjectField& obj) { return Histogram::from_field(obj); }

ModulusData modulus_of(const ObjectField& obj) {
    const SpectrumField s = fft_forward(obj);
    std::vector<double> m(s.values().size());
    for (std::size_t i = 0; i < m.size(); ++i) m[i] = std::abs(s[i]);
    // exact pairing, so rounding never trips the Hermitian check
    for (std::size_t i = 0; i < m.size(); ++i) {
        const std::size_t j = obj.grid().negated(i);
        if (j > i) m[i] = m[j] = 0.5 * (m[i] + m[j]);
    }
    return ModulusData(obj.grid(), std::move(m));
}

std::pair<ModulusData, Histogram> fabricate_unsolvable(const ObjectField& a, const ObjectField& b) {
    require_same_grid(a.grid(), b.grid(), "fabricate_unsolvable");
    const Histogram ha = histogram_of(a);
    const Histogram hb = histogram_of(b);
    double scale = 0.0;
    for (double v : ha.values()) scale = std::max(scale, std::abs(v));
    for (std::size_t i = 0; i < ha.size(); ++i)
        if (std::abs(ha.values()[i] - hb.values()[i]) > 1e-12 * std::max(scale, 1.0))
            throw Error("fabricate_unsolvable: objects have different histograms");
    const ModulusData ma = modulus_of(a);
    const ModulusData mb = modulus_of(b);
    std::vector<double> avg(ma.values().size());
    for (std::size_t i = 0; i < avg.size(); ++i) avg[i] = 0.5 * (ma[i] + mb[i]);
    return {ModulusData(a.grid(), std::move(avg)), ha};
}

ObjectField random_disk(const Grid& grid, double diameter, std::uint64_t seed) {
    const SupportMask disk = SupportMask::disk(grid, diameter);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    ObjectField obj(grid);
    for (std::size_t i = 0; i < grid.size(); ++i)
        if (disk.contains(i)) obj[i] = 1.0 - uni(rng);
    return normalize(obj);
}

ObjectField binary_sequence(std::size_t length, std::size_t ones, std::uint64_t seed) {
    if (ones > length) throw Error("binary_sequence: more ones than samples");
    std::vector<double> v(length, 0.0);
    std::fill(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(ones), 1.0);
    std::mt19937_64 rng(seed);
    std::shuffle(v.begin(), v.end(), rng);
    return ObjectField(Grid{length}, std::move(v));
}

double mean_nearest_neighbor(const Grid& grid, const std::vector<AtomPlacement>& placements) {
    if (placements.size() < 2) throw Error("mean_nearest_neighbor: need at least two atoms");
    double total = 0.0;
    for (std::size_t m = 0; m < placements.size(); ++m) {
        const Offset cm = grid.coords(placements[m].center);
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t n = 0; n < placements.size(); ++n) {
            if (n == m) continue;
            const Offset cn = grid.coords(placements[n].center);
            double d2 = 0.0;
            for (std::size_t a = 0; a < grid.dims(); ++a) {
                const double d = grid.signed_coord(a, cm[a] - cn[a]) + placements[m].t[a] - placements[n].t[a];
                d2 += d * d;
            }
            best = std::min(best, d2);
        }
        total += std::sqrt(best);
    }
    return total / static_cast<double>(placements.size());
}

}  // namespace diffmap
