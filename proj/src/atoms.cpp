#include "diffmap/atoms.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <set>

namespace diffmap {
namespace {

using Vec = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, 3, 1>;
using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, 3, 3>;

double offset_distance2(const Offset& s, const Translation& t, std::size_t dims) {
    double r2 = 0.0;
    for (std::size_t a = 0; a < dims; ++a) {
        const double d = s[a] - t[a];
        r2 += d * d;
    }
    return r2;
}

// log of the overlap <rho_S, template(t)> with derivatives in t.
struct OverlapModel {
    const std::vector<Offset>& offsets;
    const std::vector<double>& local;  // object values on S + p0
    double sigma;
    std::size_t dims;

    struct Eval {
        double f = -std::numeric_limits<double>::infinity();
        Vec grad;
        Mat hess;
        bool valid = false;
    };

    Eval operator()(const Translation& t, bool derivatives) const {
        double A = 0.0, B = 0.0;
        Vec gA = Vec::Zero(dims), gB = Vec::Zero(dims);
        Mat hA = Mat::Zero(dims, dims), hB = Mat::Zero(dims, dims);
        for (std::size_t k = 0; k < offsets.size(); ++k) {
            Vec u(dims);
            double r2 = 0.0;
            for (std::size_t a = 0; a < dims; ++a) {
                const double d = offsets[k][a] - t[a];
                r2 += d * d;
                u(a) = 2.0 * d / sigma;
            }
            const double w = std::exp(-r2 / sigma);
            const double w2 = w * w;
            A += local[k] * w;
            B += w2;
            if (derivatives) {
                const Mat uu = u * u.transpose();
                gA += local[k] * w * u;
                gB += 2.0 * w2 * u;
                hA += local[k] * w * (uu - (2.0 / sigma) * Mat::Identity(dims, dims));
                hB += w2 * (4.0 * uu - (4.0 / sigma) * Mat::Identity(dims, dims));
            }
        }
        Eval e;
        if (!(A > 0.0) || !(B > 0.0)) return e;
        e.valid = true;
        e.f = std::log(A) - 0.5 * std::log(B);
        if (derivatives) {
            e.grad = gA / A - 0.5 * gB / B;
            e.hess = hA / A - (gA * gA.transpose()) / (A * A) -
                     0.5 * (hB / B - (gB * gB.transpose()) / (B * B));
        }
        return e;
    }
};

Translation clamp_to_cell(Translation t, std::size_t dims) {
    for (std::size_t a = 0; a < dims; ++a) t[a] = std::clamp(t[a], -0.5, 0.5);
    return t;
}

// Box-constrained Newton ascent on the log-overlap, falling back to gradient steps.
Translation refine_translation(const OverlapModel& model, Translation t) {
    const std::size_t d = model.dims;
    auto cur = model(t, true);
    if (!cur.valid) return t;
    for (int iter = 0; iter < 40; ++iter) {
        std::vector<std::size_t> free;
        for (std::size_t a = 0; a < d; ++a) {
            const bool at_low = t[a] <= -0.5 && cur.grad(a) < 0.0;
            const bool at_high = t[a] >= 0.5 && cur.grad(a) > 0.0;
            if (!at_low && !at_high) free.push_back(a);
        }
        if (free.empty()) break;
        const auto nf = static_cast<Eigen::Index>(free.size());
        Vec g(nf);
        Mat h(nf, nf);
        for (Eigen::Index i = 0; i < nf; ++i) {
            g(i) = cur.grad(static_cast<Eigen::Index>(free[static_cast<std::size_t>(i)]));
            for (Eigen::Index j = 0; j < nf; ++j)
                h(i, j) = cur.hess(static_cast<Eigen::Index>(free[static_cast<std::size_t>(i)]),
                                   static_cast<Eigen::Index>(free[static_cast<std::size_t>(j)]));
        }
        if (g.norm() < 1e-14) break;
        Vec dir;
        Eigen::LLT<Mat> llt(-h);
        if (llt.info() == Eigen::Success) dir = llt.solve(g);
        if (dir.size() == 0 || !dir.allFinite() || dir.dot(g) <= 0.0) dir = g;

        double step = 1.0;
        bool moved = false;
        for (int k = 0; k < 40; ++k, step *= 0.5) {
            Translation trial = t;
            for (Eigen::Index i = 0; i < nf; ++i)
                trial[free[static_cast<std::size_t>(i)]] += step * dir(i);
            trial = clamp_to_cell(trial, d);
            auto next = model(trial, true);
            // f is flat to round-off near the optimum; accept steps within that band
            const double slack = 8.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(cur.f));
            if (next.valid && next.f >= cur.f - slack) {
                double moved2 = 0.0;
                for (std::size_t a = 0; a < d; ++a) moved2 += (trial[a] - t[a]) * (trial[a] - t[a]);
                t = trial;
                cur = next;
                moved = moved2 > 1e-30;
                break;
            }
        }
        if (!moved) break;
    }
    return t;
}

}  // namespace

AtomSupport::AtomSupport(std::size_t dims, double radius) : dims_(dims), radius_(radius) {
    if (dims < 1 || dims > 3) throw Error("atom support: dims must be 1..3");
    if (!(radius >= 0.0)) throw Error("atom support: radius must be >= 0");
    const int reach = static_cast<int>(std::floor(radius + 1e-9));
    const double r2 = radius * radius + 1e-9;
    const int ny = dims >= 2 ? reach : 0;
    const int nz = dims >= 3 ? reach : 0;
    for (int x = -reach; x <= reach; ++x)
        for (int y = -ny; y <= ny; ++y)
            for (int z = -nz; z <= nz; ++z)
                if (double(x * x + y * y + z * z) <= r2) offsets_.push_back({x, y, z});
}

std::vector<Offset> AtomSupport::differences() const {
    std::set<Offset> diff;
    for (const Offset& a : offsets_)
        for (const Offset& b : offsets_) diff.insert({a[0] - b[0], a[1] - b[1], a[2] - b[2]});
    return {diff.begin(), diff.end()};
}

double continuum_gaussian(std::size_t dims, double sigma, double r2) {
    return std::pow(2.0 / (std::numbers::pi * sigma), 0.25 * static_cast<double>(dims)) *
           std::exp(-r2 / sigma);
}

std::vector<double> sampled_gaussian(const AtomSupport& support, double sigma, const Translation& t) {
    std::vector<double> v(support.size());
    double sum2 = 0.0;
    for (std::size_t k = 0; k < v.size(); ++k) {
        v[k] = std::exp(-offset_distance2(support.offsets()[k], t, support.dims()) / sigma);
        sum2 += v[k] * v[k];
    }
    const double inv = 1.0 / std::sqrt(sum2);
    for (double& x : v) x *= inv;
    return v;
}

AtomTemplate::AtomTemplate(AtomSupport support, double sigma) : support_(std::move(support)), sigma_(sigma) {
    if (!(sigma > 0.0)) throw Error("atom template: sigma must be positive");
}

double delta_average(const AtomSupport& support, double sigma, std::size_t n) {
    const std::size_t d = support.dims();
    const double norm2 = std::pow(2.0 / (std::numbers::pi * sigma), 0.5 * static_cast<double>(d));
    std::size_t total = 1;
    for (std::size_t a = 0; a < d; ++a) total *= n;
    double acc = 0.0;
    for (std::size_t idx = 0; idx < total; ++idx) {
        Translation t{0.0, 0.0, 0.0};
        std::size_t rem = idx;
        for (std::size_t a = 0; a < d; ++a) {
            t[a] = -0.5 + (static_cast<double>(rem % n) + 0.5) / static_cast<double>(n);
            rem /= n;
        }
        double s = 0.0;
        for (const Offset& o : support.offsets())
            s += std::exp(-2.0 * offset_distance2(o, t, d) / sigma);
        const double dev = std::sqrt(norm2 * s) - 1.0;
        acc += dev * dev;
    }
    return acc / static_cast<double>(total);
}

SigmaFit optimal_sigma(const AtomSupport& support) {
    const std::size_t n = support.dims() <= 2 ? 17 : 9;
    auto f = [&](double s) { return delta_average(support, s, n); };
    const double lo0 = 0.1, hi0 = 5.0;
    const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo0, b = hi0;
    double c = b - ratio * (b - a), e = a + ratio * (b - a);
    double fc = f(c), fe = f(e);
    while (b - a > 1e-7) {
        if (fc < fe) {
            b = e;
            e = c;
            fe = fc;
            c = b - ratio * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = e;
            fc = fe;
            e = a + ratio * (b - a);
            fe = f(e);
        }
    }
    const double sigma = 0.5 * (a + b);
    if (sigma - lo0 < 1e-4 || hi0 - sigma < 1e-4)
        throw Error("optimal_sigma: minimum not bracketed by [0.1, 5]");
    return {sigma, f(sigma)};
}

double estimate_sigma(const ModulusData& modulus) {
    const Grid& g = modulus.grid();
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double w = modulus[i] * modulus[i];
        num += g.wavevector_norm2(i) * w;
        den += w;
    }
    if (!(den > 0.0)) throw Error("estimate_sigma: zero intensity");
    const double inv_sigma = num / den / static_cast<double>(g.dims());
    if (!(inv_sigma > 0.0)) throw Error("estimate_sigma: infinite width (intensity only at q = 0)");
    return 1.0 / inv_sigma;
}

const std::array<Table1Row, 9>& table1_reference() {
    static const std::array<Table1Row, 9> rows{{
        {1, "1", 1.0, 3, 1.156, 0.000025},
        {1, "2", 2.0, 5, 1.800, 4e-8},
        {1, "3", 3.0, 7, 2.445, 6e-11},
        {2, "1", 1.0, 5, 0.814, 0.0030},
        {2, "sqrt2", std::numbers::sqrt2, 9, 1.115, 0.000060},
        {2, "2", 2.0, 13, 1.238, 0.000021},
        {3, "1", 1.0, 7, 0.694, 0.011},
        {3, "sqrt2", std::numbers::sqrt2, 19, 0.952, 0.00070},
        {3, "sqrt3", std::sqrt(3.0), 27, 1.091, 0.00010},
    }};
    return rows;
}

AtomTemplate standard_template(std::size_t dims) {
    switch (dims) {
        case 1: return AtomTemplate(AtomSupport(1, 1.0), 1.156);
        case 2: return AtomTemplate(AtomSupport(2, std::numbers::sqrt2), 1.115);
        case 3: return AtomTemplate(AtomSupport(3, std::sqrt(3.0)), 1.091);
        default: throw Error("standard_template: dims must be 1..3");
    }
}

void AtomicityConfig::validate(const Grid& grid) const {
    if (atoms < 1) throw Error("atomicity: need at least one atom");
    if (atom.support().dims() != grid.dims()) throw Error("atomicity: template/grid dimension mismatch");
    if (atoms * atom.support().size() > grid.size())
        throw Error("atomicity: M |S| exceeds the grid size");
}

ObjectField synthesize_atoms(const Grid& grid, const AtomicityConfig& cfg,
                             const std::vector<AtomPlacement>& placements) {
    ObjectField out(grid);
    const auto& offsets = cfg.atom.support().offsets();
    for (const AtomPlacement& p : placements) {
        const std::vector<double> v = cfg.atom.values(p.t);
        for (std::size_t k = 0; k < offsets.size(); ++k)
            out[grid.shifted(p.center, offsets[k])] += cfg.amplitude * v[k];
    }
    if (cfg.overlap == OverlapRule::kAllowOverlap && !placements.empty())
        out = rescale_to_norm2(out, cfg.amplitude * cfg.amplitude * static_cast<double>(placements.size()));
    return out;
}

AtomicObject project_atomicity(const ObjectField& obj, const AtomicityConfig& cfg) {
    return AtomicityProjector(obj.grid(), cfg).project(obj);
}

AtomicityProjector::AtomicityProjector(const Grid& grid, AtomicityConfig cfg) : cfg_(std::move(cfg)) {
    cfg_.validate(grid);
    ObjectField kernel(grid);
    const auto& offsets = cfg_.atom.support().offsets();
    const std::vector<double> g = cfg_.atom.values({0.0, 0.0, 0.0});
    for (std::size_t k = 0; k < offsets.size(); ++k) kernel[grid.index(offsets[k])] += g[k];
    smoothing_ = PeriodicConvolution(kernel);
    exclusion_ = cfg_.overlap == OverlapRule::kDisjointSupports ? cfg_.atom.support().differences()
                                                                 : std::vector<Offset>{{0, 0, 0}};
}

ObjectField AtomicityProjector::operator()(const ObjectField& obj) const { return project(obj).object; }

AtomicObject AtomicityProjector::project(const ObjectField& obj) const {
    const Grid& grid = obj.grid();
    require_same_grid(grid, smoothing_.grid(), "atomicity projection");
    const std::size_t n = grid.size();
    const std::size_t d = grid.dims();
    const ObjectField smooth = smoothing_.apply(obj);

    const auto& offsets = cfg_.atom.support().offsets();
    std::vector<double> local(offsets.size());
    const OverlapModel model{offsets, local, cfg_.atom.sigma(), d};
    // best translation at a center and the overlap <rho, template(t)> it reaches
    auto fit = [&](std::size_t p) {
        double mass = 0.0;
        Translation c{0.0, 0.0, 0.0};
        for (std::size_t k = 0; k < offsets.size(); ++k) {
            const std::size_t idx = grid.shifted(p, offsets[k]);
            local[k] = obj[idx];
            const double w = smooth[idx];
            mass += w;
            for (std::size_t a = 0; a < d; ++a) c[a] += w * offsets[k][a];
        }
        Translation t{0.0, 0.0, 0.0};
        if (mass > 0.0)
            for (std::size_t a = 0; a < d; ++a) t[a] = c[a] / mass;
        t = refine_translation(model, clamp_to_cell(t, d));
        const std::vector<double> v = cfg_.atom.values(t);
        double overlap = 0.0;
        for (std::size_t k = 0; k < offsets.size(); ++k) overlap += local[k] * v[k];
        return std::pair{t, overlap};
    };
    std::vector<std::int64_t> memo_slot(n, -1);
    std::vector<std::pair<Translation, double>> memo;
    auto fit_cached = [&](std::size_t p) {
        if (memo_slot[p] < 0) {
            memo_slot[p] = static_cast<std::int64_t>(memo.size());
            memo.push_back(fit(p));
        }
        return memo[static_cast<std::size_t>(memo_slot[p])];
    };

    // Candidates by descending smoothed value, ties by ascending index.
    std::vector<std::pair<double, std::size_t>> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = {-smooth[i], i};
    std::sort(order.begin(), order.end());

    std::vector<std::uint8_t> blocked(n, 0);
    std::vector<std::size_t> centers;
    centers.reserve(cfg_.atoms);
    for (std::size_t k = 0; k < n && centers.size() < cfg_.atoms; ++k) {
        const std::size_t p = order[k].second;
        if (blocked[p]) continue;
        centers.push_back(p);
        for (const Offset& o : exclusion_) blocked[grid.shifted(p, o)] = 1;
    }
    if (centers.size() < cfg_.atoms)
        throw Error("atomicity projection: found only " + std::to_string(centers.size()) + " of " +
                    std::to_string(cfg_.atoms) + " admissible centers");

    std::vector<Translation> shifts(centers.size());
    std::vector<double> overlaps(centers.size());
    for (std::size_t m = 0; m < centers.size(); ++m) std::tie(shifts[m], overlaps[m]) = fit_cached(centers[m]);

    // Single-pixel moves of one atom at a time while the total overlap grows.
    if (cfg_.overlap == OverlapRule::kDisjointSupports) {
        std::vector<std::ptrdiff_t> cover(n, 0);
        std::vector<std::ptrdiff_t> owners(n, 0);  // sum of covering atom indices
        auto place = [&](std::size_t m, int sign) {
            for (const Offset& o : exclusion_) {
                const std::size_t q = grid.shifted(centers[m], o);
                cover[q] += sign;
                owners[q] += sign * static_cast<std::ptrdiff_t>(m);
            }
        };
        for (std::size_t m = 0; m < centers.size(); ++m) place(m, 1);
        std::vector<Offset> moves;
        for (int a = -1; a <= 1; ++a)
            for (int b = d > 1 ? -1 : 0; b <= (d > 1 ? 1 : 0); ++b)
                for (int c = d > 2 ? -1 : 0; c <= (d > 2 ? 1 : 0); ++c)
                    if (a || b || c) moves.push_back({a, b, c});
        std::vector<std::size_t> stamp(n, 0);
        std::size_t stamp_id = 0;
        auto tolerance = [](double a) { return 1e-12 * std::abs(a); };
        for (std::size_t pass = 0; pass < 50 * centers.size(); ++pass) {
            bool changed = false;
            for (std::size_t m = 0; m < centers.size(); ++m) {
                place(m, -1);
                for (const Offset& mv : moves) {
                    const std::size_t q = grid.shifted(centers[m], mv);
                    if (cover[q] == 0) {
                        const auto [t, overlap] = fit_cached(q);
                        if (overlap > overlaps[m] + tolerance(overlaps[m])) {
                            centers[m] = q;
                            shifts[m] = t;
                            overlaps[m] = overlap;
                            changed = true;
                        }
                        continue;
                    }
                    // blocked by a single neighbour: move both
                    if (cover[q] != 1) continue;
                    const auto j = static_cast<std::size_t>(owners[q]);
                    const auto [t, overlap] = fit_cached(q);
                    ++stamp_id;
                    for (const Offset& o : exclusion_) stamp[grid.shifted(q, o)] = stamp_id;
                    place(j, -1);
                    for (const Offset& mv2 : moves) {
                        const std::size_t q2 = grid.shifted(centers[j], mv2);
                        if (cover[q2] || stamp[q2] == stamp_id) continue;
                        const auto [t2, overlap2] = fit_cached(q2);
                        const double before = overlaps[m] + overlaps[j];
                        if (overlap + overlap2 > before + tolerance(before)) {
                            centers[m] = q;
                            shifts[m] = t;
                            overlaps[m] = overlap;
                            centers[j] = q2;
                            shifts[j] = t2;
                            overlaps[j] = overlap2;
                            changed = true;
                            break;
                        }
                    }
                    place(j, 1);
                }
                place(m, 1);
            }
            if (!changed) break;
        }
    }

    AtomicObject result;
    result.placements.reserve(centers.size());
    for (std::size_t m = 0; m < centers.size(); ++m) result.placements.push_back({centers[m], shifts[m]});
    result.object = synthesize_atoms(grid, cfg_, result.placements);
    return result;
}

}  // namespace diffmap
