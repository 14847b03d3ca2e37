#include "diffmap/registration.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "diffmap/fft.hpp"

namespace diffmap {

Registration register_fields(const ObjectField& a, const ObjectField& b) {
    require_same_grid(a.grid(), b.grid(), "registered_distance");
    const Grid& g = a.grid();
    const SpectrumField fa = fft_forward(a);
    const SpectrumField fb = fft_forward(b);
    const double root_n = std::sqrt(static_cast<double>(g.size()));

    // corr(s) = sum_r a(r) b(r - s) has transform sqrt(N) A conj(B);
    // the inverted copy b(-r) has transform conj(B) for real b.
    SpectrumField direct(g), flipped(g);
    for (std::size_t i = 0; i < g.size(); ++i) {
        direct[i] = root_n * fa[i] * std::conj(fb[i]);
        flipped[i] = root_n * fa[i] * fb[i];
    }
    const ObjectField corr = fft_inverse(direct);
    const ObjectField corr_inv = fft_inverse(flipped);

    double best_corr = -std::numeric_limits<double>::infinity();
    for (std::size_t s = 0; s < g.size(); ++s) best_corr = std::max({best_corr, corr[s], corr_inv[s]});

    // The correlation identity loses half the digits near zero distance, so
    // every registration within round-off of the best is scored directly.
    const double slack = 1e-9 * (dot(a, a) + dot(b, b));
    Registration best;
    best.distance = std::numeric_limits<double>::infinity();
    for (int parity = 0; parity < 2; ++parity) {
        const ObjectField& c = parity ? corr_inv : corr;
        for (std::size_t s = 0; s < g.size(); ++s) {
            if (c[s] < best_corr - slack) continue;
            const Registration cand{0.0, g.coords(s), parity == 1};
            const double d = distance(a, apply_registration(b, cand));
            if (d < best.distance) {
                best = cand;
                best.distance = d;
            }
        }
    }
    return best;
}

double registered_distance(const ObjectField& a, const ObjectField& b) {
    return register_fields(a, b).distance;
}

ObjectField apply_registration(const ObjectField& b, const Registration& reg) {
    const Grid& g = b.grid();
    ObjectField out(g);
    for (std::size_t r = 0; r < g.size(); ++r) {
        // out(r) = b'(r - s) with b'(x) = b(-x) when inverted.
        Offset src = g.coords(r);
        for (std::size_t a = 0; a < g.dims(); ++a) {
            src[a] -= reg.shift[a];
            if (reg.inverted) src[a] = -src[a];
        }
        out[r] = b[g.index(src)];
    }
    return out;
}

}  // namespace diffmap
