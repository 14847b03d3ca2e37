#include <doctest.h>

#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "diffmap/fft.hpp"
#include "diffmap/io.hpp"
#include "diffmap/registration.hpp"
#include "oracles.hpp"

using namespace diffmap;

TEST_CASE("grid shape and indexing") {
    CHECK_THROWS_AS(Grid({}), Error);
    CHECK_THROWS_AS(Grid({4, 4, 4, 4}), Error);
    CHECK_THROWS_AS(Grid({4, 0}), Error);

    const Grid g{4, 6, 5};
    CHECK(g.dims() == 3);
    CHECK(g.size() == 120);
    for (std::size_t i = 0; i < g.size(); ++i) {
        CHECK(g.index(g.coords(i)) == i);
        CHECK(g.negated(g.negated(i)) == i);
    }
    CHECK(g.index({-1, 0, 0}) == g.index({3, 0, 0}));
    CHECK(g.signed_coord(1, 5) == -1);
    CHECK(g.signed_coord(1, 3) == -3);
}

TEST_CASE("wavevectors use the symmetric integer range") {
    const Grid g{8};
    const double step = 2.0 * std::numbers::pi / 8.0;
    CHECK(g.wavevector_norm2(1) == doctest::Approx(step * step));
    CHECK(g.wavevector_norm2(7) == doctest::Approx(step * step));
    CHECK(g.wavevector_norm2(4) == doctest::Approx(16 * step * step));
}

TEST_CASE("object fields reject bad values") {
    const Grid g{3};
    CHECK_THROWS_AS(ObjectField(g, {1.0, 2.0}), Error);
    CHECK_THROWS_AS(ObjectField(g, {1.0, std::nan(""), 2.0}), Error);
    CHECK_THROWS_AS(ObjectField(g, {1.0, INFINITY, 2.0}), Error);
}

TEST_CASE("fft of a constant field is a DC spike") {
    const Grid g{4, 8};
    const double c = 0.7;
    const SpectrumField s = fft_forward(ObjectField(g, std::vector<double>(g.size(), c)));
    CHECK(std::abs(s[0] - Complex(c * std::sqrt(32.0), 0.0)) < 1e-12);
    for (std::size_t q = 1; q < g.size(); ++q) CHECK(std::abs(s[q]) < 1e-12);
}

TEST_CASE("two-point transform by hand") {
    const Grid g{2};
    const SpectrumField s = fft_forward(ObjectField(g, {1.0, 0.0}));
    CHECK(std::abs(s[0] - Complex(M_SQRT1_2, 0)) < 1e-15);
    CHECK(std::abs(s[1] - Complex(M_SQRT1_2, 0)) < 1e-15);
    const ObjectField back = fft_inverse(SpectrumField(g, {Complex(M_SQRT1_2, 0), Complex(M_SQRT1_2, 0)}));
    CHECK(back[0] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(std::abs(back[1]) < 1e-15);
}

TEST_CASE("fft matches direct summation") {
    for (const Grid& g : {Grid{12}, Grid{6, 5}, Grid{3, 4, 2}}) {
        const ObjectField f = oracle::random_field(g, 11);
        const SpectrumField s = fft_forward(f);
        const auto ref = oracle::dft(f);
        for (std::size_t q = 0; q < g.size(); ++q) CHECK(std::abs(s[q] - ref[q]) < 1e-12);
    }
}

TEST_CASE("unitarity, round trip and Hermitian symmetry") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const Grid g{16, 16};
        const ObjectField f = oracle::random_field(g, seed);
        const SpectrumField s = fft_forward(f);
        CHECK(std::abs(norm(s) - norm(f)) <= 1e-12 * norm(f));
        CHECK(s.hermitian_defect() <= 1e-12);
        CHECK(distance(fft_inverse(s), f) <= 1e-12 * norm(f));
    }
}

TEST_CASE("real transform agrees with the complex one") {
    const Grid g{6, 10};
    const ObjectField f = oracle::random_field(g, 3);
    RealFft& fft = RealFft::local(g);
    const auto half = fft.forward(f.values());
    const SpectrumField full = fft_forward(f);
    for (std::size_t h = 0; h < half.size(); ++h) CHECK(std::abs(half[h] - full[fft.half_to_full()[h]]) < 1e-12);
    const auto back = fft.inverse(half);
    for (std::size_t i = 0; i < g.size(); ++i) CHECK(back[i] == doctest::Approx(f[i]).epsilon(1e-12));
}

TEST_CASE("inverse rejects non-Hermitian spectra") {
    const Grid g{4};
    SpectrumField s(g);
    s[1] = Complex(1.0, 0.0);
    CHECK_THROWS_AS(fft_inverse(s), Error);
}

TEST_CASE("periodic convolution matches direct sum") {
    const Grid g{5, 6};
    const ObjectField k = oracle::random_field(g, 1);
    const ObjectField f = oracle::random_field(g, 2);
    const ObjectField fast = PeriodicConvolution(k).apply(f);
    CHECK(oracle::max_abs_diff(fast, oracle::convolve(k, f)) < 1e-12);
}

TEST_CASE("norm and normalize") {
    const Grid g{16};
    CHECK(norm(ObjectField(g, std::vector<double>(16, 0.25))) == doctest::Approx(1.0).epsilon(1e-15));

    const ObjectField f = oracle::random_field(Grid{8}, 4);
    double ss = 0.0;
    for (double v : f.values()) ss += v * v;
    CHECK(norm(f) == doctest::Approx(std::sqrt(ss)).epsilon(1e-15));
    CHECK(norm(2.0 * f) == doctest::Approx(2.0 * norm(f)).epsilon(1e-15));
    CHECK(std::abs(norm(normalize(f)) - 1.0) < 1e-12);
    CHECK_THROWS_AS(normalize(ObjectField(g)), Error);
}

TEST_CASE("modulus data validation") {
    const Grid g{4};
    CHECK_THROWS_AS(ModulusData(g, {1.0, -0.1, 0.0, -0.1}), Error);
    CHECK_THROWS_AS(ModulusData(g, {1.0, 0.5, 0.0, 0.2}), Error);
    CHECK_NOTHROW(ModulusData(g, {1.0, 0.5, 0.0, 0.5}));
    CHECK(ModulusData(g, {1.0, 0.5, 0.0, 0.5}).total_intensity() == doctest::Approx(1.5));
}

namespace {

ObjectField translate(const ObjectField& f, const Offset& s) {
    ObjectField out(f.grid());
    for (std::size_t i = 0; i < f.size(); ++i) out[f.grid().shifted(i, s)] = f[i];
    return out;
}

ObjectField invert(const ObjectField& f) {
    ObjectField out(f.grid());
    for (std::size_t i = 0; i < f.size(); ++i) out[f.grid().negated(i)] = f[i];
    return out;
}

double brute_registered(const ObjectField& a, const ObjectField& b) {
    double best = INFINITY;
    for (const ObjectField& c : {b, invert(b)})
        for (std::size_t s = 0; s < a.size(); ++s) best = std::min(best, distance(a, translate(c, a.grid().coords(s))));
    return best;
}

}  // namespace

TEST_CASE("registered distance is zero on the translation and inversion orbit") {
    const Grid g{16, 12};
    const ObjectField a = oracle::random_field(g, 5);
    CHECK(registered_distance(a, translate(a, {3, 5, 0})) < 1e-10);
    CHECK(registered_distance(a, invert(a)) < 1e-10);
    CHECK(registered_distance(a, translate(invert(a), {-2, 7, 0})) < 1e-10);

    const Registration r = register_fields(a, translate(invert(a), {1, 2, 0}));
    CHECK(distance(a, apply_registration(translate(invert(a), {1, 2, 0}), r)) < 1e-10);
}

TEST_CASE("registered distance matches exhaustive registration") {
    for (const Grid& g : {Grid{64}, Grid{8, 8}}) {
        for (std::uint64_t seed = 0; seed < 3; ++seed) {
            const ObjectField a = normalize(oracle::random_field(g, 100 + seed));
            const ObjectField b = normalize(oracle::random_field(g, 200 + seed));
            const double fast = registered_distance(a, b);
            CHECK(fast == doctest::Approx(brute_registered(a, b)).epsilon(1e-10));
            CHECK(fast == doctest::Approx(registered_distance(b, a)).epsilon(1e-10));
        }
    }
    CHECK_THROWS_AS(registered_distance(ObjectField(Grid{4}), ObjectField(Grid{5})), Error);
}

TEST_CASE("pgf round trip and byte layout") {
    const Grid g{3, 2};
    const ObjectField f(g, {1.0, -2.5, 0.125, 3.0, 1e-300, -0.0});
    std::stringstream ss;
    io::write_pgf(ss, f);
    const std::string bytes = ss.str();
    CHECK(bytes.substr(0, 10) == "pgf 2 3 2\n");
    REQUIRE(bytes.size() == 10 + 6 * 8);
    const unsigned char one_le[8] = {0, 0, 0, 0, 0, 0, 0xf0, 0x3f};
    CHECK(std::memcmp(bytes.data() + 10, one_le, 8) == 0);

    const ObjectField back = io::read_pgf(ss);
    CHECK(back.grid() == g);
    for (std::size_t i = 0; i < f.size(); ++i) CHECK(back[i] == f[i]);
}

TEST_CASE("pgf reader rejects malformed input") {
    std::stringstream bad_magic("pgx 1 2\n");
    CHECK_THROWS_AS(io::read_pgf(bad_magic), Error);
    std::stringstream truncated(std::string("pgf 1 2\n") + std::string(9, '\0'));
    CHECK_THROWS_AS(io::read_pgf(truncated), Error);
    std::stringstream bad_dims("pgf 4 1 1 1 1\n");
    CHECK_THROWS_AS(io::read_pgf(bad_dims), Error);
}

TEST_CASE("pgm export is min-max scaled") {
    const auto dir = std::filesystem::temp_directory_path() / "diffmap_test_io";
    const auto path = dir / "img.pgm";
    io::write_pgm(path, ObjectField(Grid{2, 2}, {0.0, 1.0, 0.5, 2.0}));
    std::ifstream is(path, std::ios::binary);
    std::string magic;
    int w, h, maxv;
    is >> magic >> w >> h >> maxv;
    is.get();
    CHECK(magic == "P5");
    CHECK(w == 2);
    CHECK(h == 2);
    CHECK(maxv == 255);
    unsigned char px[4];
    is.read(reinterpret_cast<char*>(px), 4);
    CHECK(px[0] == 0);
    CHECK(px[3] == 255);
    CHECK(px[1] == 128);
    std::filesystem::remove_all(dir);
}

TEST_CASE("value lists skip blanks and comments") {
    const auto path = std::filesystem::temp_directory_path() / "diffmap_values.txt";
    std::ofstream(path) << "# header\n1.5\n\n-2\n  3e-1\n";
    const auto v = io::read_value_list(path);
    REQUIRE(v.size() == 3);
    CHECK(v[2] == doctest::Approx(0.3));
    std::filesystem::remove(path);
}
