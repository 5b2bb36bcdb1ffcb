#include "doctest.h"
#include "tfmod/functions.hpp"
#include "tfmod/grid.hpp"

#include <cmath>

using namespace tfmod;

namespace {

double rel_l2(const GridFunction& a, const GridFunction& b) {
    GridFunction d;
    d.spec = a.spec;
    d.values.resize(a.values.size());
    for (std::size_t i = 0; i < a.values.size(); ++i) d.values[i] = a.values[i] - b.values[i];
    return lp_norm(d, 2.0) / lp_norm(b, 2.0);
}

}  // namespace

TEST_CASE("make_grid populates spacings") {
    const GridSpec s = make_grid(1, 8, kPi);
    CHECK(s.dx == doctest::Approx(kPi / 4).epsilon(1e-15));
    CHECK(s.dxi == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(s.total() == 8);

    const GridSpec s2 = make_grid(2, 16, 2.0 * kPi);
    CHECK(s2.dxi == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(s2.total() == 256);
    // lattice {-8..7}^2 scaled by 1/2
    CHECK(s2.frequency(0)[0] == doctest::Approx(-4.0));
    CHECK(s2.offsets(0)[0] == -8);
}

TEST_CASE("integer lattice coverage") {
    const GridSpec s = make_grid(1, 8, kPi);
    // every |k| <= 3 is a frequency point m * dxi with dxi = 1
    for (int k = -3; k <= 3; ++k) {
        const std::array<int, 1> off{k};
        const std::size_t flat = s.flat_from_offsets(off);
        CHECK(s.frequency(flat)[0] == doctest::Approx(static_cast<double>(k)));
    }
    CHECK(s.integer_lattice_aligned());
    CHECK(s.lattice_steps_per_unit() == 1);
}

TEST_CASE("make_grid rejects bad parameters") {
    CHECK_THROWS_AS(make_grid(1, 12, kPi), Error);   // not a power of two
    CHECK_THROWS_AS(make_grid(1, 4, kPi), Error);    // too small
    CHECK_THROWS_AS(make_grid(4, 16, kPi), Error);   // memory guard
    CHECK_THROWS_AS(make_grid(0, 16, kPi), Error);
    CHECK_THROWS_AS(make_grid(1, 16, -1.0), Error);
}

TEST_CASE("forward transform of the Gaussian is the Gaussian") {
    const GridSpec s = make_grid(1, 256, 8.0 * kPi);
    const GridFunction f = make_function(s, R"({"kind":"gaussian","width":1.0})");
    const SpectralFunction F = forward_transform(f);
    double dev = 0.0;
    for (std::size_t i = 0; i < F.coefficients.size(); ++i) {
        const double xi = s.frequency(i)[0];
        dev = std::max(dev, std::abs(F.coefficients[i] - cplx(std::exp(-0.5 * xi * xi), 0.0)));
    }
    CHECK(dev <= 1e-10);
}

TEST_CASE("constant function concentrates at zero frequency") {
    const GridSpec s = make_grid(1, 64, kPi);
    GridFunction one;
    one.spec = s;
    one.values.assign(s.total(), cplx(1.0, 0.0));
    const SpectralFunction F = forward_transform(one);
    const std::array<int, 1> zero{0};
    const std::size_t z = s.flat_from_offsets(zero);
    const double peak = std::abs(F.coefficients[z]);
    CHECK(peak > 0.0);
    for (std::size_t i = 0; i < F.coefficients.size(); ++i)
        if (i != z) CHECK(std::abs(F.coefficients[i]) <= 1e-13 * peak);
    // value: (2 pi)^{-1/2} * 2L
    CHECK(peak == doctest::Approx(2.0 * s.L / std::sqrt(2.0 * kPi)).epsilon(1e-12));
}

TEST_CASE("lattice-resonant exponential has a single coefficient") {
    const GridSpec s = make_grid(1, 64, 2.0 * kPi);
    const GridFunction f = make_function(
        s, R"({"kind":"trig_poly","coeffs":[{"k":[3],"re":1.0}]})");
    const SpectralFunction F = forward_transform(f);
    const std::array<int, 1> target{3 * s.lattice_steps_per_unit()};
    const std::size_t t = s.flat_from_offsets(target);
    for (std::size_t i = 0; i < F.coefficients.size(); ++i)
        if (i != t) CHECK(std::abs(F.coefficients[i]) <= 1e-12 * std::abs(F.coefficients[t]));
}

TEST_CASE("round trips") {
    const GridSpec s = make_grid(1, 128, 2.0 * kPi);
    const GridFunction f = random_bandlimited(s, 7, 6, false);
    CHECK(rel_l2(inverse_transform(forward_transform(f)), f) <= 1e-12);

    SUBCASE("single zero-frequency coefficient inverts to a constant") {
        SpectralFunction F;
        F.spec = s;
        F.coefficients.assign(s.total(), cplx(0.0, 0.0));
        const std::array<int, 1> zero{0};
        F.coefficients[s.flat_from_offsets(zero)] = 2.0 * s.L / std::sqrt(2.0 * kPi);
        const GridFunction g = inverse_transform(F);
        for (const cplx& v : g.values) CHECK(std::abs(v - cplx(1.0, 0.0)) <= 1e-12);
    }

    SUBCASE("zero spectrum inverts to zero") {
        SpectralFunction F;
        F.spec = s;
        F.coefficients.assign(s.total(), cplx(0.0, 0.0));
        const GridFunction g = inverse_transform(F);
        for (const cplx& v : g.values) CHECK(std::abs(v) == 0.0);
    }
}

TEST_CASE("two-dimensional round trip") {
    const GridSpec s = make_grid(2, 16, kPi);
    const GridFunction f = random_bandlimited(s, 11, 3, false);
    CHECK(rel_l2(inverse_transform(forward_transform(f)), f) <= 1e-12);
}

TEST_CASE("lp_norm") {
    const GridSpec s = make_grid(1, 256, 4.0 * kPi);

    SUBCASE("plateau mass under p = 1") {
        GridFunction f;
        f.spec = s;
        f.values.assign(s.total(), cplx(0.0, 0.0));
        for (std::size_t i = 0; i < s.total(); ++i)
            if (std::abs(s.point(i)[0]) <= 1.0) f.values[i] = 1.0;
        CHECK(lp_norm(f, 1.0) == doctest::Approx(2.0).epsilon(2.0 * s.dx));
    }

    SUBCASE("sup norm is the grid maximum") {
        GridFunction f = random_bandlimited(s, 3, 4, false);
        double m = 0.0;
        for (const cplx& v : f.values) m = std::max(m, std::abs(v));
        CHECK(lp_norm(f, std::numeric_limits<double>::infinity()) == m);
    }

    SUBCASE("Gaussian L2 norm equals pi^{1/4}") {
        const GridSpec wide = make_grid(1, 256, 8.0 * kPi);
        const GridFunction f = make_function(wide, R"({"kind":"gaussian","width":1.0})");
        CHECK(std::abs(lp_norm(f, 2.0) - 1.3313353638003897) <= 1e-8);
    }

    SUBCASE("rejects p below one") {
        const GridFunction f = make_function(s, R"({"kind":"gaussian","width":1.0})");
        CHECK_THROWS_AS(lp_norm(f, 0.5), Error);
    }
}

TEST_CASE("Parseval on random inputs") {
    const GridSpec s = make_grid(1, 128, 2.0 * kPi);
    for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
        const GridFunction f = random_bandlimited(s, seed, 8, false);
        const SpectralFunction F = forward_transform(f);
        long double acc = 0.0L;
        for (const cplx& c : F.coefficients) acc += std::norm(c);
        const double spectral = std::sqrt(static_cast<double>(acc) * s.dxi);
        CHECK(std::abs(spectral - lp_norm(f, 2.0)) <= 1e-10 * lp_norm(f, 2.0));
    }
}

TEST_CASE("quadrature_1d") {
    SUBCASE("linear integrand") {
        const cplx v = quadrature_1d([](double x) { return cplx(x, 0.0); }, 0.0, 1.0, 1e-10);
        CHECK(std::abs(v - cplx(0.5, 0.0)) <= 1e-10);
    }
    SUBCASE("odd Gaussian moment vanishes") {
        const cplx v = quadrature_1d([](double x) { return cplx(x * std::exp(-x * x), 0.0); },
                                     -10.0, 10.0, 1e-10);
        CHECK(std::abs(v) <= 1e-10);
    }
    SUBCASE("upper incomplete gamma") {
        // int_2^inf y e^{-y} dy = 3 e^{-2}
        const cplx v = quadrature_1d([](double y) { return cplx(y * std::exp(-y), 0.0); }, 2.0,
                                     60.0, 1e-12);
        CHECK(std::abs(v.real() - 0.40600584970983807) <= 1e-10);
    }
    SUBCASE("budget exhaustion is signalled") {
        CHECK_THROWS_AS(quadrature_1d([](double x) { return cplx(std::sin(1.0 / (x + 1e-12)), 0.0); },
                                      0.0, 1.0, 1e-13),
                        Error);
    }
    SUBCASE("deterministic") {
        auto f = [](double x) { return cplx(std::cos(3.0 * x), std::sin(x)); };
        const cplx a = quadrature_1d(f, -2.0, 5.0, 1e-9);
        const cplx b = quadrature_1d(f, -2.0, 5.0, 1e-9);
        CHECK(a == b);
    }
}

TEST_CASE("boundary decay") {
    const GridSpec s = make_grid(1, 128, 8.0 * kPi);
    const GridFunction g = make_function(s, R"({"kind":"gaussian","width":1.0})");
    CHECK(boundary_decay(g) <= 1e-12);
    GridFunction one;
    one.spec = s;
    one.values.assign(s.total(), cplx(1.0, 0.0));
    CHECK(boundary_decay(one) == doctest::Approx(1.0));
}
