#include "doctest.h"
#include "tfmod/functions.hpp"
#include "tfmod/stft.hpp"

#include <cmath>
#include <functional>

using namespace tfmod;

namespace {

const GridSpec kLine = make_grid(1, 256, 8.0 * kPi);

double rel_l2(const GridFunction& a, const GridFunction& b) {
    GridFunction d;
    d.spec = a.spec;
    d.values.resize(a.values.size());
    for (std::size_t i = 0; i < a.values.size(); ++i) d.values[i] = a.values[i] - b.values[i];
    return lp_norm(d, 2.0) / lp_norm(b, 2.0);
}

// Independent oracle: the windowed-transform integral evaluated by adaptive
// quadrature on closed-form integrands, no grids involved.
cplx stft_quadrature_oracle(const std::function<cplx(double)>& f,
                            const std::function<cplx(double)>& phi, double x, double xi,
                            double box) {
    const cplx v = quadrature_1d(
        [&](double s) { return f(s) * std::conj(phi(s - x)) * std::polar(1.0, -s * xi); }, -box,
        box, 1e-12);
    return v / std::sqrt(2.0 * kPi);
}

}  // namespace

TEST_CASE("translate") {
    const GridFunction f = random_bandlimited(kLine, 5, 4, false);
    const std::array<int, 1> zero{0};
    const GridFunction same = translate_steps(f, zero);
    for (std::size_t i = 0; i < f.values.size(); ++i) CHECK(same.values[i] == f.values[i]);

    const std::array<int, 1> fwd{13}, bwd{-13};
    const GridFunction round = translate_steps(translate_steps(f, fwd), bwd);
    for (std::size_t i = 0; i < f.values.size(); ++i) CHECK(round.values[i] == f.values[i]);

    // exponential picks up the conjugate phase: T_{x0} e^{ix} = e^{-i x0} e^{ix}
    const GridSpec s = make_grid(1, 64, kPi);
    const GridFunction e1 = make_function(s, R"({"kind":"trig_poly","coeffs":[{"k":[1],"re":1.0}]})");
    const double x0 = 5 * s.dx;
    const GridFunction shifted = translate(e1, std::array<double, 1>{x0});
    double dev = 0.0;
    for (std::size_t i = 0; i < e1.values.size(); ++i)
        dev = std::max(dev, std::abs(shifted.values[i] - std::polar(1.0, -x0) * e1.values[i]));
    CHECK(dev <= 1e-12);

    CHECK_THROWS_AS(translate(f, std::array<double, 1>{0.5 * kLine.dx}), Error);
}

TEST_CASE("modulate") {
    const GridFunction f = random_bandlimited(kLine, 6, 4, false);
    const std::array<int, 1> zero{0};
    const GridFunction same = modulate_steps(f, zero);
    for (std::size_t i = 0; i < f.values.size(); ++i) CHECK(same.values[i] == f.values[i]);

    // exchange: F(M_xi0 f) = T_xi0 F(f)
    const std::array<int, 1> m0{8};
    const SpectralFunction lhs = forward_transform(modulate_steps(f, m0));
    const SpectralFunction rhs = forward_transform(f);
    double dev = 0.0;
    for (std::size_t i = 0; i < lhs.coefficients.size(); ++i) {
        const auto off = kLine.offsets(i);
        const std::array<int, 1> src{off[0] - m0[0]};
        const cplx expected = rhs.coefficients[kLine.flat_from_offsets(src)];
        dev = std::max(dev, std::abs(lhs.coefficients[i] - expected));
    }
    CHECK(dev <= 1e-10);

    // unimodular factor
    const GridFunction g = modulate_steps(f, std::array<int, 1>{3});
    for (std::size_t i = 0; i < f.values.size(); ++i)
        CHECK(std::abs(std::abs(g.values[i]) - std::abs(f.values[i])) <= 1e-15);

    CHECK_THROWS_AS(modulate(f, std::array<double, 1>{0.5 * kLine.dxi}), Error);
}

TEST_CASE("involution") {
    const GridFunction f = random_bandlimited(kLine, 9, 4, false);
    const GridFunction twice = involution(involution(f));
    for (std::size_t i = 0; i < f.values.size(); ++i) CHECK(twice.values[i] == f.values[i]);

    const GridFunction even = make_function(kLine, R"({"kind":"gaussian","width":1.3})");
    const GridFunction inv = involution(even);
    double dev = 0.0;
    for (std::size_t i = 0; i < even.values.size(); ++i)
        dev = std::max(dev, std::abs(inv.values[i] - even.values[i]));
    CHECK(dev <= 1e-15);

    // f = e^{ix}: conj(f(-x)) = conj(e^{-ix}) = e^{ix}
    const GridSpec s = make_grid(1, 64, kPi);
    const GridFunction e1 = make_function(s, R"({"kind":"trig_poly","coeffs":[{"k":[1],"re":1.0}]})");
    const GridFunction ei = involution(e1);
    dev = 0.0;
    for (std::size_t i = 0; i < e1.values.size(); ++i)
        dev = std::max(dev, std::abs(ei.values[i] - e1.values[i]));
    CHECK(dev <= 1e-12);
}

TEST_CASE("stft of zero is zero and specs must match") {
    const Window phi = gaussian_window(kLine, 1.0);
    GridFunction zero;
    zero.spec = kLine;
    zero.values.assign(kLine.total(), cplx(0.0, 0.0));
    const STFTMatrix V = stft(zero, phi);
    for (const cplx& v : V.values) CHECK(v == cplx(0.0, 0.0));

    const GridSpec other = make_grid(1, 128, 8.0 * kPi);
    const GridFunction f = make_function(other, R"({"kind":"gaussian","width":1.0})");
    CHECK_THROWS_AS(stft(f, phi), Error);
}

TEST_CASE("Gaussian pair matches the quadrature oracle") {
    const GridFunction f = make_function(kLine, R"({"kind":"gaussian","width":1.0})");
    const Window phi = gaussian_window(kLine, 1.0);
    const STFTMatrix V = stft(f, phi);

    const double nrm = lp_norm(f, 2.0);
    auto fc = [](double s) { return cplx(std::exp(-0.5 * s * s), 0.0); };
    auto pc = [nrm](double s) { return cplx(std::exp(-0.5 * s * s) / nrm, 0.0); };

    // 25 bulk sample points; also check the closed-form envelope
    double worst = 0.0;
    for (int ix = -2; ix <= 2; ++ix) {
        for (int im = -2; im <= 2; ++im) {
            const std::array<int, 1> jo{ix * 7}, mo{im * 6};
            const std::size_t xf = kLine.flat_from_offsets(jo);
            const std::size_t mf = kLine.flat_from_offsets(mo);
            const double x = kLine.point(xf)[0];
            const double xi = kLine.frequency(mf)[0];
            const cplx oracle = stft_quadrature_oracle(fc, pc, x, xi, kLine.L);
            const cplx got = V.at(xf, mf);
            worst = std::max(worst, std::abs(got - oracle) / std::abs(oracle));

            // |V| = pi^{1/4} (2 pi)^{-1/2} e^{-(x^2+xi^2)/4}: unit-norm window,
            // unnormalized f with |f|_2 = pi^{1/4}
            const double envelope = std::pow(kPi, 0.25) *
                                    std::exp(-0.25 * (x * x + xi * xi)) / std::sqrt(2.0 * kPi);
            CHECK(std::abs(std::abs(got) - envelope) <= 1e-8);
        }
    }
    CHECK(worst <= 1e-6);
}

TEST_CASE("mixed l2 norm realizes the isometry") {
    const Window phi = gaussian_window(kLine, 1.0);
    for (std::uint64_t seed : {21ULL, 22ULL, 23ULL}) {
        const GridFunction f = random_poly_gaussian(kLine, seed);
        const double mixed = stft(f, phi).mixed_l2_norm();
        const double n2 = lp_norm(f, 2.0);
        CHECK(std::abs(mixed - n2) <= 1e-6 * n2);
    }
}

TEST_CASE("stft_spectral agrees with stft") {
    const Window phi = gaussian_window(kLine, 1.0);

    SUBCASE("random band-limited input") {
        const GridFunction f = random_bandlimited(kLine, 31, 5, false);
        const STFTMatrix a = stft(f, phi);
        const STFTMatrix b = stft_spectral(f, phi);
        double dev = 0.0;
        for (std::size_t i = 0; i < a.values.size(); ++i)
            dev = std::max(dev, std::abs(a.values[i] - b.values[i]));
        CHECK(dev <= 1e-8);
    }

    SUBCASE("Gaussian keeps the radial closed form") {
        const GridFunction f = make_function(kLine, R"({"kind":"gaussian","width":1.0})");
        const STFTMatrix V = stft_spectral(f, phi);
        for (const auto& [jx, jm] : std::vector<std::pair<int, int>>{{8, 0}, {0, 8}, {16, 4}}) {
            const std::size_t xf = kLine.flat_from_offsets(std::array<int, 1>{jx});
            const std::size_t mf = kLine.flat_from_offsets(std::array<int, 1>{jm});
            const double x = kLine.point(xf)[0];
            const double xi = kLine.frequency(mf)[0];
            const double expect = std::pow(kPi, 0.25) *
                                  std::exp(-0.25 * (x * x + xi * xi)) / std::sqrt(2.0 * kPi);
            CHECK(std::abs(std::abs(V.at(xf, mf)) - expect) <= 1e-8);
        }
    }

    SUBCASE("zero input") {
        GridFunction zero;
        zero.spec = kLine;
        zero.values.assign(kLine.total(), cplx(0.0, 0.0));
        const STFTMatrix V = stft_spectral(zero, phi);
        for (const cplx& v : V.values) CHECK(std::abs(v) <= 1e-300);
    }
}

TEST_CASE("identity report") {
    const Window phi = gaussian_window(kLine, 1.0);
    const Window gamma = gaussian_window(kLine, 1.0);

    SUBCASE("Gaussian input: all paths agree and domination holds") {
        const GridFunction f = make_function(kLine, R"({"kind":"gaussian","width":1.0})");
        const IdentityReport r = verify_identities(f, phi, gamma, 1);
        CHECK(r.max_deviation() <= 1e-8);
        CHECK(r.domination_margin >= -1e-10);
    }

    SUBCASE("random input: convolution forms track the base path") {
        const GridFunction f = random_bandlimited(kLine, 55, 4, false);
        const IdentityReport r = verify_identities(f, phi, gamma, 2);
        CHECK(r.dev_conv_space <= 1e-8);
        CHECK(r.dev_conv_freq <= 1e-8);
    }

    SUBCASE("value at the origin for f = window is the squared norm") {
        // (2 pi)^{-1/2} |phi|_2^2 with the unit-norm window
        const STFTMatrix V = stft(phi.g, phi);
        const std::size_t z = kLine.flat_from_offsets(std::array<int, 1>{0});
        CHECK(std::abs(V.at(z, z) - cplx(1.0 / std::sqrt(2.0 * kPi), 0.0)) <= 1e-10);
    }

    SUBCASE("near-orthogonal pair is rejected") {
        Window odd;
        odd.g = make_function(kLine, R"({"kind":"poly_gaussian","width":1.0,"coeffs":[0.0,1.0]})");
        odd.kind = "custom";
        const GridFunction f = make_function(kLine, R"({"kind":"gaussian","width":1.0})");
        CHECK_THROWS_AS(verify_identities(f, phi, odd, 1), Error);
    }
}

TEST_CASE("istft") {
    const Window phi = gaussian_window(kLine, 1.0);

    SUBCASE("matched reconstruction") {
        const GridFunction f = random_poly_gaussian(kLine, 77);
        const GridFunction back = istft(stft(f, phi), phi, phi);
        CHECK(rel_l2(back, f) <= 1e-6);
    }

    SUBCASE("zero matrix gives the zero function") {
        STFTMatrix V;
        V.spec = kLine;
        V.values.assign(kLine.total() * kLine.total(), cplx(0.0, 0.0));
        const GridFunction z = istft(V, phi, phi);
        for (const cplx& v : z.values) CHECK(std::abs(v) == 0.0);
    }

    SUBCASE("mismatched analysis and synthesis windows") {
        const Window gamma = gaussian_window(kLine, 1.7);
        const GridFunction f = random_poly_gaussian(kLine, 78);
        const GridFunction back = istft(stft(f, phi), gamma, phi);
        CHECK(rel_l2(back, f) <= 1e-6);
    }

    SUBCASE("complex-phase window pair reconstructs exactly") {
        Window chirped;
        chirped.g = sample(kLine, [](const std::array<double, 3>& x) {
            return std::polar(std::exp(-0.5 * x[0] * x[0]), 0.7 * x[0]);
        });
        chirped.kind = "custom";
        const GridFunction f = random_poly_gaussian(kLine, 79);
        const GridFunction back = istft(stft(f, chirped), phi, chirped);
        CHECK(rel_l2(back, f) <= 1e-6);
    }

    SUBCASE("orthogonal pair is rejected") {
        Window odd;
        odd.g = make_function(kLine, R"({"kind":"poly_gaussian","width":1.0,"coeffs":[0.0,1.0]})");
        odd.kind = "custom";
        STFTMatrix V;
        V.spec = kLine;
        V.values.assign(kLine.total() * kLine.total(), cplx(0.0, 0.0));
        CHECK_THROWS_AS(istft(V, odd, phi), Error);
    }
}

TEST_CASE("stft covariance under translation") {
    const Window phi = gaussian_window(kLine, 1.0);
    const GridFunction f = random_poly_gaussian(kLine, 91);
    const std::array<int, 1> j0{11};
    const double x0 = j0[0] * kLine.dx;
    const STFTMatrix Vt = stft(translate_steps(f, j0), phi);
    const STFTMatrix V = stft(f, phi);
    double dev = 0.0;
    for (std::size_t xf = 0; xf < kLine.total(); ++xf) {
        const auto jx = kLine.offsets(xf);
        const std::array<int, 1> src{jx[0] - j0[0]};
        const std::size_t sf = kLine.flat_from_offsets(src);
        for (std::size_t mf = 0; mf < kLine.total(); ++mf) {
            const double xi = kLine.frequency(mf)[0];
            dev = std::max(dev,
                           std::abs(Vt.at(xf, mf) - std::polar(1.0, -xi * x0) * V.at(sf, mf)));
        }
    }
    CHECK(dev <= 1e-8);
}

TEST_CASE("window validation") {
    SUBCASE("Gaussian passes every claimed class") {
        const Window phi = gaussian_window(kLine, 1.0);
        for (double s : {0.5, 1.0, 2.0}) {
            const WindowDecayReport r = validate_window(phi, s);
            CHECK(r.pass);
            CHECK(r.space_epsilon > 0.0);
            CHECK(r.freq_epsilon > 0.0);
        }
    }

    SUBCASE("slowly decaying window fails") {
        Window bad;
        bad.g = sample(kLine, [](const std::array<double, 3>& x) {
            return cplx(1.0 / (1.0 + x[0] * x[0]), 0.0);
        });
        bad.kind = "custom";
        const WindowDecayReport r = validate_window(bad, 2.0);
        CHECK_FALSE(r.pass);
    }

    SUBCASE("zero window is rejected") {
        Window zero;
        zero.g.spec = kLine;
        zero.g.values.assign(kLine.total(), cplx(0.0, 0.0));
        CHECK_THROWS_AS(validate_window(zero, 1.0), Error);
    }
}

TEST_CASE("periodic coefficients") {
    const GridSpec box = make_grid(1, 512, 16.0 * kPi);
    // Gaussian window of width sigma, scaled so its 2 pi-translates sum to 1
    const double sigma = 6.5;
    Window part;
    part.g = sample(box, [sigma](const std::array<double, 3>& x) {
        const double amp = kTwoPi / (std::sqrt(2.0 * kPi) * sigma);
        return cplx(amp * std::exp(-x[0] * x[0] / (2.0 * sigma * sigma)), 0.0);
    });
    part.kind = "custom";

    SUBCASE("pure harmonic") {
        const GridFunction f =
            make_function(box, R"({"kind":"trig_poly","coeffs":[{"k":[1],"re":1.0}]})");
        const CoefficientTable t = periodic_coefficients(f, part, 2);
        CHECK(std::abs(t.at(std::array<int, 1>{1}) - cplx(1.0, 0.0)) <= 1e-8);
        for (int a : {-2, -1, 0, 2}) CHECK(std::abs(t.at(std::array<int, 1>{a})) <= 1e-8);
    }

    SUBCASE("cosine splits into two unit coefficients") {
        const GridFunction f = make_function(
            box, R"({"kind":"trig_poly","coeffs":[{"k":[1],"re":1.0},{"k":[-1],"re":1.0}]})");
        const CoefficientTable t = periodic_coefficients(f, part, 1);
        CHECK(std::abs(t.at(std::array<int, 1>{1}) - cplx(1.0, 0.0)) <= 1e-8);
        CHECK(std::abs(t.at(std::array<int, 1>{-1}) - cplx(1.0, 0.0)) <= 1e-8);
    }

    SUBCASE("random trigonometric polynomial is recovered") {
        Rng rng(2024);
        std::string desc = R"({"kind":"trig_poly","coeffs":[)";
        std::vector<cplx> coeffs(5);
        for (int k = -2; k <= 2; ++k) {
            coeffs[static_cast<std::size_t>(k + 2)] = cplx(rng.symmetric(), rng.symmetric());
            if (k > -2) desc += ",";
            desc += "{\"k\":[" + std::to_string(k) + "],\"re\":" +
                    std::to_string(coeffs[static_cast<std::size_t>(k + 2)].real()) + ",\"im\":" +
                    std::to_string(coeffs[static_cast<std::size_t>(k + 2)].imag()) + "}";
        }
        desc += "]}";
        const GridFunction f = make_function(box, desc);
        const CoefficientTable t = periodic_coefficients(f, part, 2);
        for (int k = -2; k <= 2; ++k)
            CHECK(std::abs(t.at(std::array<int, 1>{k}) -
                           coeffs[static_cast<std::size_t>(k + 2)]) <= 1e-6);
    }

    SUBCASE("window without the partition property is rejected") {
        const Window narrow = gaussian_window(box, 1.0);
        const GridFunction f =
            make_function(box, R"({"kind":"trig_poly","coeffs":[{"k":[1],"re":1.0}]})");
        CHECK_THROWS_AS(periodic_coefficients(f, narrow, 1), Error);
    }

    SUBCASE("non-periodic input is rejected") {
        const GridFunction f = make_function(box, R"({"kind":"gaussian","width":3.0})");
        CHECK_THROWS_AS(periodic_coefficients(f, part, 1), Error);
    }
}
