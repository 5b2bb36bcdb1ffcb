#include "tfmod/stft.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "json.hpp"

namespace tfmod {

namespace {

constexpr std::size_t kMaxStftEntries = std::size_t(1) << 22;  // 64 MiB of complex doubles

std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

double dot(const std::array<double, 3>& a, const std::array<double, 3>& b, int n) {
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += a[static_cast<std::size_t>(i)] * b[static_cast<std::size_t>(i)];
    return s;
}

std::size_t reflect_flat(const GridSpec& spec, std::size_t flat) {
    auto j = spec.offsets(flat);
    std::array<int, 3> r{-j[0], -j[1], -j[2]};
    return spec.flat_from_offsets(std::span<const int>(r.data(), static_cast<std::size_t>(spec.n)));
}

std::size_t shifted_flat(const GridSpec& spec, std::size_t flat, std::span<const int> delta) {
    auto j = spec.offsets(flat);
    std::array<int, 3> r{0, 0, 0};
    for (int i = 0; i < spec.n; ++i)
        r[static_cast<std::size_t>(i)] = j[static_cast<std::size_t>(i)] - delta[static_cast<std::size_t>(i)];
    return spec.flat_from_offsets(std::span<const int>(r.data(), static_cast<std::size_t>(spec.n)));
}

std::array<int, 3> steps_from_values(const GridSpec& spec, std::span<const double> v, double unit,
                                     const char* what) {
    require(static_cast<int>(v.size()) == spec.n, errc::invalid_argument,
            std::string(what) + ": dimension mismatch");
    std::array<int, 3> steps{0, 0, 0};
    for (int i = 0; i < spec.n; ++i) {
        const double raw = v[static_cast<std::size_t>(i)] / unit;
        const double rounded = std::round(raw);
        require(std::abs(raw - rounded) <= 1e-9 * std::max(1.0, std::abs(raw)), errc::precondition,
                std::string(what) + ": point is not on the grid");
        steps[static_cast<std::size_t>(i)] = static_cast<int>(rounded);
    }
    return steps;
}

}  // namespace

void Window::validate() const {
    g.validate();
    bool nonzero = false;
    for (const cplx& v : g.values)
        if (v != cplx(0.0, 0.0)) {
            nonzero = true;
            break;
        }
    require(nonzero, errc::precondition, "window: must be nonzero");
}

Window gaussian_window(const GridSpec& spec, double width, std::optional<double> gelfand_shilov_s) {
    require(width > 0.0, errc::invalid_argument, "gaussian_window: width must be positive");
    Window w;
    w.g = sample(spec, [&](const std::array<double, 3>& x) {
        double r2 = 0.0;
        for (int i = 0; i < spec.n; ++i) r2 += x[static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(i)];
        return cplx(std::exp(-r2 / (2.0 * width * width)), 0.0);
    });
    const double nrm = lp_norm(w.g, 2.0);
    for (cplx& v : w.g.values) v /= nrm;
    char buf[64];
    std::snprintf(buf, sizeof buf, "gaussian(%g)", width);
    w.kind = buf;
    w.gelfand_shilov_s = gelfand_shilov_s;
    return w;
}

namespace {

// On a bounded box the bound |g| <= C e^{-eps r^{1/s}} is vacuous for small
// eps, so the meaningful on-grid check is the decay *rate*: the profile
// predicts shell maxima falling by the factor (r2/r1)^{1/s} in log scale
// between radius r1 and r2. A shape decaying slower (e.g. polynomially)
// fails the rate; anything decaying at least as fast passes.
struct SideDecay {
    bool pass = false;
    double epsilon = 0.0;
    double log_C = 0.0;
};

SideDecay decay_rate_check(const GridSpec& spec, const std::vector<cplx>& vals, bool freq_side,
                           double s) {
    const double edge = freq_side ? (spec.N / 2) * spec.dxi : spec.L;
    double s0 = 0.0, s_mid = 0.0, s_hi = 0.0;
    for (std::size_t i = 0; i < vals.size(); ++i) {
        const auto pt = freq_side ? spec.frequency(i) : spec.point(i);
        double linf = 0.0;
        for (int ax = 0; ax < spec.n; ++ax)
            linf = std::max(linf, std::abs(pt[static_cast<std::size_t>(ax)]));
        const double a = std::abs(vals[i]);
        s0 = std::max(s0, a);
        if (linf >= 0.40 * edge && linf <= 0.50 * edge) s_mid = std::max(s_mid, a);
        if (linf >= 0.85 * edge && linf <= 0.95 * edge) s_hi = std::max(s_hi, a);
    }
    SideDecay out;
    out.log_C = s0 == 0.0 ? -std::numeric_limits<double>::infinity() : std::log(s0);

    const double r_mid = 0.45 * edge, r_hi = 0.90 * edge;
    // some absolute decay at the mid shell, at a token eps = 0.05
    const double min_drop = 0.05 * std::pow(r_mid, 1.0 / s);
    if (s_mid > s0 * std::exp(-min_drop)) return out;
    // below the transform noise floor the true decay is unmeasurable but
    // certainly at least this fast
    if (s_hi <= s0 * 1e-13) {
        out.pass = true;
        out.epsilon = 0.05;
        return out;
    }
    const double drop_mid = std::log(s0 / s_mid);
    const double drop_hi = std::log(s0 / s_hi);
    const double rate = drop_hi / drop_mid;
    const double claimed = std::pow(r_hi / r_mid, 1.0 / s);
    if (rate >= 0.95 * claimed) {
        out.pass = true;
        out.epsilon = drop_hi / std::pow(r_hi, 1.0 / s);
    }
    return out;
}

}  // namespace

WindowDecayReport validate_window(const Window& w, double s) {
    w.validate();
    require(s >= 0.5, errc::invalid_argument, "validate_window: class parameter must satisfy s >= 1/2");
    WindowDecayReport rep;
    const SpectralFunction What = forward_transform(w.g);
    const SideDecay space = decay_rate_check(w.g.spec, w.g.values, false, s);
    const SideDecay freq = decay_rate_check(w.g.spec, What.coefficients, true, s);
    rep.space_epsilon = space.epsilon;
    rep.space_log_C = space.log_C;
    rep.freq_epsilon = freq.epsilon;
    rep.freq_log_C = freq.log_C;
    rep.pass = space.pass && freq.pass;
    return rep;
}

cplx& STFTMatrix::at(std::size_t x_flat, std::size_t xi_flat) {
    return values[x_flat * spec.total() + xi_flat];
}
const cplx& STFTMatrix::at(std::size_t x_flat, std::size_t xi_flat) const {
    return values[x_flat * spec.total() + xi_flat];
}

double STFTMatrix::mixed_l2_norm() const {
    long double acc = 0.0L;
    for (const cplx& v : values) acc += static_cast<long double>(std::norm(v));
    const double cell = std::pow(spec.dx * spec.dxi, spec.n);
    return std::sqrt(static_cast<double>(acc) * cell);
}

GridFunction translate_steps(const GridFunction& f, std::span<const int> j0) {
    f.validate();
    require(static_cast<int>(j0.size()) == f.spec.n, errc::invalid_argument,
            "translate: dimension mismatch");
    GridFunction out;
    out.spec = f.spec;
    out.values.resize(f.values.size());
    for (std::size_t i = 0; i < f.values.size(); ++i)
        out.values[i] = f.values[shifted_flat(f.spec, i, j0)];
    return out;
}

GridFunction translate(const GridFunction& f, std::span<const double> x0) {
    const auto steps = steps_from_values(f.spec, x0, f.spec.dx, "translate");
    return translate_steps(f, std::span<const int>(steps.data(), static_cast<std::size_t>(f.spec.n)));
}

GridFunction modulate_steps(const GridFunction& f, std::span<const int> m0) {
    f.validate();
    require(static_cast<int>(m0.size()) == f.spec.n, errc::invalid_argument,
            "modulate: dimension mismatch");
    GridFunction out;
    out.spec = f.spec;
    out.values.resize(f.values.size());
    for (std::size_t i = 0; i < f.values.size(); ++i) {
        const auto x = f.spec.point(i);
        double phase = 0.0;
        for (int ax = 0; ax < f.spec.n; ++ax)
            phase += m0[static_cast<std::size_t>(ax)] * f.spec.dxi * x[static_cast<std::size_t>(ax)];
        out.values[i] = f.values[i] * std::polar(1.0, phase);
    }
    return out;
}

GridFunction modulate(const GridFunction& f, std::span<const double> xi0) {
    const auto steps = steps_from_values(f.spec, xi0, f.spec.dxi, "modulate");
    return modulate_steps(f, std::span<const int>(steps.data(), static_cast<std::size_t>(f.spec.n)));
}

GridFunction involution(const GridFunction& f) {
    f.validate();
    GridFunction out;
    out.spec = f.spec;
    out.values.resize(f.values.size());
    for (std::size_t i = 0; i < f.values.size(); ++i)
        out.values[i] = std::conj(f.values[reflect_flat(f.spec, i)]);
    return out;
}

cplx inner_product(const GridFunction& a, const GridFunction& b) {
    require(a.spec == b.spec, errc::precondition, "inner_product: grid spec mismatch");
    long double re = 0.0L, im = 0.0L;
    for (std::size_t i = 0; i < a.values.size(); ++i) {
        const cplx t = a.values[i] * std::conj(b.values[i]);
        re += t.real();
        im += t.imag();
    }
    const double cell = std::pow(a.spec.dx, a.spec.n);
    return cplx(static_cast<double>(re) * cell, static_cast<double>(im) * cell);
}

STFTMatrix stft(const GridFunction& f, const Window& phi) {
    f.validate();
    phi.validate();
    require(f.spec == phi.g.spec, errc::precondition, "stft: grid spec mismatch");
    const std::size_t total = f.spec.total();
    require(total * total <= kMaxStftEntries, errc::invalid_argument,
            "stft: matrix would exceed the memory guard");
    STFTMatrix V;
    V.spec = f.spec;
    V.values.resize(total * total);
    parallel_for(total, [&](std::size_t xf) {
        const auto jx = f.spec.offsets(xf);
        GridFunction h;
        h.spec = f.spec;
        h.values.resize(total);
        for (std::size_t s = 0; s < total; ++s) {
            const std::size_t shifted = shifted_flat(
                f.spec, s, std::span<const int>(jx.data(), static_cast<std::size_t>(f.spec.n)));
            h.values[s] = f.values[s] * std::conj(phi.g.values[shifted]);
        }
        const SpectralFunction col = forward_transform(h);
        std::copy(col.coefficients.begin(), col.coefficients.end(),
                  V.values.begin() + static_cast<std::ptrdiff_t>(xf * total));
    });
    return V;
}

namespace {

GridSpec dual_spec(const GridSpec& spec) {
    // Swaps the roles of x and xi: spacing dxi becomes the step of the
    // "space" grid, whose own frequency step is then dx again.
    return make_grid(spec.n, spec.N, 0.5 * spec.N * spec.dxi);
}

}  // namespace

STFTMatrix stft_spectral(const GridFunction& f, const Window& phi) {
    f.validate();
    phi.validate();
    require(f.spec == phi.g.spec, errc::precondition, "stft_spectral: grid spec mismatch");
    const GridSpec dual = dual_spec(f.spec);
    GridFunction fhat{dual, forward_transform(f).coefficients};
    Window phihat;
    phihat.g = GridFunction{dual, forward_transform(phi.g).coefficients};
    phihat.kind = phi.kind;
    const STFTMatrix W = stft(fhat, phihat);  // V_{phi^} f^ on the dual grid

    const std::size_t total = f.spec.total();
    STFTMatrix V;
    V.spec = f.spec;
    V.values.resize(total * total);
    parallel_for(total, [&](std::size_t xf) {
        const auto x = f.spec.point(xf);
        const std::size_t neg_x = reflect_flat(f.spec, xf);
        for (std::size_t mf = 0; mf < total; ++mf) {
            const auto xi = f.spec.frequency(mf);
            const double phase = -dot(x, xi, f.spec.n);
            V.at(xf, mf) = std::polar(1.0, phase) * W.at(mf, neg_x);
        }
    });
    return V;
}

double IdentityReport::max_deviation() const {
    return std::max({dev_inner, dev_spectral_fourier, dev_spectral_stft, dev_conv_space,
                     dev_conv_freq});
}

IdentityReport verify_identities(const GridFunction& f, const Window& phi, const Window& gamma,
                                 std::uint64_t seed) {
    f.validate();
    phi.validate();
    gamma.validate();
    require(f.spec == phi.g.spec && f.spec == gamma.g.spec, errc::precondition,
            "verify_identities: grid spec mismatch");
    const cplx pairing = inner_product(gamma.g, phi.g);
    require(std::abs(pairing) >= 1e-8, errc::precondition,
            "verify_identities: window pair is numerically orthogonal");

    const GridSpec& spec = f.spec;
    const std::size_t total = spec.total();
    const int n = spec.n;
    const double uf = unitary_factor(n);
    const double cell_x = std::pow(spec.dx, n);
    const double cell_xi = std::pow(spec.dxi, n);

    const STFTMatrix base = stft(f, phi);
    const SpectralFunction fhat = forward_transform(f);
    const SpectralFunction phihat = forward_transform(phi.g);

    IdentityReport rep;

    // Spectral-side windowed transform, full matrix: one column per xi.
    {
        std::vector<double> col_dev(total, 0.0);
        parallel_for(total, [&](std::size_t mf) {
            const auto mxi = spec.offsets(mf);
            SpectralFunction g;
            g.spec = spec;
            g.coefficients.resize(total);
            for (std::size_t u = 0; u < total; ++u) {
                const std::size_t shifted = shifted_flat(
                    spec, u, std::span<const int>(mxi.data(), static_cast<std::size_t>(n)));
                g.coefficients[u] = fhat.coefficients[u] * std::conj(phihat.coefficients[shifted]);
            }
            const GridFunction col = inverse_transform(g);
            const auto xi = spec.frequency(mf);
            double dev = 0.0;
            for (std::size_t xf = 0; xf < total; ++xf) {
                const auto x = spec.point(xf);
                const cplx v = std::polar(1.0, -dot(x, xi, n)) * col.values[xf];
                dev = std::max(dev, std::abs(v - base.at(xf, mf)));
            }
            col_dev[mf] = dev;
        });
        rep.dev_spectral_fourier = *std::max_element(col_dev.begin(), col_dev.end());
    }

    // Spectral-side STFT, full matrix.
    {
        const STFTMatrix alt = stft_spectral(f, phi);
        double dev = 0.0;
        for (std::size_t i = 0; i < alt.values.size(); ++i)
            dev = std::max(dev, std::abs(alt.values[i] - base.values[i]));
        rep.dev_spectral_stft = dev;
    }

    // Sampled deterministic phase-space points for the direct-sum forms.
    std::uint64_t state = seed * 0x9e3779b97f4a7c15ULL + 1;
    std::vector<std::pair<std::size_t, std::size_t>> pts;
    for (int i = 0; i < 10; ++i)
        pts.emplace_back(splitmix64(state) % total, splitmix64(state) % total);

    const GridFunction phi_star = involution(phi.g);
    const SpectralFunction phihat_star_sf{spec, [&] {
                                              GridFunction tmp{spec, phihat.coefficients};
                                              return involution(tmp).values;
                                          }()};

    for (const auto& [xf, mf] : pts) {
        const auto x = spec.point(xf);
        const auto xi = spec.frequency(mf);
        const auto jx = spec.offsets(xf);
        const cplx ref = base.at(xf, mf);

        // inner-product form (f, M_xi T_x phi)
        cplx acc(0.0, 0.0);
        for (std::size_t s = 0; s < total; ++s) {
            const auto xs = spec.point(s);
            const std::size_t shifted =
                shifted_flat(spec, s, std::span<const int>(jx.data(), static_cast<std::size_t>(n)));
            acc += f.values[s] *
                   std::conj(std::polar(1.0, dot(xi, xs, n)) * phi.g.values[shifted]);
        }
        rep.dev_inner = std::max(rep.dev_inner, std::abs(uf * cell_x * acc - ref));

        // convolution form in x: (2pi)^{-n/2} e^{-i x.xi} (f * M_xi phi*)(x)
        acc = cplx(0.0, 0.0);
        for (std::size_t s = 0; s < total; ++s) {
            const auto js = spec.offsets(s);
            const std::size_t diff =
                shifted_flat(spec, xf, std::span<const int>(js.data(), static_cast<std::size_t>(n)));
            const auto xd = spec.point(diff);
            acc += f.values[s] * std::polar(1.0, dot(xi, xd, n)) * phi_star.values[diff];
        }
        rep.dev_conv_space = std::max(
            rep.dev_conv_space,
            std::abs(uf * cell_x * std::polar(1.0, -dot(x, xi, n)) * acc - ref));

        // convolution form in xi: (2pi)^{-n/2} (f^ * M_{-x} phi^*)(xi)
        acc = cplx(0.0, 0.0);
        for (std::size_t u = 0; u < total; ++u) {
            const auto mu = spec.offsets(u);
            const std::size_t diff = shifted_flat(
                spec, mf, std::span<const int>(mu.data(), static_cast<std::size_t>(n)));
            const auto om = spec.frequency(diff);
            acc += fhat.coefficients[u] * std::polar(1.0, -dot(x, om, n)) *
                   phihat_star_sf.coefficients[diff];
        }
        rep.dev_conv_freq =
            std::max(rep.dev_conv_freq, std::abs(uf * cell_xi * acc - ref));
    }

    // Convolution domination with phi_0 = phi:
    // |V_phi f| <= (2pi)^{-n/2} |<gamma,phi>|^{-1} (|V_phi f| * |V_phi gamma|).
    {
        const STFTMatrix Vg = stft(gamma.g, phi);
        double margin = std::numeric_limits<double>::infinity();
        for (const auto& [xf, mf] : pts) {
            long double conv = 0.0L;
            for (std::size_t yf = 0; yf < total; ++yf) {
                const auto jy = spec.offsets(yf);
                const std::size_t dx_flat = shifted_flat(
                    spec, xf, std::span<const int>(jy.data(), static_cast<std::size_t>(n)));
                for (std::size_t ef = 0; ef < total; ++ef) {
                    const auto me = spec.offsets(ef);
                    const std::size_t dxi_flat = shifted_flat(
                        spec, mf, std::span<const int>(me.data(), static_cast<std::size_t>(n)));
                    conv += static_cast<long double>(std::abs(base.at(yf, ef))) *
                            std::abs(Vg.at(dx_flat, dxi_flat));
                }
            }
            const double rhs = uf / std::abs(pairing) * static_cast<double>(conv) * cell_x * cell_xi;
            const double lhs = std::abs(base.at(xf, mf));
            margin = std::min(margin, rhs - lhs);
        }
        rep.domination_margin = margin;
    }

    return rep;
}

GridFunction istft(const STFTMatrix& V, const Window& gamma, const Window& phi) {
    gamma.validate();
    phi.validate();
    require(V.spec == gamma.g.spec && V.spec == phi.g.spec, errc::precondition,
            "istft: grid spec mismatch");
    const cplx pairing = inner_product(gamma.g, phi.g);
    require(std::abs(pairing) >= 1e-8, errc::precondition,
            "istft: window pair is numerically orthogonal");

    const GridSpec& spec = V.spec;
    const std::size_t total = spec.total();
    const double cell_x = std::pow(spec.dx, spec.n);
    GridFunction out;
    out.spec = spec;
    out.values.assign(total, cplx(0.0, 0.0));
    SpectralFunction col;
    col.spec = spec;
    col.coefficients.resize(total);
    for (std::size_t xf = 0; xf < total; ++xf) {
        std::copy(V.values.begin() + static_cast<std::ptrdiff_t>(xf * total),
                  V.values.begin() + static_cast<std::ptrdiff_t>((xf + 1) * total),
                  col.coefficients.begin());
        const GridFunction w = inverse_transform(col);
        const auto jx = spec.offsets(xf);
        for (std::size_t t = 0; t < total; ++t) {
            const std::size_t shifted = shifted_flat(
                spec, t, std::span<const int>(jx.data(), static_cast<std::size_t>(spec.n)));
            out.values[t] += cell_x * w.values[t] * gamma.g.values[shifted];
        }
    }
    for (cplx& v : out.values) v /= pairing;
    return out;
}

cplx CoefficientTable::at(std::span<const int> alpha) const {
    require(static_cast<int>(alpha.size()) == n, errc::invalid_argument,
            "coefficient table: dimension mismatch");
    std::size_t flat = 0;
    const std::size_t side = static_cast<std::size_t>(2 * alpha_max + 1);
    for (int i = 0; i < n; ++i) {
        const int a = alpha[static_cast<std::size_t>(i)];
        require(std::abs(a) <= alpha_max, errc::invalid_argument,
                "coefficient table: index out of range");
        flat = flat * side + static_cast<std::size_t>(a + alpha_max);
    }
    return c[flat];
}

CoefficientTable periodic_coefficients(const GridFunction& f, const Window& phi, int alpha_max) {
    f.validate();
    phi.validate();
    require(f.spec == phi.g.spec, errc::precondition, "periodic_coefficients: grid spec mismatch");
    require(alpha_max >= 0, errc::invalid_argument, "periodic_coefficients: alpha_max must be >= 0");
    const GridSpec& spec = f.spec;
    const int M = spec.lattice_steps_per_unit();
    require(spec.N % M == 0, errc::precondition,
            "periodic_coefficients: 2 pi must be a whole number of grid steps");
    const int steps_2pi = spec.N / M;
    const std::size_t total = spec.total();

    // Partition check: the 2 pi-translates of the window must sum to 1.
    {
        std::vector<double> partition(total, 0.0);
        std::array<int, 3> shift{0, 0, 0};
        const int copies = M;
        std::array<int, 3> a{0, 0, 0};
        for (;;) {
            for (int i = 0; i < spec.n; ++i) shift[static_cast<std::size_t>(i)] = a[static_cast<std::size_t>(i)] * steps_2pi;
            for (std::size_t j = 0; j < total; ++j) {
                const std::size_t src = shifted_flat(
                    spec, j, std::span<const int>(shift.data(), static_cast<std::size_t>(spec.n)));
                partition[j] += phi.g.values[src].real();
            }
            int axis = spec.n - 1;
            while (axis >= 0 && ++a[static_cast<std::size_t>(axis)] == copies) {
                a[static_cast<std::size_t>(axis)] = 0;
                --axis;
            }
            if (axis < 0) break;
        }
        double dev = 0.0;
        for (std::size_t j = 0; j < total; ++j) dev = std::max(dev, std::abs(partition[j] - 1.0));
        require(dev <= 1e-6, errc::precondition,
                "periodic_coefficients: window translates do not form a partition of unity");
    }

    // Periodicity check along each axis.
    {
        double fmax = 0.0;
        for (const cplx& v : f.values) fmax = std::max(fmax, std::abs(v));
        for (int axis = 0; axis < spec.n; ++axis) {
            std::array<int, 3> shift{0, 0, 0};
            shift[static_cast<std::size_t>(axis)] = steps_2pi;
            double dev = 0.0;
            for (std::size_t j = 0; j < total; ++j) {
                const std::size_t src = shifted_flat(
                    spec, j, std::span<const int>(shift.data(), static_cast<std::size_t>(spec.n)));
                dev = std::max(dev, std::abs(f.values[j] - f.values[src]));
            }
            require(dev <= 1e-8 * std::max(1.0, fmax), errc::precondition,
                    "periodic_coefficients: input is not 2 pi-periodic");
        }
    }

    CoefficientTable table;
    table.n = spec.n;
    table.alpha_max = alpha_max;
    const std::size_t side = static_cast<std::size_t>(2 * alpha_max + 1);
    std::size_t count = 1;
    for (int i = 0; i < spec.n; ++i) count *= side;
    table.c.resize(count);

    const double cell = std::pow(spec.dx, spec.n);
    const double scale = std::pow(kTwoPi, -spec.n);
    parallel_for(count, [&](std::size_t ci) {
        std::array<int, 3> alpha{0, 0, 0};
        std::size_t rem = ci;
        for (int i = spec.n - 1; i >= 0; --i) {
            alpha[static_cast<std::size_t>(i)] = static_cast<int>(rem % side) - alpha_max;
            rem /= side;
        }
        cplx acc(0.0, 0.0);
        for (std::size_t j = 0; j < total; ++j) {
            const auto x = spec.point(j);
            double phase = 0.0;
            for (int i = 0; i < spec.n; ++i) phase += alpha[static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(i)];
            acc += f.values[j] * phi.g.values[j] * std::polar(1.0, -phase);
        }
        table.c[ci] = scale * cell * acc;
    });
    return table;
}

void save_csv(const STFTMatrix& V, const Window& phi, const std::string& csv_path,
              const std::string& json_header_path) {
    std::ofstream csv(csv_path);
    require(csv.good(), errc::io, "save_csv: cannot open " + csv_path);
    const int n = V.spec.n;
    for (int i = 0; i < n; ++i) csv << "x" << i << ",";
    for (int i = 0; i < n; ++i) csv << "xi" << i << ",";
    csv << "re,im\n";
    const std::size_t total = V.spec.total();
    char buf[64];
    for (std::size_t xf = 0; xf < total; ++xf) {
        const auto jx = V.spec.offsets(xf);
        for (std::size_t mf = 0; mf < total; ++mf) {
            const auto mm = V.spec.offsets(mf);
            for (int i = 0; i < n; ++i) csv << jx[static_cast<std::size_t>(i)] << ",";
            for (int i = 0; i < n; ++i) csv << mm[static_cast<std::size_t>(i)] << ",";
            const cplx v = V.at(xf, mf);
            std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", v.real(), v.imag());
            csv << buf;
        }
    }
    require(csv.good(), errc::io, "save_csv: write failure on " + csv_path);

    nlohmann::ordered_json header;
    header["grid"] = {{"n", V.spec.n}, {"N", V.spec.N}, {"L", V.spec.L},
                      {"L_over_pi", V.spec.L / kPi}};
    header["window"] = {{"kind", phi.kind}};
    if (phi.gelfand_shilov_s) header["window"]["gelfand_shilov_s"] = *phi.gelfand_shilov_s;
    std::ofstream js(json_header_path);
    require(js.good(), errc::io, "save_csv: cannot open " + json_header_path);
    js << header.dump(2) << "\n";
    require(js.good(), errc::io, "save_csv: write failure on " + json_header_path);
}

}  // namespace tfmod
