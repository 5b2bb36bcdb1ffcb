#include "tfmod/decomposition.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>

namespace tfmod {

namespace {

double psi(double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; }

}  // namespace

double BumpProfile::operator()(double t) const {
    const double a = std::abs(t);
    if (a <= 0.5) return 1.0;
    if (a >= 1.0) return 0.0;
    const double up = psi(2.0 * (1.0 - a));
    const double down = psi(2.0 * a - 1.0);
    return up / (up + down);
}

BumpProfile build_bump() { return BumpProfile{}; }

namespace {

double rho_tensor(const BumpProfile& h, const double* y, int n) {
    double v = 1.0;
    for (int i = 0; i < n; ++i) v *= h(y[i]);
    return v;
}

// sigma_0 evaluated at y: rho(y) / sum over the integer neighbors l with
// |y - l|_inf < 1. Evaluating every band as sigma_0(xi - k) makes the shift
// structure sigma_k(xi) = sigma_0(xi - k) hold by construction.
double sigma0(const BumpProfile& h, const double* y, int n) {
    const double num = rho_tensor(h, y, n);
    if (num == 0.0) return 0.0;
    double denom = 0.0;
    std::array<int, 3> l{0, 0, 0};
    std::array<int, 3> lo{0, 0, 0}, hi{0, 0, 0};
    for (int i = 0; i < n; ++i) {
        lo[static_cast<std::size_t>(i)] = static_cast<int>(std::floor(y[i])) - 1;
        hi[static_cast<std::size_t>(i)] = static_cast<int>(std::floor(y[i])) + 1;
    }
    l = lo;
    for (;;) {
        double shifted[3];
        for (int i = 0; i < n; ++i) shifted[i] = y[i] - l[static_cast<std::size_t>(i)];
        denom += rho_tensor(h, shifted, n);
        int axis = n - 1;
        while (axis >= 0 && ++l[static_cast<std::size_t>(axis)] > hi[static_cast<std::size_t>(axis)]) {
            l[static_cast<std::size_t>(axis)] = lo[static_cast<std::size_t>(axis)];
            --axis;
        }
        if (axis < 0) break;
    }
    return num / denom;
}

}  // namespace

const DecompositionFamily::Band& DecompositionFamily::band(std::span<const int> k) const {
    require(static_cast<int>(k.size()) == spec.n, errc::invalid_argument,
            "decomposition: band index dimension mismatch");
    for (int i = 0; i < spec.n; ++i)
        require(std::abs(k[static_cast<std::size_t>(i)]) <= K, errc::precondition,
                "decomposition: band index outside truncation radius");
    for (const Band& b : bands) {
        bool match = true;
        for (int i = 0; i < spec.n; ++i)
            if (b.k[static_cast<std::size_t>(i)] != k[static_cast<std::size_t>(i)]) {
                match = false;
                break;
            }
        if (match) return b;
    }
    fail(errc::precondition, "decomposition: band not found");
}

DecompositionFamily build_sigma(const GridSpec& spec, int K) {
    require(K >= 1, errc::invalid_argument, "build_sigma: K must be >= 1");
    const int M = spec.lattice_steps_per_unit();
    require(spec.N / 2 >= M * (K + 1) + 1, errc::precondition,
            "build_sigma: insufficient lattice coverage (need N/2 >= (K+1) L/pi + 1)");

    const BumpProfile h = build_bump();
    DecompositionFamily D;
    D.spec = spec;
    D.K = K;

    std::vector<std::array<int, 3>> ks;
    {
        std::array<int, 3> k{0, 0, 0};
        for (int i = 0; i < spec.n; ++i) k[static_cast<std::size_t>(i)] = -K;
        for (;;) {
            ks.push_back(k);
            int axis = spec.n - 1;
            while (axis >= 0 && ++k[static_cast<std::size_t>(axis)] > K) {
                k[static_cast<std::size_t>(axis)] = -K;
                --axis;
            }
            if (axis < 0) break;
        }
        std::sort(ks.begin(), ks.end(), [&](const auto& a, const auto& b) {
            long ra = 0, rb = 0;
            for (int i = 0; i < spec.n; ++i) {
                ra += static_cast<long>(a[static_cast<std::size_t>(i)]) * a[static_cast<std::size_t>(i)];
                rb += static_cast<long>(b[static_cast<std::size_t>(i)]) * b[static_cast<std::size_t>(i)];
            }
            if (ra != rb) return ra < rb;
            return a < b;
        });
    }

    D.bands.reserve(ks.size());
    for (const auto& k : ks) {
        DecompositionFamily::Band band;
        band.k = k;
        // support: lattice offsets m with |m/M - k_i| < 1 per axis
        std::array<int, 3> lo{0, 0, 0}, hi{0, 0, 0}, m{0, 0, 0};
        for (int i = 0; i < spec.n; ++i) {
            lo[static_cast<std::size_t>(i)] = k[static_cast<std::size_t>(i)] * M - (M - 1);
            hi[static_cast<std::size_t>(i)] = k[static_cast<std::size_t>(i)] * M + (M - 1);
        }
        m = lo;
        for (;;) {
            double y[3];
            for (int i = 0; i < spec.n; ++i)
                y[i] = static_cast<double>(m[static_cast<std::size_t>(i)]) / M - k[static_cast<std::size_t>(i)];
            const double v = sigma0(h, y, spec.n);
            if (v != 0.0) {
                const std::size_t flat = spec.flat_from_offsets(
                    std::span<const int>(m.data(), static_cast<std::size_t>(spec.n)));
                band.entries.emplace_back(flat, v);
            }
            int axis = spec.n - 1;
            while (axis >= 0 && ++m[static_cast<std::size_t>(axis)] > hi[static_cast<std::size_t>(axis)]) {
                m[static_cast<std::size_t>(axis)] = lo[static_cast<std::size_t>(axis)];
                --axis;
            }
            if (axis < 0) break;
        }
        std::sort(band.entries.begin(), band.entries.end());
        D.bands.push_back(std::move(band));
    }
    return D;
}

double partition_residual(const DecompositionFamily& D) {
    std::map<std::size_t, double> sums;
    for (const auto& band : D.bands)
        for (const auto& [flat, v] : band.entries) sums[flat] += v;
    const double rad = D.covered_radius();
    double dev = 0.0;
    for (std::size_t flat = 0; flat < D.spec.total(); ++flat) {
        const auto xi = D.spec.frequency(flat);
        double linf = 0.0;
        for (int i = 0; i < D.spec.n; ++i) linf = std::max(linf, std::abs(xi[static_cast<std::size_t>(i)]));
        if (linf > rad + 1e-12) continue;
        const auto it = sums.find(flat);
        const double s = it == sums.end() ? 0.0 : it->second;
        dev = std::max(dev, std::abs(s - 1.0));
    }
    return dev;
}

GridFunction box_apply_spectrum(const SpectralFunction& F, std::span<const int> k,
                                const DecompositionFamily& D) {
    require(F.spec == D.spec, errc::precondition, "box_apply: grid spec mismatch");
    const auto& band = D.band(k);
    SpectralFunction G;
    G.spec = F.spec;
    G.coefficients.assign(F.coefficients.size(), cplx(0.0, 0.0));
    for (const auto& [flat, v] : band.entries) G.coefficients[flat] = v * F.coefficients[flat];
    return inverse_transform(G);
}

GridFunction box_apply(const GridFunction& f, std::span<const int> k,
                       const DecompositionFamily& D) {
    return box_apply_spectrum(forward_transform(f), k, D);
}

BernsteinReport bernstein_margin(const SpectralFunction& multiplier, const GridFunction& f,
                                 double s) {
    require(multiplier.spec == f.spec, errc::precondition, "bernstein_margin: grid spec mismatch");
    require(s > 0.5 * f.spec.n, errc::precondition,
            "bernstein_margin: Sobolev index must satisfy s > n/2");

    const GridSpec& spec = f.spec;
    SpectralFunction filtered = forward_transform(f);
    for (std::size_t i = 0; i < filtered.coefficients.size(); ++i)
        filtered.coefficients[i] *= multiplier.coefficients[i];
    const GridFunction lhs_fn = inverse_transform(filtered);

    // H^s norm of the multiplier over the frequency box, via the dual grid.
    const GridSpec dual = make_grid(spec.n, spec.N, 0.5 * spec.N * spec.dxi);
    const GridFunction mult_dual{dual, multiplier.coefficients};
    const SpectralFunction mult_hat = forward_transform(mult_dual);
    long double acc = 0.0L;
    for (std::size_t i = 0; i < mult_hat.coefficients.size(); ++i) {
        const auto t = dual.frequency(i);
        double r2 = 0.0;
        for (int ax = 0; ax < dual.n; ++ax) r2 += t[static_cast<std::size_t>(ax)] * t[static_cast<std::size_t>(ax)];
        acc += std::pow(1.0 + r2, s) * static_cast<long double>(std::norm(mult_hat.coefficients[i]));
    }
    BernsteinReport rep;
    rep.hs_norm = std::sqrt(static_cast<double>(acc) * std::pow(dual.dxi, dual.n));

    const double rs[3] = {1.0, 2.0, std::numeric_limits<double>::infinity()};
    for (int i = 0; i < 3; ++i) {
        rep.lhs[static_cast<std::size_t>(i)] = lp_norm(lhs_fn, rs[i]);
        rep.bound[static_cast<std::size_t>(i)] = rep.hs_norm * lp_norm(f, rs[i]);
        rep.ratio[static_cast<std::size_t>(i)] =
            rep.bound[static_cast<std::size_t>(i)] == 0.0
                ? 0.0
                : rep.lhs[static_cast<std::size_t>(i)] / rep.bound[static_cast<std::size_t>(i)];
    }
    return rep;
}

void save_csv(const DecompositionFamily& D, const std::string& path) {
    std::ofstream csv(path);
    require(csv.good(), errc::io, "save_csv: cannot open " + path);
    const int n = D.spec.n;
    for (int i = 0; i < n; ++i) csv << "k" << i << ",";
    for (int i = 0; i < n; ++i) csv << "m" << i << ",";
    csv << "sigma\n";
    char buf[40];
    for (const auto& band : D.bands) {
        for (const auto& [flat, v] : band.entries) {
            const auto m = D.spec.offsets(flat);
            for (int i = 0; i < n; ++i) csv << band.k[static_cast<std::size_t>(i)] << ",";
            for (int i = 0; i < n; ++i) csv << m[static_cast<std::size_t>(i)] << ",";
            std::snprintf(buf, sizeof buf, "%.17g\n", v);
            csv << buf;
        }
    }
    require(csv.good(), errc::io, "save_csv: write failure on " + path);
}

}  // namespace tfmod
