#include "tfmod/verify.hpp"

#include <cmath>

#include "json.hpp"
#include "tfmod/algebra.hpp"
#include "tfmod/functions.hpp"
#include "tfmod/wave.hpp"

namespace tfmod {

namespace {

using nlohmann::ordered_json;

struct SuiteBuilder {
    ordered_json suites = ordered_json::array();
    bool all_pass = true;

    ordered_json* current = nullptr;

    void begin(const std::string& name) {
        suites.push_back({{"name", name}, {"checks", ordered_json::array()}, {"pass", true}});
        current = &suites.back();
    }

    // `ok` is observed <=> tolerance satisfied; direction encoded by caller.
    void check(const std::string& name, double tolerance, double observed, bool ok) {
        (*current)["checks"].push_back(
            {{"name", name}, {"tolerance", tolerance}, {"observed", observed}, {"pass", ok}});
        if (!ok) {
            (*current)["pass"] = false;
            all_pass = false;
        }
    }

    void check_le(const std::string& name, double observed, double tolerance) {
        check(name, tolerance, observed, observed <= tolerance);
    }
    void check_ge(const std::string& name, double observed, double floor_value) {
        check(name, floor_value, observed, observed >= floor_value);
    }
};

Window window_from_descriptor(const GridSpec& spec, const std::string& descriptor) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(descriptor);
    } catch (const std::exception& e) {
        fail(errc::invalid_argument, std::string("window descriptor: bad JSON: ") + e.what());
    }
    if (j.value("kind", "") == "gaussian") {
        std::optional<double> s;
        if (j.contains("gelfand_shilov_s")) s = j["gelfand_shilov_s"].get<double>();
        return gaussian_window(spec, j.value("width", 1.0), s);
    }
    Window w;
    w.g = make_function(spec, descriptor);
    w.kind = "custom";
    w.validate();
    return w;
}

double rel_l2_error(const GridFunction& a, const GridFunction& b) {
    require(a.spec == b.spec, errc::precondition, "rel_l2_error: spec mismatch");
    GridFunction d;
    d.spec = a.spec;
    d.values.resize(a.values.size());
    for (std::size_t i = 0; i < a.values.size(); ++i) d.values[i] = a.values[i] - b.values[i];
    const double nb = lp_norm(b, 2.0);
    return nb == 0.0 ? lp_norm(d, 2.0) : lp_norm(d, 2.0) / nb;
}

}  // namespace

VerifyConfig VerifyConfig::from_json(const std::string& json_text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const std::exception& e) {
        fail(errc::invalid_argument, std::string("verify config: bad JSON: ") + e.what());
    }
    VerifyConfig c;
    c.n = j.value("n", c.n);
    c.N = j.value("N", c.N);
    c.L_over_pi = j.value("L_over_pi", c.L_over_pi);
    c.K = j.value("K", c.K);
    c.p = j.value("p", c.p);
    c.q = j.value("q", c.q);
    c.seed = j.value("seed", c.seed);
    if (j.contains("weight")) c.weight = WeightSpec::parse(j["weight"].get<std::string>());
    if (j.contains("window")) c.window_descriptor = j["window"].dump();
    c.validate();
    return c;
}

void VerifyConfig::validate() const {
    (void)make_grid(n, N, L_over_pi * kPi);
    NormParams params{p, q, weight};
    params.validate();
    require(K >= 1, errc::invalid_argument, "verify config: K must be >= 1");
}

std::string run_verify(const VerifyConfig& config, bool* all_pass) {
    config.validate();
    SuiteBuilder rep;

    // 1-D suites run on the configured grid when it is one-dimensional,
    // otherwise on the reference line grid.
    const GridSpec line = config.n == 1 ? make_grid(1, config.N, config.L_over_pi * kPi)
                                        : make_grid(1, 256, 8.0 * kPi);
    require(line.N / 2 >= line.lattice_steps_per_unit() * (config.K + 1) + 1, errc::invalid_argument,
            "verify config: frequency grid does not cover the decomposition lattice");
    const Window phi = window_from_descriptor(line, config.window_descriptor);

    // --- Fourier transform suite -------------------------------------------------
    {
        rep.begin("fourier_transform");
        const GridFunction f = random_bandlimited(line, config.seed, 6, false);
        const GridFunction back = inverse_transform(forward_transform(f));
        rep.check_le("roundtrip_rel_l2", rel_l2_error(back, f), 1e-12);

        const GridFunction gauss = make_function(line, R"({"kind":"gaussian","width":1.0})");
        const SpectralFunction G = forward_transform(gauss);
        double dev = 0.0;
        for (std::size_t i = 0; i < G.coefficients.size(); ++i) {
            const double xi = line.frequency(i)[0];
            dev = std::max(dev, std::abs(G.coefficients[i] - cplx(std::exp(-0.5 * xi * xi), 0.0)));
        }
        rep.check_le("gaussian_selfdual_max_abs", dev, 1e-10);

        long double spec_mass = 0.0L;
        for (const cplx& c : G.coefficients) spec_mass += std::norm(c);
        const double parseval =
            std::abs(std::sqrt(static_cast<double>(spec_mass) * line.dxi) - lp_norm(gauss, 2.0)) /
            lp_norm(gauss, 2.0);
        rep.check_le("parseval_rel", parseval, 1e-10);

        const GridFunction g2 = random_bandlimited(line, config.seed + 7, 6, false);
        SpectralFunction lin = forward_transform(f);
        const SpectralFunction F2 = forward_transform(g2);
        GridFunction combo;
        combo.spec = line;
        combo.values.resize(line.total());
        const cplx alpha(0.3, -1.2), beta(-2.0, 0.7);
        for (std::size_t i = 0; i < combo.values.size(); ++i)
            combo.values[i] = alpha * f.values[i] + beta * g2.values[i];
        const SpectralFunction Fc = forward_transform(combo);
        double lin_dev = 0.0, scale = 0.0;
        for (std::size_t i = 0; i < Fc.coefficients.size(); ++i) {
            lin_dev = std::max(lin_dev, std::abs(Fc.coefficients[i] - alpha * lin.coefficients[i] -
                                                 beta * F2.coefficients[i]));
            scale = std::max(scale, std::abs(Fc.coefficients[i]));
        }
        rep.check_le("linearity_rel", scale == 0.0 ? 0.0 : lin_dev / scale, 1e-13);

        const std::array<int, 1> shift{24};
        const GridFunction tf = translate_steps(f, shift);
        const SpectralFunction Ft = forward_transform(tf);
        double ex_dev = 0.0;
        const double x0 = shift[0] * line.dx;
        for (std::size_t i = 0; i < Ft.coefficients.size(); ++i) {
            const double xi = line.frequency(i)[0];
            ex_dev = std::max(ex_dev, std::abs(Ft.coefficients[i] -
                                               std::polar(1.0, -xi * x0) * lin.coefficients[i]));
        }
        rep.check_le("shift_modulation_exchange", ex_dev, 1e-10);
    }

    // --- STFT identity suite -----------------------------------------------------
    {
        rep.begin("stft_identities");
        struct Pair {
            std::string f_desc;
            double w_phi, w_gamma;
        };
        const Pair pairs[5] = {
            {R"({"kind":"gaussian","width":1.0})", 1.0, 1.0},
            {R"({"kind":"poly_gaussian","width":1.1,"coeffs":[0.4,-1.0,0.3]})", 1.0, 1.5},
            {R"({"kind":"random_bandlimited","seed":11,"K":4})", 1.0, 0.8},
            {R"({"kind":"modulated_gaussian","width":1.3,"xi":[2.0],"x0":[1.0]})", 1.2, 1.0},
            {R"({"kind":"poly_gaussian","width":0.9,"coeffs":[0.0,0.5,0.0,-0.2]})", 0.9, 1.1},
        };
        double worst_dev = 0.0, worst_margin = kInf;
        for (int i = 0; i < 5; ++i) {
            const GridFunction f = make_function(line, pairs[i].f_desc);
            const Window wphi = gaussian_window(line, pairs[i].w_phi);
            const Window wgamma = gaussian_window(line, pairs[i].w_gamma);
            const IdentityReport r = verify_identities(f, wphi, wgamma, config.seed + static_cast<std::uint64_t>(i));
            worst_dev = std::max(worst_dev, r.max_deviation());
            worst_margin = std::min(worst_margin, r.domination_margin);
        }
        rep.check_le("identity_max_deviation", worst_dev, 1e-8);
        rep.check_ge("domination_min_margin", worst_margin, -1e-10);
    }

    // --- isometry ------------------------------------------------------------------
    {
        rep.begin("stft_isometry");
        const auto corpus = corpus_poly_gaussian(line, 20, config.seed);
        double worst = 0.0;
        for (const auto& f : corpus) {
            const double n2 = lp_norm(f, 2.0);
            const double mixed = stft(f, phi).mixed_l2_norm();
            worst = std::max(worst, std::abs(mixed - n2) / n2);
        }
        rep.check_le("isometry_rel_dev", worst, 1e-6);
    }

    // --- inversion -------------------------------------------------------------------
    {
        rep.begin("inversion");
        const GridFunction f = random_poly_gaussian(line, config.seed + 3);
        const Window g1 = gaussian_window(line, 1.0);
        const Window g2 = gaussian_window(line, 1.6);
        rep.check_le("matched_rel_l2", rel_l2_error(istft(stft(f, g1), g1, g1), f), 1e-6);
        rep.check_le("mismatched_rel_l2", rel_l2_error(istft(stft(f, g1), g2, g1), f), 1e-6);
    }

    // --- frequency-uniform partition -----------------------------------------------
    {
        rep.begin("partition_of_unity");
        const DecompositionFamily d1 = build_sigma(line, config.K);
        rep.check_le("residual_1d", partition_residual(d1), 1e-12);
        const GridSpec plane = make_grid(2, 32, kPi);
        const DecompositionFamily d2 = build_sigma(plane, 8);
        rep.check_le("residual_2d", partition_residual(d2), 1e-12);

        // shift structure: every band equals band 0 sampled at shifted points
        double shift_dev = 0.0;
        const auto& b0 = d1.band(std::array<int, 1>{0});
        for (const auto& band : d1.bands) {
            if (band.entries.size() != b0.entries.size()) {
                shift_dev = kInf;
                break;
            }
            for (std::size_t e = 0; e < band.entries.size(); ++e)
                shift_dev = std::max(shift_dev, std::abs(band.entries[e].second - b0.entries[e].second));
        }
        rep.check_le("shift_structure", shift_dev, 1e-15);

        // bounded overlap: at most 2^n bands active at any frequency
        std::map<std::size_t, int> counts;
        for (const auto& band : d2.bands)
            for (const auto& [flat, v] : band.entries)
                if (v > 0.0) counts[flat] += 1;
        int worst = 0;
        for (const auto& [flat, c] : counts) worst = std::max(worst, c);
        rep.check_le("bounded_overlap_2d", worst, 4.0);
    }

    // --- Gevrey weight inequality (admissible delta) --------------------------------
    {
        rep.begin("weight_inequality");
        const std::pair<double, double> combos[5] = {
            {1.1, 0.1}, {1.5, 0.25}, {2.0, 0.25}, {2.0, 0.5}, {3.0, 0.5}};
        double worst = kInf;
        for (const auto& [s, delta] : combos)
            for (int n = 1; n <= 2; ++n)
                worst = std::min(worst, weight_inequality_margin(s, delta, 20, n));
        rep.check_ge("min_margin_admissible", worst, -1e-12);
    }

    // --- product telescoping ---------------------------------------------------------
    {
        rep.begin("product_telescoping");
        Rng rng(config.seed + 17);
        double worst = 0.0;
        for (int count = 2; count <= 5; ++count) {
            std::vector<cplx> a(static_cast<std::size_t>(count));
            for (auto& v : a) v = cplx(rng.symmetric(), rng.symmetric());
            cplx prod(1.0, 0.0);
            for (const auto& v : a) prod *= v;
            cplx sum(0.0, 0.0);
            const unsigned full = 1u << count;
            for (unsigned mask = 1; mask < full; ++mask) {
                cplx term(1.0, 0.0);
                for (int j = 0; j < count; ++j)
                    if (mask & (1u << j)) term *= (a[static_cast<std::size_t>(j)] - 1.0);
                sum += term;
            }
            worst = std::max(worst, std::abs(prod - 1.0 - sum));
        }
        rep.check_le("telescoping_max_abs", worst, 1e-12);
    }

    // --- exponential L^p estimate ------------------------------------------------------
    {
        rep.begin("exp_lp_estimate");
        const GridSpec g = make_grid(1, 128, kPi);
        double worst = kInf;
        for (int i = 0; i < 20; ++i) {
            const GridFunction u = random_bandlimited(g, config.seed + 100 + static_cast<std::uint64_t>(i), 4, true);
            for (double pexp : {1.0, 2.0, kInf})
                worst = std::min(worst, exp_lp_margin(u, pexp));
        }
        rep.check_ge("min_margin", worst, 0.0);
    }

    // --- subalgebra constant ------------------------------------------------------------
    {
        rep.begin("subalgebra_constant");
        const double d4 = subalgebra_constant(4.0, 2.0, 2.0, 1, 0.5, 1.0);
        rep.check_le("D4_vs_closed_form", std::abs(d4 - 1.2743717663379679), 1e-6);

        double prev = kInf;
        bool monotone = true;
        for (int i = 0; i < 50; ++i) {
            const double R = std::pow(10.0, -2.0 + 5.0 * i / 49.0);
            const double v = subalgebra_constant(R, 2.0, 2.0, 1, 0.5, 1.0);
            if (v > prev + 1e-14) monotone = false;
            prev = v;
        }
        rep.check("monotone_decreasing", 1.0, monotone ? 1.0 : 0.0, monotone);

        double worst = 0.0;
        for (double R0 : {0.5, 2.0, 7.0}) {
            const double d = subalgebra_constant(R0, 2.0, 2.0, 1, 0.5, 1.0);
            const double R = choose_R(d, 2.0, 2.0, 1, 0.5, 1.0);
            worst = std::max(worst, std::abs(subalgebra_constant(R, 2.0, 2.0, 1, 0.5, 1.0) - d) / d);
        }
        rep.check_le("choose_R_roundtrip_rel", worst, 1e-9);
    }

    // --- Nikolskij ------------------------------------------------------------------------
    {
        rep.begin("nikolskij");
        const GridSpec g = make_grid(1, 128, kPi);
        const GridFunction f = random_bandlimited(g, config.seed + 5, 3, false);
        const double unit = nikolskij_ratio(f, 4.0, 2.0, 2.0);
        rep.check_le("p_equals_q_ratio_dev", std::abs(unit - 1.0), 1e-15);

        double spread_lo = kInf, spread_hi = 0.0;
        for (int r : {1, 2, 4, 8}) {
            double worst = 0.0;
            for (int i = 0; i < 10; ++i) {
                Rng rng(config.seed + 900 + static_cast<std::uint64_t>(i));
                double a[5];
                for (double& c : a) c = rng.symmetric();
                GridFunction fn;
                fn.spec = g;
                fn.values.assign(g.total(), cplx(0.0, 0.0));
                for (std::size_t j = 0; j < fn.values.size(); ++j) {
                    const double x = g.point(j)[0];
                    cplx acc(0.0, 0.0);
                    for (int m = -r; m <= r; ++m) {
                        const double u = static_cast<double>(m) / r;
                        double poly = 0.0;
                        for (int t = 4; t >= 0; --t) poly = poly * u + a[t];
                        acc += poly * std::polar(1.0, m * x);
                    }
                    fn.values[j] = acc;
                }
                worst = std::max(worst, nikolskij_ratio(fn, static_cast<double>(r), 1.0, kInf));
            }
            spread_lo = std::min(spread_lo, worst);
            spread_hi = std::max(spread_hi, worst);
        }
        rep.check_le("scaling_spread", spread_hi / spread_lo, 2.0);
    }

    // --- superposition -----------------------------------------------------------------------
    {
        rep.begin("superposition");
        const Density odd = Density::from_json(R"({"kind":"closed_form","name":"odd_gaussian","B":10.0})");
        const GridFunction u = make_function(line, R"({"kind":"gaussian","width":1.0})");
        const GridFunction Tu = superpose(u, odd, 1e-8);
        double dev = 0.0;
        for (std::size_t i = 0; i < Tu.values.size(); ++i) {
            const double t = u.values[i].real();
            const cplx closed(0.0, t * std::exp(-0.25 * t * t) / (2.0 * std::sqrt(2.0)));
            dev = std::max(dev, std::abs(Tu.values[i] - closed));
        }
        rep.check_le("odd_gaussian_closed_form", dev, 1e-6);

        const Density even = Density::from_json(R"({"kind":"closed_form","name":"gaussian","B":10.0})");
        const auto report = check_admissible(even, 2.0, std::array<double, 1>{1.0});
        rep.check_le("even_gaussian_residual_dev",
                     std::abs(report.zero_residual - 1.7724538509055160), 1e-8);
        bool rejected = false;
        try {
            (void)superpose(u, even, 1e-8);
        } catch (const Error& e) {
            rejected = e.code() == errc::precondition;
        }
        rep.check("even_gaussian_rejected", 1.0, rejected ? 1.0 : 0.0, rejected);
    }

    // --- wave propagator -----------------------------------------------------------------------
    {
        rep.begin("wave");
        const GridSpec g = make_grid(1, 128, kPi);
        const GridFunction f = make_function(
            g, R"({"kind":"trig_poly","coeffs":[{"k":[1],"re":0.5},{"k":[-1],"re":0.5}]})");
        GridFunction zero;
        zero.spec = g;
        zero.values.assign(g.total(), cplx(0.0, 0.0));
        double eig_dev = 0.0;
        for (double t : {0.3, 1.1, 2.7}) {
            const WaveState w = propagate(f, zero, t);
            for (std::size_t i = 0; i < w.u.values.size(); ++i) {
                const double x = g.point(i)[0];
                eig_dev = std::max(eig_dev,
                                   std::abs(w.u.values[i] - cplx(std::cos(t) * std::cos(x), 0.0)));
            }
        }
        rep.check_le("eigenmode_max_abs", eig_dev, 1e-10);

        const GridFunction rf = random_bandlimited(g, config.seed + 21, 6, true);
        const GridFunction rg = random_bandlimited(g, config.seed + 22, 6, true);
        const double e0 = energy({rf, rg, 0.0});
        double drift = 0.0;
        for (int i = 1; i <= 10; ++i) {
            const double t = 0.3 * i;
            drift = std::max(drift, std::abs(energy(propagate(rf, rg, t)) - e0) / e0);
        }
        rep.check_le("energy_drift_rel", drift, 1e-8);

        const WaveState fwd = propagate(rf, rg, 1.7);
        const WaveState back = propagate(fwd.u, fwd.ut, -1.7);
        rep.check_le("time_reversal_rel_l2",
                     std::max(rel_l2_error(back.u, rf), rel_l2_error(back.ut, rg)), 1e-10);
    }

    // --- norm sanity on the configured parameters ------------------------------------------------
    {
        rep.begin("norm_consistency");
        NormParams params{config.p, config.q, config.weight};
        params.validate();
        const GridFunction f = random_bandlimited(line, config.seed + 31, 5, false);
        const DecompositionFamily D = build_sigma(line, config.K);
        const LogMagnitude nd = modulation_norm_decomp(f, params, D);
        GridFunction f3 = f;
        for (cplx& v : f3.values) v *= 3.0;
        const LogMagnitude nd3 = modulation_norm_decomp(f3, params, D);
        rep.check_le("decomp_homogeneity", std::abs(nd3.log_value - nd.log_value - std::log(3.0)),
                     1e-12);

        NormParams iso{2.0, 2.0, WeightSpec::none()};
        const LogMagnitude ns = modulation_norm_stft(f, phi, iso);
        rep.check_le("stft_norm_isometry_rel",
                     std::abs(ns.value() - lp_norm(f, 2.0)) / lp_norm(f, 2.0), 1e-6);
    }

    if (all_pass) *all_pass = rep.all_pass;
    ordered_json out;
    out["config"] = {{"n", config.n},     {"N", config.N}, {"L_over_pi", config.L_over_pi},
                     {"K", config.K},     {"p", config.p}, {"q", config.q},
                     {"weight", config.weight.to_string()}, {"seed", config.seed}};
    out["suites"] = rep.suites;
    out["pass"] = rep.all_pass;
    return out.dump(2);
}

}  // namespace tfmod
