#include "tfmod/functions.hpp"

#include <cmath>
#include <fstream>

#include "json.hpp"

namespace tfmod {

std::uint64_t Rng::next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

double Rng::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

double Rng::symmetric() { return 2.0 * uniform() - 1.0; }

int Rng::integer(int lo, int hi) {
    require(hi >= lo, errc::invalid_argument, "rng: empty range");
    return lo + static_cast<int>(next() % static_cast<std::uint64_t>(hi - lo + 1));
}

namespace {

using nlohmann::json;

GridFunction trig_poly(const GridSpec& spec,
                       const std::vector<std::pair<std::array<int, 3>, cplx>>& coeffs) {
    // Direct evaluation keeps the coefficient convention transparent:
    // f(x) = sum c_k e^{i k.x}.
    GridFunction f;
    f.spec = spec;
    f.values.assign(spec.total(), cplx(0.0, 0.0));
    for (std::size_t j = 0; j < f.values.size(); ++j) {
        const auto x = spec.point(j);
        cplx acc(0.0, 0.0);
        for (const auto& [k, c] : coeffs) {
            double phase = 0.0;
            for (int i = 0; i < spec.n; ++i) phase += k[static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(i)];
            acc += c * std::polar(1.0, phase);
        }
        f.values[j] = acc;
    }
    return f;
}

}  // namespace

GridFunction random_bandlimited(const GridSpec& spec, std::uint64_t seed, int K, bool real) {
    require(K >= 0, errc::invalid_argument, "random_bandlimited: K must be >= 0");
    Rng rng(seed);
    std::vector<std::pair<std::array<int, 3>, cplx>> coeffs;
    std::array<int, 3> k{0, 0, 0};
    for (int i = 0; i < spec.n; ++i) k[static_cast<std::size_t>(i)] = -K;
    for (;;) {
        const cplx c(rng.symmetric(), rng.symmetric());
        coeffs.emplace_back(k, c);
        int axis = spec.n - 1;
        while (axis >= 0 && ++k[static_cast<std::size_t>(axis)] > K) {
            k[static_cast<std::size_t>(axis)] = -K;
            --axis;
        }
        if (axis < 0) break;
    }
    if (real) {
        // c_{-k} = conj(c_k); pair each k with its negation.
        for (auto& [kk, c] : coeffs) {
            bool self = true;
            for (int i = 0; i < spec.n; ++i) self = self && kk[static_cast<std::size_t>(i)] == 0;
            if (self) {
                c = cplx(c.real(), 0.0);
                continue;
            }
            // canonical representative: first nonzero component positive
            int lead = 0;
            for (int i = 0; i < spec.n; ++i)
                if (kk[static_cast<std::size_t>(i)] != 0) {
                    lead = kk[static_cast<std::size_t>(i)];
                    break;
                }
            if (lead < 0) {
                std::array<int, 3> neg{-kk[0], -kk[1], -kk[2]};
                for (const auto& [ok, oc] : coeffs) {
                    if (ok == neg) {
                        c = std::conj(oc);
                        break;
                    }
                }
            }
        }
    }
    return trig_poly(spec, coeffs);
}

GridFunction random_poly_gaussian(const GridSpec& spec, std::uint64_t seed) {
    require(spec.n == 1, errc::invalid_argument, "random_poly_gaussian: defined for n = 1");
    Rng rng(seed);
    const int degree = rng.integer(1, 6);
    std::vector<double> a(static_cast<std::size_t>(degree) + 1);
    for (double& c : a) c = rng.symmetric();
    const double width = 0.7 + 0.9 * rng.uniform();
    return sample(spec, [&](const std::array<double, 3>& x) {
        double poly = 0.0;
        for (std::size_t j = a.size(); j-- > 0;) poly = poly * x[0] + a[j];
        return cplx(poly * std::exp(-x[0] * x[0] / (2.0 * width * width)), 0.0);
    });
}

std::vector<GridFunction> corpus_bandlimited(const GridSpec& spec, int count, std::uint64_t seed,
                                             int K, bool real) {
    std::vector<GridFunction> out;
    out.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i)
        out.push_back(random_bandlimited(spec, seed + 1000003ULL * static_cast<std::uint64_t>(i + 1), K, real));
    return out;
}

std::vector<GridFunction> corpus_poly_gaussian(const GridSpec& spec, int count,
                                               std::uint64_t seed) {
    std::vector<GridFunction> out;
    out.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i)
        out.push_back(random_poly_gaussian(spec, seed + 1000003ULL * static_cast<std::uint64_t>(i + 1)));
    return out;
}

GridFunction make_function(const GridSpec& spec, const std::string& descriptor_json) {
    json j;
    try {
        j = json::parse(descriptor_json);
    } catch (const std::exception& e) {
        fail(errc::invalid_argument, std::string("function descriptor: bad JSON: ") + e.what());
    }
    const std::string kind = j.value("kind", "");
    if (kind == "gaussian") {
        const double w = j.value("width", 1.0);
        const double a = j.value("amplitude", 1.0);
        require(w > 0.0, errc::invalid_argument, "gaussian: width must be positive");
        return sample(spec, [&](const std::array<double, 3>& x) {
            double r2 = 0.0;
            for (int i = 0; i < spec.n; ++i) r2 += x[static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(i)];
            return cplx(a * std::exp(-r2 / (2.0 * w * w)), 0.0);
        });
    }
    if (kind == "modulated_gaussian") {
        const double w = j.value("width", 1.0);
        std::vector<double> xi = j.value("xi", std::vector<double>(static_cast<std::size_t>(spec.n), 0.0));
        std::vector<double> x0 = j.value("x0", std::vector<double>(static_cast<std::size_t>(spec.n), 0.0));
        require(w > 0.0, errc::invalid_argument, "modulated_gaussian: width must be positive");
        require(static_cast<int>(xi.size()) == spec.n && static_cast<int>(x0.size()) == spec.n,
                errc::invalid_argument, "modulated_gaussian: xi/x0 dimension mismatch");
        return sample(spec, [&](const std::array<double, 3>& x) {
            double r2 = 0.0, phase = 0.0;
            for (int i = 0; i < spec.n; ++i) {
                const double d = x[static_cast<std::size_t>(i)] - x0[static_cast<std::size_t>(i)];
                r2 += d * d;
                phase += xi[static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(i)];
            }
            return std::polar(std::exp(-r2 / (2.0 * w * w)), phase);
        });
    }
    if (kind == "poly_gaussian") {
        require(spec.n == 1, errc::invalid_argument, "poly_gaussian: defined for n = 1");
        const double w = j.value("width", 1.0);
        std::vector<double> a = j.at("coeffs").get<std::vector<double>>();
        require(w > 0.0 && !a.empty(), errc::invalid_argument, "poly_gaussian: bad parameters");
        return sample(spec, [&](const std::array<double, 3>& x) {
            double poly = 0.0;
            for (std::size_t i = a.size(); i-- > 0;) poly = poly * x[0] + a[i];
            return cplx(poly * std::exp(-x[0] * x[0] / (2.0 * w * w)), 0.0);
        });
    }
    if (kind == "trig_poly") {
        std::vector<std::pair<std::array<int, 3>, cplx>> coeffs;
        for (const auto& e : j.at("coeffs")) {
            std::vector<int> k = e.at("k").get<std::vector<int>>();
            require(static_cast<int>(k.size()) == spec.n, errc::invalid_argument,
                    "trig_poly: coefficient dimension mismatch");
            std::array<int, 3> ka{0, 0, 0};
            for (int i = 0; i < spec.n; ++i) ka[static_cast<std::size_t>(i)] = k[static_cast<std::size_t>(i)];
            coeffs.emplace_back(ka, cplx(e.value("re", 0.0), e.value("im", 0.0)));
        }
        return trig_poly(spec, coeffs);
    }
    if (kind == "random_bandlimited") {
        const auto seed = j.value("seed", std::uint64_t(1));
        const int K = j.value("K", 4);
        const bool real = j.value("real", false);
        return random_bandlimited(spec, seed, K, real);
    }
    if (kind == "samples") {
        std::vector<double> re = j.at("re").get<std::vector<double>>();
        std::vector<double> im = j.value("im", std::vector<double>(re.size(), 0.0));
        require(re.size() == spec.total() && im.size() == re.size(), errc::invalid_argument,
                "samples: array length must equal N^n");
        GridFunction f;
        f.spec = spec;
        f.values.resize(re.size());
        for (std::size_t i = 0; i < re.size(); ++i) f.values[i] = cplx(re[i], im[i]);
        f.validate();
        return f;
    }
    fail(errc::invalid_argument, "function descriptor: unknown kind '" + kind + "'");
}

GridSpec grid_from_json(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const std::exception& e) {
        fail(errc::invalid_argument, std::string("grid: bad JSON: ") + e.what());
    }
    const int n = j.at("n").get<int>();
    const int N = j.at("N").get<int>();
    double L;
    if (j.contains("L_over_pi"))
        L = j.at("L_over_pi").get<double>() * kPi;
    else
        L = j.at("L").get<double>();
    return make_grid(n, N, L);
}

void save_function(const GridFunction& f, const std::string& path) {
    f.validate();
    nlohmann::ordered_json j;
    j["grid"] = {{"n", f.spec.n}, {"N", f.spec.N}, {"L_over_pi", f.spec.L / kPi}};
    std::vector<double> re(f.values.size()), im(f.values.size());
    for (std::size_t i = 0; i < f.values.size(); ++i) {
        re[i] = f.values[i].real();
        im[i] = f.values[i].imag();
    }
    j["values"] = {{"re", re}, {"im", im}};
    std::ofstream out(path);
    require(out.good(), errc::io, "save_function: cannot open " + path);
    out << j.dump() << "\n";
    require(out.good(), errc::io, "save_function: write failure on " + path);
}

GridFunction load_function(const std::string& path) {
    std::ifstream in(path);
    require(in.good(), errc::io, "load_function: cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        fail(errc::invalid_argument, std::string("load_function: bad JSON: ") + e.what());
    }
    const GridSpec spec = grid_from_json(j.at("grid").dump());
    std::vector<double> re = j.at("values").at("re").get<std::vector<double>>();
    std::vector<double> im = j.at("values").at("im").get<std::vector<double>>();
    require(re.size() == spec.total() && im.size() == re.size(), errc::invalid_argument,
            "load_function: value count does not match the grid");
    GridFunction f;
    f.spec = spec;
    f.values.resize(re.size());
    for (std::size_t i = 0; i < re.size(); ++i) f.values[i] = cplx(re[i], im[i]);
    f.validate();
    return f;
}

}  // namespace tfmod
