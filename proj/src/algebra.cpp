#include "tfmod/algebra.hpp"

#include <algorithm>
#include <cmath>

#include "json.hpp"

namespace tfmod {

namespace {

double require_real(const GridFunction& u, const char* what) {
    u.validate();
    double max_re = 0.0, max_im = 0.0;
    for (const cplx& v : u.values) {
        max_re = std::max(max_re, std::abs(v.real()));
        max_im = std::max(max_im, std::abs(v.imag()));
    }
    require(max_im <= 1e-13 * std::max(1.0, max_re), errc::precondition,
            std::string(what) + ": input must be real-valued");
    return max_re;
}

double surface_measure(int n) {
    switch (n) {
        case 1: return 2.0;
        case 2: return kTwoPi;
        case 3: return 2.0 * kTwoPi;
        default: fail(errc::invalid_argument, "surface_measure: dimension must be 1, 2 or 3");
    }
}

// e^{lambda |xi|^{1/s} log|xi|}, continued by 1 at xi = 0.
double moment_weight(double xi, double lambda, double s) {
    const double a = std::abs(xi);
    if (a == 0.0) return 1.0;
    return std::exp(lambda * std::pow(a, 1.0 / s) * std::log(a));
}

}  // namespace

Density Density::from_json(const std::string& json_text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const std::exception& e) {
        fail(errc::invalid_argument, std::string("density: bad JSON: ") + e.what());
    }
    Density d;
    d.descriptor = j.dump();
    const std::string kind = j.value("kind", "");
    if (kind == "closed_form") {
        const std::string name = j.value("name", "");
        const double a = j.value("scale", 1.0);
        d.B = j.value("B", 10.0);
        d.tail_tol = j.value("tail_tol", 1e-12);
        if (name == "odd_gaussian") {
            d.g = [a](double xi) { return cplx(a * xi * std::exp(-xi * xi), 0.0); };
        } else if (name == "gaussian") {
            d.g = [a](double xi) { return cplx(a * std::exp(-xi * xi), 0.0); };
        } else if (name == "zero") {
            d.g = [](double) { return cplx(0.0, 0.0); };
        } else {
            fail(errc::invalid_argument, "density: unknown closed form '" + name + "'");
        }
    } else if (kind == "table") {
        std::vector<double> xi = j.at("xi").get<std::vector<double>>();
        std::vector<double> re = j.at("re").get<std::vector<double>>();
        std::vector<double> im = j.value("im", std::vector<double>(xi.size(), 0.0));
        require(xi.size() >= 2 && re.size() == xi.size() && im.size() == xi.size(),
                errc::invalid_argument, "density: table arrays must share a length >= 2");
        require(std::is_sorted(xi.begin(), xi.end()), errc::invalid_argument,
                "density: table abscissae must be sorted");
        d.B = j.value("B", std::max(std::abs(xi.front()), std::abs(xi.back())));
        d.tail_tol = j.value("tail_tol", 1e-12);
        d.g = [xi = std::move(xi), re = std::move(re), im = std::move(im)](double x) {
            if (x <= xi.front() || x >= xi.back()) return cplx(0.0, 0.0);
            const auto it = std::upper_bound(xi.begin(), xi.end(), x);
            const std::size_t hi = static_cast<std::size_t>(it - xi.begin());
            const std::size_t lo = hi - 1;
            const double t = (x - xi[lo]) / (xi[hi] - xi[lo]);
            return cplx(re[lo] + t * (re[hi] - re[lo]), im[lo] + t * (im[hi] - im[lo]));
        };
    } else {
        fail(errc::invalid_argument, "density: kind must be 'closed_form' or 'table'");
    }
    return d;
}

bool Density::bounded(double* sup_abs) const {
    double m = 0.0;
    const int samples = 4096;
    for (int i = 0; i <= samples; ++i) {
        const double xi = -B + 2.0 * B * i / samples;
        const double a = std::abs(g(xi));
        require(std::isfinite(a), errc::numeric, "density: non-finite value");
        m = std::max(m, a);
    }
    if (sup_abs) *sup_abs = m;
    return true;
}

AdmissibilityReport check_admissible(const Density& den, double s,
                                     std::span<const double> lambdas) {
    require(s > 1.0, errc::invalid_argument, "check_admissible: weight parameter requires s > 1");
    AdmissibilityReport rep;
    double sup_abs = 0.0;
    den.bounded(&sup_abs);
    rep.degenerate = sup_abs < 1e-300;

    const double quad_tol = 1e-10;
    for (double lambda : lambdas) {
        require(lambda > 0.0, errc::invalid_argument, "check_admissible: lambda must be positive");
        rep.lambdas.push_back(lambda);
        const cplx v = quadrature_1d(
            [&](double xi) { return cplx(std::abs(den.g(xi)) * moment_weight(xi, lambda, s), 0.0); },
            -den.B, den.B, quad_tol);
        require(std::isfinite(v.real()), errc::numeric,
                "check_admissible: moment integral did not converge");
        rep.L1.push_back(v.real());
        rep.tail_bound = std::max(
            rep.tail_bound, den.tail_tol * moment_weight(den.B, lambda, s));
    }
    const cplx total = quadrature_1d(den.g, -den.B, den.B, quad_tol);
    rep.zero_residual = std::abs(total);
    rep.admissible = !rep.degenerate && rep.zero_residual <= 1e-8;
    return rep;
}

GridFunction pointwise_product(const GridFunction& f, const GridFunction& g,
                               std::optional<double> cover_radius) {
    f.validate();
    g.validate();
    require(f.spec == g.spec, errc::precondition, "pointwise_product: grid spec mismatch");
    GridFunction out;
    out.spec = f.spec;
    out.values.resize(f.values.size());
    for (std::size_t i = 0; i < f.values.size(); ++i) out.values[i] = f.values[i] * g.values[i];
    if (cover_radius) {
        const double tail = spectral_tail_ratio(forward_transform(out), *cover_radius);
        require(tail <= 1e-10, errc::precondition,
                "pointwise_product: product spectrum leaks past the covered region "
                "(aliasing guard)");
    }
    return out;
}

AlgebraRatios algebra_ratio(const GridFunction& f, const GridFunction& g,
                            const NormParams& params, const DecompositionFamily& D) {
    params.validate();
    const GridFunction fg = pointwise_product(f, g, D.covered_radius());

    NormParams doubled = params;
    doubled.p = std::isinf(params.p) ? kInf : 2.0 * params.p;

    const LogMagnitude nfg = modulation_norm_decomp(fg, params, D);
    const LogMagnitude nf = modulation_norm_decomp(f, params, D);
    const LogMagnitude ng = modulation_norm_decomp(g, params, D);
    const LogMagnitude nf2 = modulation_norm_decomp(f, doubled, D);
    const LogMagnitude ng2 = modulation_norm_decomp(g, doubled, D);
    require(!nf.is_zero() && !ng.is_zero() && !nf2.is_zero() && !ng2.is_zero(),
            errc::precondition, "algebra_ratio: factor norms must be nonzero");
    AlgebraRatios r;
    r.same_exponent = std::exp(nfg.log_value - nf.log_value - ng.log_value);
    r.holder = std::exp(nfg.log_value - nf2.log_value - ng2.log_value);
    return r;
}

double subalgebra_constant(double R, double s, double q, int n, double delta, double C0) {
    require(R >= 0.0, errc::invalid_argument, "subalgebra_constant: R must be >= 0");
    require(s > 1.0, errc::invalid_argument, "subalgebra_constant: s must be > 1");
    require(q >= 1.0, errc::invalid_argument, "subalgebra_constant: q must be >= 1");
    require(delta > 0.0 && delta < 1.0, errc::invalid_argument,
            "subalgebra_constant: delta must lie in (0,1)");
    require(C0 > 0.0, errc::invalid_argument, "subalgebra_constant: C0 must be positive");
    require(n >= 1 && n <= 3, errc::invalid_argument, "subalgebra_constant: n must be 1, 2 or 3");

    const double qp = q == 1.0 ? kInf : (std::isinf(q) ? 1.0 : q / (q - 1.0));
    const double alpha = s * n;
    const double T = delta * (std::isinf(qp) ? 1.0 : qp) * std::pow(R, 1.0 / s);
    // For q = 1 the exponent 1/q' is 0 and D degenerates to C0.
    if (std::isinf(qp)) return C0;

    const double upper = std::max(T, alpha) + 80.0;  // integrand below ~1e-30 past here
    double integral = 0.0;
    if (T < upper) {
        const cplx v = quadrature_1d(
            [alpha](double y) { return cplx(std::pow(y, alpha - 1.0) * std::exp(-y), 0.0); }, T,
            upper, 1e-12);
        integral = std::max(0.0, v.real());
    }
    const double inner = s * surface_measure(n) * std::pow(delta * qp, -alpha) * integral;
    return C0 * std::pow(inner, 1.0 / qp);
}

double choose_R(double target, double s, double q, int n, double delta, double C0) {
    require(target > 0.0, errc::invalid_argument, "choose_R: target must be positive");
    const double D0 = subalgebra_constant(0.0, s, q, n, delta, C0);
    require(std::isfinite(D0) && D0 > 0.0, errc::numeric, "choose_R: D(0) is not usable");
    require(q != 1.0, errc::invalid_argument, "choose_R: D is constant when q = 1");
    require(target <= D0 * (1.0 + 1e-12), errc::invalid_argument,
            "choose_R: target exceeds D(0)");
    if (target >= D0) return 0.0;

    double lo = 0.0, hi = 1.0;
    while (subalgebra_constant(hi, s, q, n, delta, C0) > target) {
        hi *= 2.0;
        require(hi < 1e18, errc::numeric, "choose_R: bisection bracket overflow");
    }
    for (int it = 0; it < 400; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double d = subalgebra_constant(mid, s, q, n, delta, C0);
        if (std::abs(d - target) <= 1e-10 * target) return mid;
        (d > target ? lo : hi) = mid;
        if (hi - lo <= 1e-15 * std::max(1.0, hi)) return 0.5 * (lo + hi);
    }
    fail(errc::numeric, "choose_R: bisection did not converge");
}

double weight_inequality_margin(double s, double delta, int Kmax, int n) {
    require(s > 1.0, errc::invalid_argument, "weight_inequality_margin: s must be > 1");
    require(delta > 0.0 && delta < 1.0, errc::invalid_argument,
            "weight_inequality_margin: delta must lie in (0,1)");
    require(Kmax >= 1, errc::invalid_argument, "weight_inequality_margin: Kmax must be >= 1");
    require(n == 1 || n == 2, errc::invalid_argument,
            "weight_inequality_margin: exhaustive enumeration supports n in {1,2}");

    const double theta = 1.0 / s;
    const int side = 2 * Kmax + 1;
    const std::size_t count = static_cast<std::size_t>(n == 1 ? side : side * side);
    auto decode = [&](std::size_t idx, int* v) {
        if (n == 1) {
            v[0] = static_cast<int>(idx) - Kmax;
            v[1] = 0;
        } else {
            v[0] = static_cast<int>(idx) / side - Kmax;
            v[1] = static_cast<int>(idx) % side - Kmax;
        }
    };
    double margin = kInf;
    for (std::size_t ki = 0; ki < count; ++ki) {
        int k[2];
        decode(ki, k);
        const double nk = std::hypot(k[0], k[1]);
        for (std::size_t li = 0; li < count; ++li) {
            int l[2];
            decode(li, l);
            const double nl = std::hypot(l[0], l[1]);
            const double nlk = std::hypot(l[0] - k[0], l[1] - k[1]);
            const double rhs = std::pow(nl, theta) + std::pow(nlk, theta) -
                               delta * std::pow(std::min(nlk, nl), theta);
            margin = std::min(margin, rhs - std::pow(nk, theta));
        }
    }
    return margin;
}

double nikolskij_ratio(const GridFunction& f, double r, double p, double q) {
    f.validate();
    require(r > 0.0, errc::invalid_argument, "nikolskij_ratio: radius must be positive");
    require(p >= 1.0 && q >= p, errc::precondition, "nikolskij_ratio: need 1 <= p <= q");
    const double tail = spectral_tail_ratio(forward_transform(f), r, /*euclidean=*/true);
    require(tail <= 1e-10, errc::precondition,
            "nikolskij_ratio: spectrum is not supported in |xi| <= r");
    const double np = lp_norm(f, p);
    const double nq = lp_norm(f, q);
    require(np > 0.0, errc::precondition, "nikolskij_ratio: zero function");
    const double expo = f.spec.n * (1.0 / p - (std::isinf(q) ? 0.0 : 1.0 / q));
    return nq / (std::pow(r, expo) * np);
}

double exp_lp_margin(const GridFunction& u, double p) {
    require_real(u, "exp_lp_margin");
    require(p >= 1.0, errc::invalid_argument, "exp_lp_margin: p must satisfy p >= 1");
    GridFunction w;
    w.spec = u.spec;
    w.values.resize(u.values.size());
    // |e^{it} - 1| = 2 |sin(t/2)|, free of cancellation near t = 0
    for (std::size_t i = 0; i < u.values.size(); ++i)
        w.values[i] = cplx(2.0 * std::abs(std::sin(0.5 * u.values[i].real())), 0.0);
    return lp_norm(u, p) - lp_norm(w, p);
}

LogMagnitude gevrey_exp_norm(const GridFunction& u, const NormParams& params,
                             const DecompositionFamily& D) {
    require_real(u, "gevrey_exp_norm");
    require(params.weight.kind == WeightSpec::Kind::gevrey, errc::invalid_argument,
            "gevrey_exp_norm: params must carry a gevrey weight");
    GridFunction w;
    w.spec = u.spec;
    w.values.resize(u.values.size());
    for (std::size_t i = 0; i < u.values.size(); ++i)
        w.values[i] = std::polar(1.0, u.values[i].real()) - 1.0;
    return modulation_norm_decomp(w, params, D);
}

GridFunction superpose(const GridFunction& u, const Density& den, double tol) {
    require_real(u, "superpose");
    require(tol > 0.0, errc::invalid_argument, "superpose: tolerance must be positive");
    {
        const double residual = std::abs(quadrature_1d(den.g, -den.B, den.B, 1e-10));
        require(residual <= 1e-8, errc::precondition,
                "superpose: density violates the zero-integral condition (residual " +
                    std::to_string(residual) + ")");
    }
    GridFunction out;
    out.spec = u.spec;
    out.values.resize(u.values.size());
    const double scale = 1.0 / std::sqrt(kTwoPi);
    parallel_for(u.values.size(), [&](std::size_t i) {
        const double ui = u.values[i].real();
        const cplx v = quadrature_1d(
            [&](double xi) {
                return (std::polar(1.0, xi * ui) - 1.0) * den.g(xi);
            },
            -den.B, den.B, tol);
        out.values[i] = scale * v;
    });
    return out;
}

}  // namespace tfmod
