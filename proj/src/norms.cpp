#include "tfmod/norms.hpp"

#include <algorithm>
#include <cmath>

namespace tfmod {

WeightSpec WeightSpec::polynomial(double s) {
    require(std::isfinite(s), errc::invalid_argument, "weight: polynomial index must be finite");
    return {Kind::polynomial, s};
}

WeightSpec WeightSpec::gevrey(double s) {
    require(s > 1.0, errc::invalid_argument, "weight: gevrey requires s > 1");
    return {Kind::gevrey, s};
}

WeightSpec WeightSpec::parse(const std::string& text) {
    if (text == "none" || text.empty()) return none();
    const auto colon = text.find(':');
    require(colon != std::string::npos, errc::invalid_argument,
            "weight: expected 'none', 'poly:<s>' or 'gevrey:<s>', got '" + text + "'");
    const std::string kind = text.substr(0, colon);
    double s = 0.0;
    try {
        s = std::stod(text.substr(colon + 1));
    } catch (const std::exception&) {
        fail(errc::invalid_argument, "weight: bad parameter in '" + text + "'");
    }
    if (kind == "poly") return polynomial(s);
    if (kind == "gevrey") return gevrey(s);
    fail(errc::invalid_argument, "weight: unknown kind '" + kind + "'");
}

std::string WeightSpec::to_string() const {
    switch (kind) {
        case Kind::unweighted: return "none";
        case Kind::polynomial: return "poly:" + std::to_string(s);
        case Kind::gevrey: return "gevrey:" + std::to_string(s);
    }
    return "none";
}

double weight_log(const WeightSpec& w, std::span<const double> k) {
    double r2 = 0.0;
    for (double c : k) r2 += c * c;
    switch (w.kind) {
        case WeightSpec::Kind::unweighted:
            return 0.0;
        case WeightSpec::Kind::polynomial:
            return 0.5 * w.s * std::log1p(r2);
        case WeightSpec::Kind::gevrey:
            return std::pow(std::sqrt(r2), 1.0 / w.s);
    }
    fail(errc::invalid_argument, "weight: unknown kind");
}

double LogMagnitude::value() const {
    if (is_zero()) return 0.0;
    return std::exp(log_value);  // overflows to inf past ~709
}

void NormParams::validate() const {
    require(p >= 1.0, errc::invalid_argument, "norm params: p must satisfy p >= 1");
    require(q >= 1.0, errc::invalid_argument, "norm params: q must satisfy q >= 1");
    if (weight.kind == WeightSpec::Kind::gevrey)
        require(weight.s > 1.0, errc::invalid_argument, "norm params: gevrey weight requires s > 1");
}

double NormParams::conj_p() const {
    if (p == 1.0) return kInf;
    if (std::isinf(p)) return 1.0;
    return p / (p - 1.0);
}

double NormParams::conj_q() const {
    if (q == 1.0) return kInf;
    if (std::isinf(q)) return 1.0;
    return q / (q - 1.0);
}

LogMagnitude lq_weighted(std::span<const std::pair<double, double>> terms, double q) {
    require(q >= 1.0, errc::invalid_argument, "lq_weighted: q must satisfy q >= 1");
    double peak = -kInf;
    for (const auto& [lw, ln] : terms) peak = std::max(peak, lw + ln);
    if (peak == -kInf) return LogMagnitude{-kInf};
    if (std::isinf(q)) return LogMagnitude{peak};
    long double acc = 0.0L;
    for (const auto& [lw, ln] : terms) {
        const double t = lw + ln;
        if (t == -kInf) continue;
        acc += std::exp(static_cast<long double>(q) * (t - peak));
    }
    return LogMagnitude{peak + static_cast<double>(std::log(acc)) / q};
}

LogMagnitude modulation_norm_decomp(const GridFunction& f, const NormParams& params,
                                    const DecompositionFamily& D) {
    params.validate();
    require(f.spec == D.spec, errc::precondition, "modulation norm: grid spec mismatch");
    const SpectralFunction F = forward_transform(f);

    bool all_zero = true;
    for (const cplx& c : F.coefficients)
        if (c != cplx(0.0, 0.0)) {
            all_zero = false;
            break;
        }
    if (all_zero) return LogMagnitude{-kInf};

    const double tail = spectral_tail_ratio(F, D.covered_radius());
    require(tail <= 1e-10, errc::precondition,
            "modulation norm: spectral tail outside the covered region exceeds 1e-10 "
            "(insufficient K)");

    std::vector<std::pair<double, double>> terms;
    terms.reserve(D.bands.size());
    for (const auto& band : D.bands) {
        const GridFunction piece = box_apply_spectrum(
            F, std::span<const int>(band.k.data(), static_cast<std::size_t>(D.spec.n)), D);
        const double a = lp_norm(piece, params.p);
        double kv[3];
        for (int i = 0; i < D.spec.n; ++i) kv[i] = static_cast<double>(band.k[static_cast<std::size_t>(i)]);
        terms.emplace_back(weight_log(params.weight, std::span<const double>(kv, static_cast<std::size_t>(D.spec.n))),
                           a == 0.0 ? -kInf : std::log(a));
    }
    return lq_weighted(terms, params.q);
}

LogMagnitude mixed_lpq_norm(const STFTMatrix& V, double p, double q, const WeightSpec& weight) {
    require(p >= 1.0 && q >= 1.0, errc::invalid_argument, "mixed norm: p, q must be >= 1");
    const GridSpec& spec = V.spec;
    const std::size_t total = spec.total();
    const double cell_x = std::pow(spec.dx, spec.n);

    std::vector<std::pair<double, double>> terms;
    terms.reserve(total);
    for (std::size_t mf = 0; mf < total; ++mf) {
        // inner L^p over x at fixed xi
        double inner;
        if (std::isinf(p)) {
            double m = 0.0;
            for (std::size_t xf = 0; xf < total; ++xf) m = std::max(m, std::abs(V.at(xf, mf)));
            inner = m;
        } else {
            long double acc = 0.0L;
            if (p == 2.0) {
                for (std::size_t xf = 0; xf < total; ++xf) acc += std::norm(V.at(xf, mf));
            } else if (p == 1.0) {
                for (std::size_t xf = 0; xf < total; ++xf) acc += std::abs(V.at(xf, mf));
            } else {
                for (std::size_t xf = 0; xf < total; ++xf)
                    acc += std::pow(std::abs(V.at(xf, mf)), p);
            }
            inner = std::pow(static_cast<double>(acc) * cell_x, 1.0 / p);
        }
        const auto xi = spec.frequency(mf);
        const double lw = weight_log(weight, std::span<const double>(xi.data(), static_cast<std::size_t>(spec.n)));
        terms.emplace_back(lw, inner == 0.0 ? -kInf : std::log(inner));
    }
    LogMagnitude out = lq_weighted(terms, q);
    if (!out.is_zero() && !std::isinf(q)) out.log_value += spec.n * std::log(spec.dxi) / q;
    return out;
}

LogMagnitude modulation_norm_stft(const GridFunction& f, const Window& phi,
                                  const NormParams& params) {
    params.validate();
    const STFTMatrix V = stft(f, phi);
    return mixed_lpq_norm(V, params.p, params.q, params.weight);
}

double equivalence_ratio(const GridFunction& f, const NormParams& params, const Window& phi,
                         const DecompositionFamily& D) {
    const LogMagnitude decomp = modulation_norm_decomp(f, params, D);
    const LogMagnitude integral = modulation_norm_stft(f, phi, params);
    require(!decomp.is_zero() && !integral.is_zero(), errc::precondition,
            "equivalence_ratio: norms must be nonzero");
    require(std::isfinite(decomp.log_value) && std::isfinite(integral.log_value), errc::numeric,
            "equivalence_ratio: norms must be finite");
    return std::exp(decomp.log_value - integral.log_value);
}

}  // namespace tfmod
