#include "tfmod/wave.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

namespace tfmod {

namespace {

double sinc(double z) {
    if (std::abs(z) < 1e-7) return 1.0 - z * z / 6.0;
    return std::sin(z) / z;
}

double xi_abs_at(const GridSpec& spec, std::size_t flat) {
    const auto xi = spec.frequency(flat);
    double r2 = 0.0;
    for (int i = 0; i < spec.n; ++i) r2 += xi[static_cast<std::size_t>(i)] * xi[static_cast<std::size_t>(i)];
    return std::sqrt(r2);
}

}  // namespace

std::pair<double, double> wave_multipliers(double xi_abs, double t) {
    return {std::cos(xi_abs * t), t * sinc(xi_abs * t)};
}

WaveState propagate(const GridFunction& f, const GridFunction& g, double t) {
    f.validate();
    g.validate();
    require(f.spec == g.spec, errc::precondition, "propagate: grid spec mismatch");
    require(std::isfinite(t), errc::invalid_argument, "propagate: time must be finite");
    const SpectralFunction F = forward_transform(f);
    const SpectralFunction G = forward_transform(g);
    SpectralFunction U, Ut;
    U.spec = Ut.spec = f.spec;
    U.coefficients.resize(F.coefficients.size());
    Ut.coefficients.resize(F.coefficients.size());
    for (std::size_t i = 0; i < F.coefficients.size(); ++i) {
        const double w = xi_abs_at(f.spec, i);
        const auto [c, s] = wave_multipliers(w, t);
        U.coefficients[i] = c * F.coefficients[i] + s * G.coefficients[i];
        Ut.coefficients[i] = -w * std::sin(w * t) * F.coefficients[i] + c * G.coefficients[i];
    }
    WaveState out;
    out.u = inverse_transform(U);
    out.ut = inverse_transform(Ut);
    out.t = t;
    return out;
}

double energy(const WaveState& w) {
    require(w.u.spec == w.ut.spec, errc::precondition, "energy: grid spec mismatch");
    const double kinetic = lp_norm(w.ut, 2.0);
    const SpectralFunction U = forward_transform(w.u);
    long double acc = 0.0L;
    for (std::size_t i = 0; i < U.coefficients.size(); ++i) {
        const double xa = xi_abs_at(w.u.spec, i);
        acc += static_cast<long double>(xa * xa) * std::norm(U.coefficients[i]);
    }
    const double grad2 = static_cast<double>(acc) * std::pow(w.u.spec.dxi, w.u.spec.n);
    return kinetic * kinetic + grad2;
}

std::vector<AprioriRow> apriori_report(const GridFunction& f, const GridFunction& g,
                                       const NormParams& params, const DecompositionFamily& D,
                                       std::span<const double> tgrid) {
    params.validate();
    const LogMagnitude nf = modulation_norm_decomp(f, params, D);
    const LogMagnitude ng = modulation_norm_decomp(g, params, D);
    double ng_alt = std::numeric_limits<double>::quiet_NaN();
    if (params.weight.kind == WeightSpec::Kind::polynomial) {
        NormParams lower = params;
        lower.weight = WeightSpec::polynomial(params.weight.s - 1.0);
        ng_alt = modulation_norm_decomp(g, lower, D).value();
    }
    const double data = nf.value() + ng.value();
    const double data_alt = nf.value() + ng_alt;
    require(std::isfinite(data) && data > 0.0, errc::precondition,
            "apriori_report: data norms must be finite and nonzero");

    std::vector<AprioriRow> rows;
    rows.reserve(tgrid.size());
    for (double t : tgrid) {
        const WaveState w = propagate(f, g, t);
        const LogMagnitude sol = modulation_norm_decomp(w.u, params, D);
        AprioriRow row;
        row.t = t;
        row.solution_log_norm = sol.log_value;
        row.c = sol.value() / data;
        row.c_alt = sol.value() / data_alt;
        row.energy = energy(w);
        rows.push_back(row);
    }
    return rows;
}

void save_csv(const std::vector<AprioriRow>& rows, const std::string& path) {
    std::ofstream csv(path);
    require(csv.good(), errc::io, "save_csv: cannot open " + path);
    csv << "t,solution_log_norm,c_of_t,c_alt,energy\n";
    char buf[160];
    for (const AprioriRow& r : rows) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g\n", r.t,
                      r.solution_log_norm, r.c, r.c_alt, r.energy);
        csv << buf;
    }
    require(csv.good(), errc::io, "save_csv: write failure on " + path);
}

}  // namespace tfmod
