#pragma once

#include <vector>

#include "tfmod/norms.hpp"

namespace tfmod {

struct WaveState {
    GridFunction u;
    GridFunction ut;
    double t = 0.0;
};

/// Propagator symbols (cos(|xi| t), sin(|xi| t)/|xi|); the second is
/// evaluated as t sinc(|xi| t) so the xi = 0 value is t.
std::pair<double, double> wave_multipliers(double xi_abs, double t);

/// u^(t) = cos(|xi|t) f^ + sin(|xi|t)/|xi| g^,
/// u_t^(t) = -|xi| sin(|xi|t) f^ + cos(|xi|t) g^.
WaveState propagate(const GridFunction& f, const GridFunction& g, double t);

/// |u_t|_2^2 + |grad u|_2^2 with the gradient taken spectrally.
double energy(const WaveState& w);

/**
 * Per-time diagnostics for the data-to-solution estimate: the solution norm
 * at the given params, the ratio c(t) against |f| + |g| both measured at the
 * solution weight, and c_alt(t) with |g| measured one polynomial order lower
 * (NaN for non-polynomial weights, where that placement is undefined).
 */
struct AprioriRow {
    double t = 0.0;
    double solution_log_norm = 0.0;
    double c = 0.0;
    double c_alt = 0.0;
    double energy = 0.0;
};

std::vector<AprioriRow> apriori_report(const GridFunction& f, const GridFunction& g,
                                       const NormParams& params, const DecompositionFamily& D,
                                       std::span<const double> tgrid);

/// CSV columns: t, solution_log_norm, c_of_t, c_alt, energy.
void save_csv(const std::vector<AprioriRow>& rows, const std::string& path);

}  // namespace tfmod
