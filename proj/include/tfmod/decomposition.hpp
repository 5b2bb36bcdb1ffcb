#pragma once

#include <string>

#include "tfmod/grid.hpp"

namespace tfmod {

/**
 * 1-D profile of the frequency bump: h = 1 on [-1/2, 1/2], h = 0 outside
 * (-1, 1), C^inf monotone glue in between built from psi(t) = e^{-1/t}.
 */
struct BumpProfile {
    double operator()(double t) const;
};

BumpProfile build_bump();

/**
 * The family sigma_k = rho_k / sum_l rho_l sampled on the frequency grid,
 * rho(xi) = prod_i h(xi_i), rho_k = rho(. - k), for k in [-K, K]^n.
 * Bands are stored sparsely (support of sigma_k is the open cube of side 2
 * around k) and ordered by increasing |k| then lexicographically.
 */
struct DecompositionFamily {
    struct Band {
        std::array<int, 3> k{0, 0, 0};
        std::vector<std::pair<std::size_t, double>> entries;  // (flat frequency index, sigma)
    };

    GridSpec spec;
    int K = 0;
    std::vector<Band> bands;

    const Band& band(std::span<const int> k) const;
    double covered_radius() const { return K - 1.0; }  // partition of unity holds inside
};

DecompositionFamily build_sigma(const GridSpec& spec, int K);

/// Largest deviation of sum_k sigma_k from 1 over grid frequencies with
/// |xi|_inf <= K - 1.
double partition_residual(const DecompositionFamily& D);

/// Box operator: inverse transform of sigma_k times the spectrum of f.
GridFunction box_apply(const GridFunction& f, std::span<const int> k,
                       const DecompositionFamily& D);
GridFunction box_apply_spectrum(const SpectralFunction& F, std::span<const int> k,
                                const DecompositionFamily& D);

/**
 * Multiplier-estimate diagnostic: for r in {1, 2, inf} reports
 * lhs_r = |F^{-1}(mult . F f)|_{L^r}, the product |mult|_{H^s} |f|_{L^r}
 * and their ratio. The H^s norm treats the multiplier as a function on the
 * frequency box and is computed spectrally on the dual grid.
 */
struct BernsteinReport {
    double hs_norm = 0.0;
    std::array<double, 3> lhs{};    // r = 1, 2, inf
    std::array<double, 3> bound{};  // hs_norm * |f|_r
    std::array<double, 3> ratio{};  // lhs / bound (0 when bound is 0)
};

BernsteinReport bernstein_margin(const SpectralFunction& multiplier, const GridFunction& f,
                                 double s);

/// CSV rows (k..., m..., sigma).
void save_csv(const DecompositionFamily& D, const std::string& path);

}  // namespace tfmod
