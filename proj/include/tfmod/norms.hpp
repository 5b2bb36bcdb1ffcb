#pragma once

#include <limits>
#include <utility>

#include "tfmod/decomposition.hpp"
#include "tfmod/grid.hpp"
#include "tfmod/stft.hpp"

namespace tfmod {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/**
 * Weight family on the frequency variable, evaluated in the log domain:
 *   polynomial(s):  log w(k) = (s/2) log(1 + |k|^2)
 *   gevrey(s>1):    log w(k) = |k|^{1/s}
 *   unweighted:     log w = 0
 */
struct WeightSpec {
    enum class Kind { unweighted, polynomial, gevrey };
    Kind kind = Kind::unweighted;
    double s = 0.0;

    static WeightSpec none() { return {}; }
    static WeightSpec polynomial(double s);
    static WeightSpec gevrey(double s);

    /// "none" | "poly:<s>" | "gevrey:<s>"
    static WeightSpec parse(const std::string& text);
    std::string to_string() const;
};

double weight_log(const WeightSpec& w, std::span<const double> k);

/// Natural log of a nonnegative magnitude; -inf encodes zero.
struct LogMagnitude {
    double log_value = -kInf;

    bool is_zero() const { return log_value == -kInf; }
    double value() const;  // exp, saturating to inf
};

struct NormParams {
    double p = 2.0;
    double q = 2.0;
    WeightSpec weight;

    void validate() const;
    double conj_p() const;
    double conj_q() const;
};

/**
 * (sum_m w_m^q a_m^q)^{1/q} from (log w_m, log a_m) pairs, computed with a
 * max-shifted exponential sum; q = inf takes the max. Stable for log terms
 * up to around +-700 and beyond.
 */
LogMagnitude lq_weighted(std::span<const std::pair<double, double>> terms, double q);

/// Decomposition-form modulation norm (sum_k w(k)^q |box_k f|_{L^p}^q)^{1/q}.
/// Requires the relative spectral tail outside |xi|_inf <= K-1 to be <= 1e-10.
LogMagnitude modulation_norm_decomp(const GridFunction& f, const NormParams& params,
                                    const DecompositionFamily& D);

/// Mixed L^{p,q} norm of a phase-space matrix: inner L^p in x with measure
/// dx^n, outer weighted L^q in xi with measure dxi^n.
LogMagnitude mixed_lpq_norm(const STFTMatrix& V, double p, double q, const WeightSpec& weight);

/// STFT-form modulation norm: mixed_lpq_norm of V_phi f.
LogMagnitude modulation_norm_stft(const GridFunction& f, const Window& phi,
                                  const NormParams& params);

/// exp(decomposition norm - STFT norm); requires both finite and nonzero.
double equivalence_ratio(const GridFunction& f, const NormParams& params, const Window& phi,
                         const DecompositionFamily& D);

}  // namespace tfmod
