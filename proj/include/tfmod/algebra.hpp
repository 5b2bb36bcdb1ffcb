#pragma once

#include <functional>
#include <string>
#include <vector>

#include "tfmod/norms.hpp"

namespace tfmod {

/**
 * Measure density g(xi) d xi on the line, either closed-form or tabulated
 * with linear interpolation. |g| is treated as <= tail_tol outside [-B, B].
 */
struct Density {
    std::function<cplx(double)> g;
    double B = 10.0;
    double tail_tol = 1e-12;
    std::string descriptor;  // JSON text it was built from, for reports

    static Density from_json(const std::string& json_text);

    /// |integral of g| relative residual and boundedness probe.
    bool bounded(double* sup_abs = nullptr) const;
};

struct AdmissibilityReport {
    std::vector<double> lambdas;
    std::vector<double> L1;       // moment integrals, one per lambda
    double zero_residual = 0.0;   // |integral g|
    double tail_bound = 0.0;      // weighted boundary magnitude diagnostic
    bool degenerate = false;      // identically-zero density
    bool admissible = false;      // finite moments and residual below 1e-8
};

/// Moment condition of the superposition theorem:
/// L1(lambda) = integral e^{lambda |xi|^{1/s} log|xi|} |g(xi)| d xi.
AdmissibilityReport check_admissible(const Density& g, double s,
                                     std::span<const double> lambdas);

/// Entrywise product; with a cover radius set, the product spectrum must
/// keep its relative tail below 1e-10 (aliasing guard).
GridFunction pointwise_product(const GridFunction& f, const GridFunction& g,
                               std::optional<double> cover_radius = std::nullopt);

struct AlgebraRatios {
    double same_exponent = 0.0;  // |fg|_{p,q} / (|f|_{p,q} |g|_{p,q})
    double holder = 0.0;         // |fg|_{p,q} / (|f|_{2p,q} |g|_{2p,q})
};

AlgebraRatios algebra_ratio(const GridFunction& f, const GridFunction& g,
                            const NormParams& params, const DecompositionFamily& D);

/// D(R) = C0 (s w_n (d q')^{-sn} int_{d q' R^{1/s}}^inf y^{sn-1} e^{-y} dy)^{1/q'}.
double subalgebra_constant(double R, double s, double q, int n, double delta, double C0);

/// Inverse of subalgebra_constant in R by bisection, to 1e-10 relative.
double choose_R(double target, double s, double q, int n, double delta, double C0);

/// min over |k|_inf, |l|_inf <= Kmax of
/// |l|^{1/s} + |l-k|^{1/s} - delta min(|l-k|, |l|)^{1/s} - |k|^{1/s}.
double weight_inequality_margin(double s, double delta, int Kmax, int n);

/// |f|_{L^q} / (r^{n(1/p - 1/q)} |f|_{L^p}) for f band-limited to the
/// Euclidean ball of radius r (verified).
double nikolskij_ratio(const GridFunction& f, double r, double p, double q);

/// |u|_{L^p} - |e^{iu} - 1|_{L^p} for real-valued u; nonnegative since
/// |e^{it} - 1| = 2|sin(t/2)| <= |t|.
double exp_lp_margin(const GridFunction& u, double p);

/// Gevrey-modulation norm of e^{iu} - 1 for real-valued u.
LogMagnitude gevrey_exp_norm(const GridFunction& u, const NormParams& params,
                             const DecompositionFamily& D);

/// T_f u(x) = (2 pi)^{-1/2} integral (e^{i xi u(x)} - 1) g(xi) d xi, pointwise
/// quadrature with absolute tolerance tol.
GridFunction superpose(const GridFunction& u, const Density& g, double tol);

}  // namespace tfmod
