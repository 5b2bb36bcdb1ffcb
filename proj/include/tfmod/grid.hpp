#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "tfmod/errors.hpp"

namespace tfmod {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Single owner of the transform normalization: (2*pi)^{-n/2}.
double unitary_factor(int n);

/**
 * Periodic sampled-function layout on the box [-L, L)^n.
 *
 * Space grid:      x_j = j*dx,   j in {-N/2, ..., N/2-1} per axis, dx = 2L/N.
 * Frequency grid:  xi_m = m*dxi, m in {-N/2, ..., N/2-1} per axis, dxi = pi/L.
 * Storage is a flat row-major array over axes; axis index a in [0, N)
 * corresponds to the offset j = a - N/2.
 */
struct GridSpec {
    int n = 0;
    int N = 0;
    double L = 0.0;
    double dx = 0.0;
    double dxi = 0.0;

    std::size_t total() const;

    int axis_offset(std::size_t flat, int axis) const;  // j (or m) on one axis
    std::array<int, 3> offsets(std::size_t flat) const;
    std::array<double, 3> point(std::size_t flat) const;      // x_j
    std::array<double, 3> frequency(std::size_t flat) const;  // xi_m

    // Flat index from per-axis offsets, reduced periodically mod N.
    std::size_t flat_from_offsets(std::span<const int> j) const;

    // True when L is an integer multiple of pi, so Z^n lies on the
    // frequency grid; lattice_steps_per_unit() is then L/pi.
    bool integer_lattice_aligned() const;
    int lattice_steps_per_unit() const;

    bool operator==(const GridSpec& other) const;
};

GridSpec make_grid(int n, int N, double L);

struct GridFunction {
    GridSpec spec;
    std::vector<cplx> values;

    void validate() const;  // finite entries, length N^n
};

struct SpectralFunction {
    GridSpec spec;
    std::vector<cplx> coefficients;  // indexed like the frequency grid
};

GridFunction sample(const GridSpec& spec,
                    const std::function<cplx(const std::array<double, 3>&)>& fn);

/// F(xi_m) = (2*pi)^{-n/2} dx^n sum_j f(x_j) e^{-i x_j.xi_m}
SpectralFunction forward_transform(const GridFunction& f);
/// f(x_j) = (2*pi)^{-n/2} dxi^n sum_m F(xi_m) e^{+i x_j.xi_m}
GridFunction inverse_transform(const SpectralFunction& F);

/// Riemann-sum L^p norm, (sum |f|^p dx^n)^{1/p}; grid maximum for p = inf.
double lp_norm(const GridFunction& f, double p);

/// max |f| over boundary faces divided by max |f| overall (0 when f = 0).
double boundary_decay(const GridFunction& f);

/// relative l^2 spectral mass outside { |xi|_inf <= radius } (Euclidean
/// variant via `euclidean`); 0 for the zero function.
double spectral_tail_ratio(const SpectralFunction& F, double radius, bool euclidean = false);

/**
 * Adaptive Simpson quadrature with absolute-tolerance termination.
 * Deterministic for fixed inputs; throws errc::numeric when the
 * subdivision budget is exhausted before reaching `tol`.
 */
cplx quadrature_1d(const std::function<cplx(double)>& g, double a, double b, double tol);

/// Deterministic helper: runs fn(i) for i in [0, count) on up to
/// TFMOD_THREADS workers; each index writes only its own slot.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

}  // namespace tfmod
