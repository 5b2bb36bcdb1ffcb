#pragma once

#include <optional>
#include <string>

#include "tfmod/grid.hpp"

namespace tfmod {

/**
 * Window function for the short-time Fourier transform. `kind` is a
 * human/JSON descriptor ("gaussian(width)" or "custom"); when a
 * Gelfand-Shilov class parameter is claimed it can be checked against the
 * on-grid decay of the window and of its Fourier transform.
 */
struct Window {
    GridFunction g;
    std::string kind = "custom";
    std::optional<double> gelfand_shilov_s;

    void validate() const;  // nonzero, finite
};

/// Gaussian e^{-|x|^2/(2 width^2)} normalized to unit L^2 norm.
Window gaussian_window(const GridSpec& spec, double width,
                       std::optional<double> gelfand_shilov_s = std::nullopt);

struct WindowDecayReport {
    bool pass = false;
    double space_epsilon = 0.0, space_log_C = 0.0;
    double freq_epsilon = 0.0, freq_log_C = 0.0;
};

/// Checks |g(x)| <= C e^{-eps |x|^{1/s}} and the same for the transform via
/// the decay rate of shell maxima: between the half-radius and full-radius
/// shells the profile predicts a log-drop factor (r2/r1)^{1/s}, which slower
/// (e.g. polynomial) decay cannot match.
WindowDecayReport validate_window(const Window& w, double s);

/// V_phi f sampled on (space grid) x (frequency grid); x-major storage.
struct STFTMatrix {
    GridSpec spec;
    std::vector<cplx> values;

    cplx& at(std::size_t x_flat, std::size_t xi_flat);
    const cplx& at(std::size_t x_flat, std::size_t xi_flat) const;

    /// l^2 norm with phase-space measure dx^n * dxi^n.
    double mixed_l2_norm() const;
};

/// Periodic shift by whole grid steps: (T f)(x_j) = f(x_{j-j0}).
GridFunction translate_steps(const GridFunction& f, std::span<const int> j0);
/// Periodic shift by a point of the space grid; rejects off-grid x0.
GridFunction translate(const GridFunction& f, std::span<const double> x0);

/// (M f)(x_j) = e^{i xi0 . x_j} f(x_j) with xi0 = m0 * dxi on the lattice.
GridFunction modulate_steps(const GridFunction& f, std::span<const int> m0);
/// Same, from a frequency value; rejects off-lattice xi0.
GridFunction modulate(const GridFunction& f, std::span<const double> xi0);

/// f*(x) = conj(f(-x)) with periodic index reflection.
GridFunction involution(const GridFunction& f);

/// Discrete inner product (a, b) = sum a conj(b) dx^n.
cplx inner_product(const GridFunction& a, const GridFunction& b);

/// V_phi f(x, .) = F(f . T_x conj(phi)) per space-grid column.
STFTMatrix stft(const GridFunction& f, const Window& phi);

/// Same object computed on the frequency side via
/// V_phi f(x, xi) = e^{-i x.xi} V_{phi^}f^(xi, -x).
STFTMatrix stft_spectral(const GridFunction& f, const Window& phi);

/**
 * Cross-checks the equivalent STFT representations against the base
 * windowed-transform path and the convolution-domination inequality.
 * Deviations are max absolute differences; the domination margin is the
 * min over sampled points of RHS - LHS (nonnegative when the inequality
 * holds). Sample points are drawn deterministically from `seed`.
 */
struct IdentityReport {
    double dev_inner = 0.0;          // inner-product form
    double dev_spectral_fourier = 0.0;  // modulated transform of windowed spectrum
    double dev_spectral_stft = 0.0;  // spectral-side STFT form
    double dev_conv_space = 0.0;     // convolution form in x
    double dev_conv_freq = 0.0;      // convolution form in xi
    double domination_margin = 0.0;

    double max_deviation() const;
};

IdentityReport verify_identities(const GridFunction& f, const Window& phi, const Window& gamma,
                                 std::uint64_t seed = 1);

/// Inversion: f = (2 pi)^{-n/2} <gamma,phi>^{-1} sum V(x,xi) M_xi T_x gamma dxi dx.
GridFunction istft(const STFTMatrix& V, const Window& gamma, const Window& phi);

/**
 * Fourier coefficients of a 2 pi-periodic f through a window whose
 * 2 pi-translates sum to 1 on the grid (checked to 1e-6):
 * c_alpha = (2 pi)^{-n} sum_j f phi e^{-i x_j . alpha} dx^n.
 */
struct CoefficientTable {
    int n = 0;
    int alpha_max = 0;
    std::vector<cplx> c;  // row-major over alpha in [-alpha_max, alpha_max]^n

    cplx at(std::span<const int> alpha) const;
};

CoefficientTable periodic_coefficients(const GridFunction& f, const Window& phi, int alpha_max);

/// CSV rows (x-index..., xi-index..., re, im) plus a JSON side file with the
/// grid spec and window descriptor.
void save_csv(const STFTMatrix& V, const Window& phi, const std::string& csv_path,
              const std::string& json_header_path);

}  // namespace tfmod
