#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tfmod/grid.hpp"

namespace tfmod {

/// Deterministic 64-bit generator (splitmix64); identical streams for
/// identical seeds on every build of this library.
struct Rng {
    std::uint64_t state;

    explicit Rng(std::uint64_t seed) : state(seed) {}
    std::uint64_t next();
    double uniform();                    // [0, 1)
    double symmetric();                  // [-1, 1)
    int integer(int lo, int hi);         // inclusive range
};

/**
 * Closed-form registry (JSON descriptors):
 *   {"kind":"gaussian","width":w,"amplitude":a}
 *   {"kind":"modulated_gaussian","width":w,"xi":[...],"x0":[...]}
 *   {"kind":"poly_gaussian","width":w,"coeffs":[a0,...]}        (n = 1)
 *   {"kind":"trig_poly","coeffs":[{"k":[...],"re":r,"im":i},...]}
 *   {"kind":"random_bandlimited","seed":s,"K":k,"real":bool}
 *   {"kind":"samples","re":[...],"im":[...]}
 */
GridFunction make_function(const GridSpec& spec, const std::string& descriptor_json);

/// Trig polynomial with uniform random coefficients on |k|_inf <= K;
/// `real` enforces Hermitian coefficient symmetry.
GridFunction random_bandlimited(const GridSpec& spec, std::uint64_t seed, int K, bool real);

/// (sum_j a_j x^j) e^{-x^2/(2 w^2)} with random degree <= 6 and width in
/// [0.7, 1.6]; n = 1 only.
GridFunction random_poly_gaussian(const GridSpec& spec, std::uint64_t seed);

std::vector<GridFunction> corpus_bandlimited(const GridSpec& spec, int count, std::uint64_t seed,
                                             int K, bool real);
std::vector<GridFunction> corpus_poly_gaussian(const GridSpec& spec, int count,
                                               std::uint64_t seed);

/// Function file: {"grid":{"n","N","L_over_pi"},"values":{"re":[],"im":[]}}.
void save_function(const GridFunction& f, const std::string& path);
GridFunction load_function(const std::string& path);

/// Grid from {"n":..,"N":..,"L_over_pi":..} or {"n","N","L"}.
GridSpec grid_from_json(const std::string& json_text);

}  // namespace tfmod
