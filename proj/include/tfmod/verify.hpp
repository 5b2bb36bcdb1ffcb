#pragma once

#include <string>

#include "tfmod/norms.hpp"

namespace tfmod {

/**
 * Configuration for the built-in verification run. JSON schema mirrors the
 * CLI flags: {"n","N","L_over_pi","K","p","q","weight","seed","window":{...}}.
 */
struct VerifyConfig {
    int n = 1;
    int N = 256;
    double L_over_pi = 8.0;
    int K = 8;
    double p = 2.0;
    double q = 2.0;
    WeightSpec weight = WeightSpec::polynomial(2.0);
    std::uint64_t seed = 42;
    std::string window_descriptor = R"({"kind":"gaussian","width":1.0})";

    static VerifyConfig from_json(const std::string& json_text);
    void validate() const;
};

/**
 * Runs every verification suite and returns a JSON report:
 * {"suites":[{"name",...,"checks":[{"name","tolerance","observed","pass"}],
 *   "pass"}], "pass"}. Deterministic for a fixed config.
 */
std::string run_verify(const VerifyConfig& config, bool* all_pass);

}  // namespace tfmod
