#pragma once

#include <stdexcept>
#include <string>

namespace qiso {

// Invalid inputs: out-of-domain arguments, malformed regions, infeasible
// parameters. The CLI maps these to exit code 3.
struct domain_error : std::runtime_error {
    explicit domain_error(const std::string& what) : std::runtime_error(what) {}
};

// Boundary of the region meets the probe circle tangentially or along a
// shared arc where a transversal crossing is required. Callers perturb
// the center and retry.
struct transversality_error : domain_error {
    explicit transversality_error(const std::string& what) : domain_error(what) {}
};

// The region is indistinguishable from a ball; delta/lambda^2 is
// ill-conditioned below the asymmetry floor.
struct near_ball_error : domain_error {
    explicit near_ball_error(const std::string& what) : domain_error(what) {}
};

// A parameter sits on a removable or genuine singularity of a closed form
// (vanishing sine, zero radius).
struct singular_error : domain_error {
    explicit singular_error(const std::string& what) : domain_error(what) {}
};

// Iteration failed to converge where the mathematics guarantees it.
// The CLI maps these to exit code 1.
struct numeric_error : std::runtime_error {
    explicit numeric_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace qiso
