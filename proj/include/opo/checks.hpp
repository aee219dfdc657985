#pragma once

// Self-check suite behind `opo check`: re-verifies the model's algebraic
// invariants and closed-form agreements on a seeded random sample.

#include <cstdint>
#include <string>
#include <vector>

#include "opo/cavity.hpp"

namespace opo {

enum class Fault {
    None,
    /// Replace the left mirror by a +1 reflection.
    LeftMirrorSign,
};

Fault fault_from_string(std::string_view name);

struct CheckOptions {
    std::uint64_t seed = 12345;
    std::size_t samples = 200;
    Fault fault = Fault::None;
};

struct CheckOutcome {
    std::string name;
    double max_deviation = 0.0;
    double tolerance = 0.0;
    bool passed = false;
};

struct CheckReport {
    std::vector<CheckOutcome> outcomes;
    /// Hash of the sampled parameter tuples; equal seeds give equal values.
    std::uint64_t sample_fingerprint = 0;

    bool all_passed() const;
};

/// The standard network, optionally with a deliberate fault.
CavityNetwork network_with_fault(const CavityParams& p, Fault fault);

CheckReport run_invariant_checks(const CheckOptions& options);

}  // namespace opo
