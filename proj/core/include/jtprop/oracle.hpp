#pragma once

#include "jtprop/junction_tree.hpp"
#include "jtprop/propagation.hpp"

namespace jtprop {

inline constexpr std::uint32_t kBruteForceMaxVars = 24;

/// Exact marginals by evaluating the factor product on every labelling.
/// Refuses more than 24 variables; throws InconsistentModelError when the
/// product is identically zero. This is the reference every engine is
/// checked against.
MarginalResult brute_force_marginals(const Factorisation& f);

}  // namespace jtprop
