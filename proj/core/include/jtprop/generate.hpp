#pragma once

#include <cstdint>
#include <optional>

#include "jtprop/junction_tree.hpp"

namespace jtprop {

/// A synthetic instance: the factorisation, and for kinds that fix a tree
/// shape also the junction tree with an explicit factor assignment.
struct GeneratedInstance {
  Factorisation f;
  std::optional<JunctionTree> jt;
  std::vector<std::int32_t> assignment;
};

/// One center scope {1..center_size} carrying a full-scope factor, plus
/// `degree` leaf vertices, each a window of sep_size consecutive center
/// variables (rotating) with its own factor. Leaves come first in the vertex
/// order so the max-cardinality root is the center. Entries are uniform in
/// [0.5, 2).
struct StarParams {
  std::uint32_t center_size = 8;
  std::uint32_t sep_size = 2;
  std::uint32_t degree = 4;
};
GeneratedInstance generate_star(const StarParams& p, std::uint64_t seed);

/// Factors over consecutive windows {i..i+scope-1}, i = 1..length.
struct ChainParams {
  std::uint32_t length = 4;
  std::uint32_t scope = 3;
};
GeneratedInstance generate_chain(const ChainParams& p, std::uint64_t seed);

/// Random scopes of size 1..max_scope, coverage fixed up with singletons.
/// Entries uniform in [0.5, 2); each entry is zeroed with probability
/// zero_prob.
struct RandomParams {
  std::uint32_t var_count = 8;
  std::uint32_t factor_count = 6;
  std::uint32_t max_scope = 4;
  double zero_prob = 0.0;
};
GeneratedInstance generate_random(const RandomParams& p, std::uint64_t seed);

}  // namespace jtprop
