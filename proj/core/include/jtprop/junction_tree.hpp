#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "jtprop/potential.hpp"
#include "jtprop/scope.hpp"

namespace jtprop {

/// A set of factors whose product is proportional to the joint distribution
/// over variables 1..var_count. Every variable must occur in some factor.
struct Factorisation {
  std::uint32_t var_count = 0;
  std::vector<Potential> factors;

  Scope all_vars() const {
    std::vector<VarId> v(var_count);
    for (std::uint32_t i = 0; i < var_count; ++i) v[i] = i + 1;
    return Scope(std::move(v));
  }
};

struct JunctionTree {
  std::vector<Scope> vertices;
  std::vector<std::pair<std::int32_t, std::int32_t>> edges;  // unordered pairs

  std::size_t vertex_count() const noexcept { return vertices.size(); }
  Scope separator(std::size_t edge) const {
    return vertices[edges[edge].first].intersect(vertices[edges[edge].second]);
  }
  std::vector<std::vector<std::int32_t>> adjacency() const;  // neighbour lists
  std::size_t width() const;
};

struct JtViolation {
  enum class Kind { NotATree, Coverage, RunningIntersection, FactorUnhoused };
  Kind kind;
  std::string message;
};

/// Axiom check; an empty result means the tree is a valid junction tree for
/// the factorisation. Violations are reported with witnesses, not thrown.
std::vector<JtViolation> validate(const JunctionTree& jt, const Factorisation& f);

/// Heuristic constructor: min-fill elimination over the factor interaction
/// graph (ties to the smallest variable id), elimination cliques with subsumed
/// cliques dropped, connected by a maximum-separator-cardinality spanning tree
/// (ties to the lower vertex indices). Deterministic for a given input.
JunctionTree construct_junction_tree(const Factorisation& f);

/// Factor i -> lowest-index vertex containing its scope. Throws when some
/// factor fits nowhere.
std::vector<std::int32_t> assign_factors(const JunctionTree& jt, const Factorisation& f);

enum class RootStrategy { Explicit, MaxCardinality };

/// Parent/children orientation from a chosen root, breadth-first.
struct RootedTree {
  std::int32_t root = 0;
  std::vector<std::int32_t> parent;                 // -1 at the root
  std::vector<std::vector<std::int32_t>> children;
  std::vector<std::int32_t> bfs_order;              // root first
};

RootedTree root_tree(const JunctionTree& jt, RootStrategy strategy,
                     std::int32_t explicit_root = -1);

}  // namespace jtprop
