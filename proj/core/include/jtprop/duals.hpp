#pragma once

#include <span>
#include <vector>

#include "jtprop/counters.hpp"
#include "jtprop/mzc.hpp"
#include "jtprop/potential.hpp"
#include "jtprop/search.hpp"
#include "jtprop/straddle_tree.hpp"

namespace jtprop {

/// Values attached to the leaves of a straddle tree, indexed by leaf_index.
template <typename V>
struct ValuedTree {
  StraddleTree shape;
  std::vector<V> values;
};

/// Sparse format of a potential restricted to a straddle-set.
using SparsePotential = ValuedTree<double>;

// Reference oracles: literal evaluation of the defining sums/products in
// O(3^|X|). The fast transforms are verified against these.
Potential p_dual_oracle(const Potential& phi);
Potential m_dual_oracle(const Potential& phi);

/// Potential -> p-dual, splitting on the smallest scope variable;
/// Θ(|X|·2^|X|) divisions on a dense table. Requires strictly positive
/// entries (zero-containing tables go through the MZC pipeline instead).
Potential transform1(const Potential& phi, OpCounters* ctr = nullptr);

/// m-dual -> potential, Θ(|X|·2^|X|) subtractions on a dense table.
Potential transform3(const Potential& mdual, OpCounters* ctr = nullptr);

/// p-duals of Υ_i -> sparse p-dual of ∏Υ_i over ζ = ∪ P(scope(Υ_i)).
/// Off-ζ entries of the product's p-dual are all 1 and are not stored.
SparsePotential product_of_duals(SearchContext& ctx, std::span<const Potential> duals,
                                 OpCounters* ctr = nullptr);

/// Sparse p-dual over ζ -> sparse m-dual over ζ, recursing on the smallest
/// variable. Works in place on the tree values; the only extra storage per
/// recursion level is one ϑ-sized table, so live values stay within
/// (|X|+1)·|ζ|.
void transform2_in_place(SearchContext& ctx, SparsePotential& sp, OpCounters* ctr = nullptr);
SparsePotential transform2(SearchContext& ctx, SparsePotential sp, OpCounters* ctr = nullptr);

/// Sparse m-dual of Γ over ζ = ∪P(D_i) -> dense m-duals of the D_i-marginals,
/// by restriction.
std::vector<Potential> marginalise_mduals(SearchContext& ctx, const SparsePotential& mdual,
                                          std::span<const Scope> targets,
                                          OpCounters* ctr = nullptr);

/// The five-stage pipeline: Ψ_i = marginal of ∏Υ_j onto scope(Υ_i) for every
/// i, computed entirely through the duals. Uses MZC arithmetic through the
/// product stage whenever any input entry is zero.
std::vector<Potential> operation2_via_duals(std::span<const Potential> inputs,
                                            OpCounters* ctr = nullptr);

/// Same pipeline with an explicit target list (each target must lie inside
/// some input scope). The pointer form avoids copying input tables.
std::vector<Potential> operation2_via_duals(std::span<const Potential> inputs,
                                            std::span<const Scope> targets,
                                            OpCounters* ctr = nullptr);
std::vector<Potential> operation2_via_duals(std::span<const Potential* const> inputs,
                                            std::span<const Scope> targets,
                                            OpCounters* ctr = nullptr);

}  // namespace jtprop
