#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "jtprop/scope.hpp"

namespace jtprop {

/// Oriented binary tree encoding a downward-closed family ζ of subsets.
/// Internal vertices carry variable labels that strictly increase from parent
/// to child; each leaf l stands for the subset τ(l) = labels of the ancestors
/// whose right child is also an ancestor of l. A tree with |ζ| leaves has
/// exactly 2|ζ|-1 vertices. Leaves carry a value slot (leaf_index) so that
/// potentials and sparse formats can attach tables to the shape.
class StraddleTree {
 public:
  static constexpr std::int32_t kNone = -1;

  struct Node {
    VarId label = 0;  // 0 on leaves
    std::int32_t left = kNone;
    std::int32_t right = kNone;
    std::int32_t parent = kNone;
    std::int32_t leaf_index = kNone;
  };

  /// Balanced tree over the full power-set of x; the leaf for subset S gets
  /// leaf_index equal to the subset's table index over x, so the value array
  /// of a dense potential over x can back this shape directly.
  static StraddleTree power_set(const Scope& x);

  /// The tree for ζ = {∅}: a single leaf with leaf_index 0.
  static StraddleTree single_leaf();

  /// Fresh shape copy of the subtree rooted at r, leaf indices renumbered in
  /// leaf-step (DFS) order.
  static StraddleTree copy_subtree(const StraddleTree& t, std::int32_t r);

  std::int32_t root() const noexcept { return 0; }
  const Node& node(std::int32_t i) const { return nodes_[i]; }
  bool is_leaf(std::int32_t i) const { return nodes_[i].left == kNone; }
  std::size_t vertex_count() const noexcept { return nodes_.size(); }
  std::size_t leaf_count() const noexcept { return leaf_count_; }

  /// τ of every leaf, indexed by leaf_index.
  std::vector<SubsetMask> leaf_masks() const;

  /// Leaf node whose τ equals the mask, or kNone.
  std::int32_t find_leaf(SubsetMask m) const;

  /// Sorted distinct labels of the internal vertices under r (inclusive).
  void collect_labels(std::int32_t r, std::vector<VarId>& out) const;

  std::size_t subtree_vertex_count(std::int32_t r) const;
  std::size_t subtree_leaf_count(std::int32_t r) const;

  // Incremental construction (used by the power-set builder and the union
  // builder that grows S(ζ) during a synchronised search).
  std::int32_t add_root(VarId label);
  std::int32_t add_root_leaf();
  std::int32_t add_internal(std::int32_t parent, bool right_side, VarId label);
  std::int32_t add_leaf(std::int32_t parent, bool right_side);

 private:
  std::vector<Node> nodes_;
  std::size_t leaf_count_ = 0;
};

/// Downward-closure check for an explicit family of subsets.
bool is_downward_closed(std::span<const SubsetMask> sets);

}  // namespace jtprop
