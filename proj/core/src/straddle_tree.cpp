#include "jtprop/straddle_tree.hpp"

#include <bit>
#include <stdexcept>
#include <unordered_set>

namespace jtprop {

std::int32_t StraddleTree::add_root(VarId label) {
  if (!nodes_.empty()) throw std::logic_error("add_root: tree not empty");
  nodes_.push_back(Node{label, kNone, kNone, kNone, kNone});
  return 0;
}

std::int32_t StraddleTree::add_root_leaf() {
  if (!nodes_.empty()) throw std::logic_error("add_root_leaf: tree not empty");
  nodes_.push_back(Node{0, kNone, kNone, kNone, 0});
  leaf_count_ = 1;
  return 0;
}

std::int32_t StraddleTree::add_internal(std::int32_t parent, bool right_side, VarId label) {
  auto id = static_cast<std::int32_t>(nodes_.size());
  nodes_.push_back(Node{label, kNone, kNone, parent, kNone});
  (right_side ? nodes_[parent].right : nodes_[parent].left) = id;
  return id;
}

std::int32_t StraddleTree::add_leaf(std::int32_t parent, bool right_side) {
  auto id = static_cast<std::int32_t>(nodes_.size());
  nodes_.push_back(Node{0, kNone, kNone, parent, static_cast<std::int32_t>(leaf_count_++)});
  (right_side ? nodes_[parent].right : nodes_[parent].left) = id;
  return id;
}

StraddleTree StraddleTree::single_leaf() {
  StraddleTree t;
  t.add_root_leaf();
  return t;
}

StraddleTree StraddleTree::power_set(const Scope& x) {
  if (x.empty()) return single_leaf();
  StraddleTree t;
  t.nodes_.reserve((std::size_t{2} << x.size()) - 1);
  t.add_root(x[0]);
  // Depth-first; leaf_index accumulates the subset's table index over x.
  struct Item {
    std::int32_t node;
    std::size_t depth;
    std::uint64_t index_bits;
  };
  std::vector<Item> stack{{0, 0, 0}};
  while (!stack.empty()) {
    Item it = stack.back();
    stack.pop_back();
    for (int side = 1; side >= 0; --side) {
      bool right = side == 1;
      std::uint64_t bits = it.index_bits | (right ? (std::uint64_t{1} << it.depth) : 0);
      if (it.depth + 1 == x.size()) {
        auto id = static_cast<std::int32_t>(t.nodes_.size());
        t.nodes_.push_back(Node{0, kNone, kNone, it.node, static_cast<std::int32_t>(bits)});
        (right ? t.nodes_[it.node].right : t.nodes_[it.node].left) = id;
      } else {
        auto id = t.add_internal(it.node, right, x[it.depth + 1]);
        stack.push_back({id, it.depth + 1, bits});
      }
    }
  }
  t.leaf_count_ = std::size_t{1} << x.size();
  return t;
}

StraddleTree StraddleTree::copy_subtree(const StraddleTree& src, std::int32_t r) {
  StraddleTree out;
  if (src.is_leaf(r)) return single_leaf();
  out.add_root(src.node(r).label);
  struct Item {
    std::int32_t src_node;
    std::int32_t dst_node;
  };
  // Right pushed first so the left branch is emitted first: leaf indices come
  // out in leaf-step order.
  std::vector<Item> stack{{r, 0}};
  while (!stack.empty()) {
    Item it = stack.back();
    stack.pop_back();
    for (int side = 1; side >= 0; --side) {
      bool right = side == 1;
      std::int32_t child = right ? src.node(it.src_node).right : src.node(it.src_node).left;
      if (src.is_leaf(child)) {
        out.add_leaf(it.dst_node, right);
      } else {
        auto id = out.add_internal(it.dst_node, right, src.node(child).label);
        stack.push_back({child, id});
      }
    }
  }
  // Reassign leaf indices in DFS order (the stack above emits right first).
  std::int32_t next = 0;
  std::vector<std::int32_t> dfs{0};
  std::vector<std::int32_t> order;
  while (!dfs.empty()) {
    std::int32_t n = dfs.back();
    dfs.pop_back();
    if (out.is_leaf(n)) {
      out.nodes_[n].leaf_index = next++;
      continue;
    }
    dfs.push_back(out.nodes_[n].right);
    dfs.push_back(out.nodes_[n].left);
  }
  (void)order;
  return out;
}

std::vector<SubsetMask> StraddleTree::leaf_masks() const {
  std::vector<SubsetMask> out(leaf_count_, 0);
  struct Item {
    std::int32_t node;
    SubsetMask mask;
  };
  std::vector<Item> stack{{0, 0}};
  while (!stack.empty()) {
    Item it = stack.back();
    stack.pop_back();
    const Node& n = nodes_[it.node];
    if (n.left == kNone) {
      out[n.leaf_index] = it.mask;
      continue;
    }
    stack.push_back({n.right, it.mask | var_bit(n.label)});
    stack.push_back({n.left, it.mask});
  }
  return out;
}

std::int32_t StraddleTree::find_leaf(SubsetMask m) const {
  std::int32_t cur = 0;
  SubsetMask acc = 0;
  while (!is_leaf(cur)) {
    const Node& n = nodes_[cur];
    if (m & var_bit(n.label)) {
      acc |= var_bit(n.label);
      cur = n.right;
    } else {
      cur = n.left;
    }
  }
  return acc == m ? cur : kNone;
}

void StraddleTree::collect_labels(std::int32_t r, std::vector<VarId>& out) const {
  std::vector<std::int32_t> stack{r};
  SubsetMask seen = 0;
  while (!stack.empty()) {
    std::int32_t n = stack.back();
    stack.pop_back();
    if (is_leaf(n)) continue;
    seen |= var_bit(nodes_[n].label);
    stack.push_back(nodes_[n].left);
    stack.push_back(nodes_[n].right);
  }
  for (VarId v = 1; seen != 0; ++v, seen >>= 1)
    if (seen & 1) out.push_back(v);
}

std::size_t StraddleTree::subtree_vertex_count(std::int32_t r) const {
  std::size_t count = 0;
  std::vector<std::int32_t> stack{r};
  while (!stack.empty()) {
    std::int32_t n = stack.back();
    stack.pop_back();
    ++count;
    if (!is_leaf(n)) {
      stack.push_back(nodes_[n].left);
      stack.push_back(nodes_[n].right);
    }
  }
  return count;
}

std::size_t StraddleTree::subtree_leaf_count(std::int32_t r) const {
  return (subtree_vertex_count(r) + 1) / 2;
}

bool is_downward_closed(std::span<const SubsetMask> sets) {
  std::unordered_set<SubsetMask> have(sets.begin(), sets.end());
  for (SubsetMask z : sets) {
    SubsetMask rest = z;
    while (rest != 0) {
      SubsetMask bit = rest & (~rest + 1);
      if (!have.count(z & ~bit)) return false;
      rest &= ~bit;
    }
  }
  return true;
}

}  // namespace jtprop
