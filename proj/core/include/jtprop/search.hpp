#pragma once

#include <cassert>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "jtprop/scope.hpp"
#include "jtprop/straddle_tree.hpp"

namespace jtprop {

/// A straddle- or info-tree participating in a simultaneous search; root may
/// point at an interior node so subtrees can be searched in place.
struct TreeRef {
  const StraddleTree* tree = nullptr;
  std::int32_t root = 0;
};

/// A leaf currently in the search set L.
struct LeafHit {
  std::int32_t input;       // index into the searched tree span
  std::int32_t node;        // node id within that tree
  std::int32_t value_slot;  // the leaf's value index
};

struct SearchStats {
  std::uint64_t time_steps = 0;
  std::uint64_t leaf_steps = 0;
  std::uint64_t delivered_leaf_steps = 0;  // leaf-steps whose L was non-empty
  std::uint64_t pruned_subtrees = 0;
};

/// Token on the ghost-search stack: (label, visit) with visit in {1,2,3} for
/// internal vertices, or visit == 0 for a leaf token.
struct GhostToken {
  VarId label = 0;
  std::uint8_t visit = 0;
};

/// Stack-driven simulation of a left-first depth-first walk over the
/// power-set tree of x, without materializing it. The visitor runs at the end
/// of every time-step with the token observed at the step's start and the
/// current right-branch subset (meaningful at leaf tokens, where it is the
/// subset reached). Requires a non-empty x.
template <typename StepFn>
void ghost_search(const Scope& x, StepFn&& step, SearchStats* stats = nullptr) {
  if (x.empty()) throw std::invalid_argument("ghost_search: empty variable set");
  struct Tok {
    std::uint32_t idx;  // position in x; idx == x.size() encodes the leaf token
    std::uint8_t visit;
  };
  std::vector<Tok> stack;
  stack.reserve(2 * x.size() + 1);
  stack.push_back({0, 1});
  SubsetMask mask = 0;
  const std::uint32_t last = static_cast<std::uint32_t>(x.size()) - 1;
  while (!stack.empty()) {
    Tok top = stack.back();
    SubsetMask mask_at_start = mask;
    GhostToken token;
    if (top.visit == 0) {
      stack.pop_back();
    } else {
      token = {x[top.idx], top.visit};
      stack.pop_back();
      switch (top.visit) {
        case 1:
          stack.push_back({top.idx, 2});
          stack.push_back(top.idx == last ? Tok{0, 0} : Tok{top.idx + 1, 1});
          break;
        case 2:
          mask |= var_bit(x[top.idx]);
          stack.push_back({top.idx, 3});
          stack.push_back(top.idx == last ? Tok{0, 0} : Tok{top.idx + 1, 1});
          break;
        case 3:
          mask &= ~var_bit(x[top.idx]);
          break;
      }
    }
    if (stats) {
      ++stats->time_steps;
      if (top.visit == 0) ++stats->leaf_steps;
    }
    step(token, mask_at_start);
  }
}

/// Workspace for full- and synchronised-searches: the per-variable array A of
/// active internal vertices and the set L of active leaves. A context must be
/// clean (every A(e) and L empty) when a search starts; searches restore that
/// invariant on termination. One context serves one search at a time.
class SearchContext {
 public:
  explicit SearchContext(std::size_t var_count)
      : avar_(var_count), alive_count_(var_count, 0) {}

  std::size_t var_count() const noexcept { return avar_.size(); }

  bool is_clean() const noexcept {
    if (!leaf_hits_.empty() || leaf_live_ != 0) return false;
    for (auto c : alive_count_)
      if (c != 0) return false;
    return true;
  }

  /// At every leaf-step of a full-search, L contains for each searched tree
  /// over P(Y) the single leaf with τ(l) = Z ∩ Y. The visitor is invoked at
  /// every leaf-step as visit(Z, L, changed, cursor) where `changed` lists the
  /// inputs whose live leaf differs from the previous leaf-step and `cursor`
  /// maps each input to its live leaf's value slot.
  template <typename LeafFn>
  void full_search(std::span<const TreeRef> trees, LeafFn&& visit, SearchStats* stats = nullptr);

  /// At every leaf-step of a synchronised-search, L contains exactly the
  /// leaves with τ(l) = Z across all searched trees; the visitor fires only
  /// when L is non-empty (descents that can produce no leaf may be pruned, so
  /// empty leaf-steps are not part of the interface). visit(Z, L).
  template <typename LeafFn>
  void synchronized_search(std::span<const TreeRef> trees, LeafFn&& visit,
                           SearchStats* stats = nullptr);

  /// Builds the straddle-tree of the union of the inputs' families by growing
  /// an active-vertex cursor during a synchronised search of the inputs.
  StraddleTree build_union_tree(std::span<const TreeRef> trees, SearchStats* stats = nullptr);

 private:
  struct Slot {
    std::int32_t input;
    std::int32_t node;
    // Placement of the children this vertex added (full-search removals).
    std::int32_t left_pos = -1, right_pos = -1;
    VarId left_var = 0, right_var = 0;  // 0 when the child went to L
    std::uint8_t left_in_leaves = 0, right_in_leaves = 0;
    std::uint8_t alive = 1;
  };

  struct Placement {
    bool in_leaves;
    VarId var;
    std::int32_t pos;
  };

  Placement add_child(std::span<const TreeRef> trees, std::int32_t input, std::int32_t node);
  void kill(const Placement& p);
  void compact_leaves();
  void compact_avar(VarId v);
  void clear_avar(VarId v);
  std::vector<VarId> gather_labels(std::span<const TreeRef> trees) const;
  std::vector<Placement> init_roots(std::span<const TreeRef> trees);
  void remove_roots(const std::vector<Placement>& roots);
  bool suffix_empty(std::size_t from_idx, const std::vector<VarId>& labels) const;

  template <typename LeafFn, typename TokenFn>
  void sync_impl(std::span<const TreeRef> trees, LeafFn&& leaf, TokenFn&& token,
                 SearchStats* stats);

  std::vector<std::vector<Slot>> avar_;     // A, indexed by var-1
  std::vector<std::int32_t> alive_count_;   // live slots per var
  std::vector<LeafHit> leaf_hits_;          // L
  std::vector<std::uint8_t> leaf_alive_;
  std::int32_t leaf_live_ = 0;

  // Cursor tracking for full-search visitors.
  std::vector<std::int32_t> cursor_slot_;
  std::vector<std::int32_t> cursor_node_;
  std::vector<std::int32_t> changed_;
  std::vector<std::uint8_t> changed_flag_;
};

// ---------------------------------------------------------------------------
// Implementation.

inline SearchContext::Placement SearchContext::add_child(std::span<const TreeRef> trees,
                                                          std::int32_t input, std::int32_t node) {
  const StraddleTree& t = *trees[input].tree;
  if (t.is_leaf(node)) {
    auto pos = static_cast<std::int32_t>(leaf_hits_.size());
    leaf_hits_.push_back({input, node, t.node(node).leaf_index});
    leaf_alive_.push_back(1);
    ++leaf_live_;
    if (!cursor_slot_.empty()) {
      cursor_slot_[input] = t.node(node).leaf_index;
      cursor_node_[input] = node;
      if (!changed_flag_[input]) {
        changed_flag_[input] = 1;
        changed_.push_back(input);
      }
    }
    return {true, 0, pos};
  }
  VarId v = t.node(node).label;
  auto pos = static_cast<std::int32_t>(avar_[v - 1].size());
  avar_[v - 1].push_back(Slot{input, node});
  ++alive_count_[v - 1];
  return {false, v, pos};
}

inline void SearchContext::kill(const Placement& p) {
  if (p.in_leaves) {
    leaf_alive_[p.pos] = 0;
    --leaf_live_;
  } else {
    avar_[p.var - 1][p.pos].alive = 0;
    --alive_count_[p.var - 1];
  }
}

inline void SearchContext::compact_leaves() {
  while (!leaf_alive_.empty() && !leaf_alive_.back()) {
    leaf_alive_.pop_back();
    leaf_hits_.pop_back();
  }
}

inline void SearchContext::compact_avar(VarId v) {
  auto& vec = avar_[v - 1];
  while (!vec.empty() && !vec.back().alive) vec.pop_back();
}

inline void SearchContext::clear_avar(VarId v) {
  alive_count_[v - 1] = 0;
  avar_[v - 1].clear();
}

inline std::vector<VarId> SearchContext::gather_labels(std::span<const TreeRef> trees) const {
  SubsetMask seen = 0;
  std::vector<VarId> tmp;
  for (const TreeRef& r : trees) {
    tmp.clear();
    r.tree->collect_labels(r.root, tmp);
    for (VarId v : tmp) seen |= var_bit(v);
  }
  std::vector<VarId> out;
  for (VarId v = 1; seen != 0; ++v, seen >>= 1)
    if (seen & 1) {
      if (v > var_count()) throw std::invalid_argument("search: label exceeds context size");
      out.push_back(v);
    }
  return out;
}

inline std::vector<SearchContext::Placement> SearchContext::init_roots(
    std::span<const TreeRef> trees) {
  std::vector<Placement> roots;
  roots.reserve(trees.size());
  for (std::size_t i = 0; i < trees.size(); ++i)
    roots.push_back(add_child(trees, static_cast<std::int32_t>(i), trees[i].root));
  return roots;
}

inline void SearchContext::remove_roots(const std::vector<Placement>& roots) {
  for (const Placement& p : roots) kill(p);
  compact_leaves();
  for (const Placement& p : roots)
    if (!p.in_leaves) compact_avar(p.var);
}

inline bool SearchContext::suffix_empty(std::size_t from_idx,
                                        const std::vector<VarId>& labels) const {
  for (std::size_t i = from_idx; i < labels.size(); ++i)
    if (alive_count_[labels[i] - 1] != 0) return false;
  return true;
}

template <typename LeafFn>
void SearchContext::full_search(std::span<const TreeRef> trees, LeafFn&& visit,
                                SearchStats* stats) {
  if (!is_clean()) throw std::logic_error("full_search: search context not clean");
  if (trees.empty()) return;

  cursor_slot_.assign(trees.size(), -1);
  cursor_node_.assign(trees.size(), StraddleTree::kNone);
  changed_flag_.assign(trees.size(), 0);
  changed_.clear();

  std::vector<VarId> labels = gather_labels(trees);
  std::vector<Placement> roots = init_roots(trees);

  if (labels.empty()) {
    // Every input is a single leaf: one leaf-step for Z = ∅.
    if (stats) {
      ++stats->time_steps;
      ++stats->leaf_steps;
      ++stats->delivered_leaf_steps;
    }
    visit(SubsetMask{0}, std::span<const LeafHit>(leaf_hits_),
          std::span<const std::int32_t>(changed_), cursor_slot_);
    changed_.clear();
    remove_roots(roots);
    cursor_slot_.clear();
    cursor_node_.clear();
    assert(is_clean());
    return;
  }

  Scope x(labels);
  ghost_search(
      x,
      [&](GhostToken tok, SubsetMask mask) {
        if (tok.visit == 0) {
          if (stats && leaf_live_ != 0) ++stats->delivered_leaf_steps;
          visit(mask, std::span<const LeafHit>(leaf_hits_),
                std::span<const std::int32_t>(changed_), cursor_slot_);
          for (std::int32_t i : changed_) changed_flag_[i] = 0;
          changed_.clear();
          return;
        }
        VarId e = tok.label;
        auto& slots = avar_[e - 1];
        switch (tok.visit) {
          case 1:
            for (std::size_t s = 0; s < slots.size(); ++s) {
              if (!slots[s].alive) continue;
              Placement p = add_child(trees, slots[s].input,
                                      trees[slots[s].input].tree->node(slots[s].node).left);
              slots[s].left_in_leaves = p.in_leaves;
              slots[s].left_var = p.var;
              slots[s].left_pos = p.pos;
            }
            break;
          case 2: {
            for (auto& s : slots)
              if (s.alive) kill({static_cast<bool>(s.left_in_leaves), s.left_var, s.left_pos});
            compact_leaves();
            for (auto& s : slots)
              if (s.alive && !s.left_in_leaves) compact_avar(s.left_var);
            for (std::size_t s = 0; s < slots.size(); ++s) {
              if (!slots[s].alive) continue;
              Placement p = add_child(trees, slots[s].input,
                                      trees[slots[s].input].tree->node(slots[s].node).right);
              slots[s].right_in_leaves = p.in_leaves;
              slots[s].right_var = p.var;
              slots[s].right_pos = p.pos;
            }
            break;
          }
          case 3:
            for (auto& s : slots)
              if (s.alive) kill({static_cast<bool>(s.right_in_leaves), s.right_var, s.right_pos});
            compact_leaves();
            for (auto& s : slots)
              if (s.alive && !s.right_in_leaves) compact_avar(s.right_var);
            break;
        }
      },
      stats);

  remove_roots(roots);
  cursor_slot_.clear();
  cursor_node_.clear();
  assert(is_clean());
}

template <typename LeafFn, typename TokenFn>
void SearchContext::sync_impl(std::span<const TreeRef> trees, LeafFn&& leaf, TokenFn&& token,
                              SearchStats* stats) {
  if (!is_clean()) throw std::logic_error("synchronized_search: search context not clean");
  if (trees.empty()) return;

  std::vector<VarId> labels = gather_labels(trees);
  init_roots(trees);

  if (labels.empty()) {
    if (stats) {
      ++stats->time_steps;
      ++stats->leaf_steps;
      ++stats->delivered_leaf_steps;
    }
    leaf(SubsetMask{0}, std::span<const LeafHit>(leaf_hits_));
    leaf_hits_.clear();
    leaf_alive_.clear();
    leaf_live_ = 0;
    assert(is_clean());
    return;
  }

  // Hand-rolled ghost loop: descents that can neither fill L nor deliver a
  // pending leaf are skipped. Skipping changes only the step counters.
  struct Tok {
    std::uint32_t idx;
    std::uint8_t visit;
  };
  std::vector<Tok> stack;
  stack.push_back({0, 1});
  const std::uint32_t last = static_cast<std::uint32_t>(labels.size()) - 1;
  SubsetMask mask = 0;
  std::uint64_t step_index = 0;
  while (!stack.empty()) {
    Tok top = stack.back();
    stack.pop_back();
    ++step_index;
    if (stats) ++stats->time_steps;
    if (top.visit == 0) {
      if (stats) ++stats->leaf_steps;
      if (leaf_live_ != 0) {
        if (stats) ++stats->delivered_leaf_steps;
        leaf(mask, std::span<const LeafHit>(leaf_hits_));
      }
      leaf_hits_.clear();
      leaf_alive_.clear();
      leaf_live_ = 0;
      continue;
    }
    VarId e = labels[top.idx];
    token(step_index, e, top.visit);
    if (top.visit == 1 || top.visit == 2) {
      if (leaf_live_ == 0 && suffix_empty(top.idx, labels)) {
        if (stats) ++stats->pruned_subtrees;
        continue;  // skip the whole descent, including this vertex's later visits
      }
    }
    switch (top.visit) {
      case 1:
        stack.push_back({top.idx, 2});
        stack.push_back(top.idx == last ? Tok{0, 0} : Tok{top.idx + 1, 1});
        for (std::size_t s = 0; s < avar_[e - 1].size(); ++s) {
          const Slot& sl = avar_[e - 1][s];
          add_child(trees, sl.input, trees[sl.input].tree->node(sl.node).left);
        }
        break;
      case 2:
        mask |= var_bit(e);
        stack.push_back({top.idx, 3});
        stack.push_back(top.idx == last ? Tok{0, 0} : Tok{top.idx + 1, 1});
        for (std::size_t s = 0; s < avar_[e - 1].size(); ++s) {
          const Slot& sl = avar_[e - 1][s];
          add_child(trees, sl.input, trees[sl.input].tree->node(sl.node).right);
        }
        break;
      case 3:
        mask &= ~var_bit(e);
        clear_avar(e);
        break;
    }
  }
  // Roots labelled min(X) were cleared by the final (min,3) token; leaves of
  // single-leaf inputs were consumed by the first leaf-step.
  assert(is_clean());
}

template <typename LeafFn>
void SearchContext::synchronized_search(std::span<const TreeRef> trees, LeafFn&& visit,
                                        SearchStats* stats) {
  sync_impl(
      trees, visit, [](std::uint64_t, VarId, std::uint8_t) {}, stats);
}

}  // namespace jtprop
