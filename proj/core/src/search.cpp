#include "jtprop/search.hpp"

namespace jtprop {

StraddleTree SearchContext::build_union_tree(std::span<const TreeRef> trees, SearchStats* stats) {
  if (trees.empty()) throw std::invalid_argument("build_union_tree: no inputs");
  std::vector<VarId> labels = gather_labels(trees);
  if (labels.empty()) {
    // All inputs are single leaves; consume them so the context stays clean.
    synchronized_search(trees, [](SubsetMask, std::span<const LeafHit>) {}, stats);
    return StraddleTree::single_leaf();
  }

  StraddleTree out;
  out.add_root(labels.front());
  // The active-vertex cursor: the chain from the root to the vertex under
  // construction, with each vertex's current orientation.
  std::vector<std::int32_t> active{0};
  std::vector<std::uint8_t> right_oriented{0};

  auto slot_free = [&](std::int32_t v, bool right) {
    return (right ? out.node(v).right : out.node(v).left) == StraddleTree::kNone;
  };

  sync_impl(
      trees,
      [&](SubsetMask, std::span<const LeafHit>) {
        assert(slot_free(active.back(), right_oriented.back()));
        out.add_leaf(active.back(), right_oriented.back());
      },
      [&](std::uint64_t step_index, VarId e, std::uint8_t visit) {
        if (step_index == 1) return;  // the pre-created root covers min(X)'s first visit
        if (alive_count_[e - 1] == 0) return;
        switch (visit) {
          case 1: {
            assert(slot_free(active.back(), right_oriented.back()));
            std::int32_t w = out.add_internal(active.back(), right_oriented.back(), e);
            active.push_back(w);
            right_oriented.push_back(0);
            break;
          }
          case 2:
            right_oriented.back() = 1;
            break;
          case 3:
            if (active.size() > 1) {
              active.pop_back();
              right_oriented.pop_back();
            }
            break;
        }
      },
      stats);
  return out;
}

}  // namespace jtprop
