#include "jtprop/duals.hpp"

#include <bit>
#include <stdexcept>
#include <type_traits>

namespace jtprop {
namespace {

double val_div(double a, double b) { return a / b; }
MzcNumber val_div(const MzcNumber& a, const MzcNumber& b) { return mzc_div(a, b); }
double val_add(double a, double b) { return a + b; }
MzcNumber val_add(const MzcNumber& a, const MzcNumber& b) { return mzc_add(a, b); }
double val_mul(double a, double b) { return a * b; }
MzcNumber val_mul(const MzcNumber& a, const MzcNumber& b) { return mzc_mul(a, b); }

template <typename V>
V val_one() {
  if constexpr (std::is_same_v<V, double>)
    return 1.0;
  else
    return MzcNumber{1.0, 0};
}

void require_positive(const Potential& phi, const char* who) {
  if (phi.has_zero_entry())
    throw std::invalid_argument(std::string(who) + ": zero entry outside MZC mode");
}

// In-place dense p-dual. Bits are combined from the largest scope variable
// down so that the smallest variable's split is resolved last, matching the
// min-first recursion.
template <typename V>
void transform1_table(std::span<V> t, std::size_t width, OpCounters* ctr) {
  const std::uint64_t n = t.size();
  for (std::size_t b = width; b-- > 0;) {
    const std::uint64_t bit = std::uint64_t{1} << b;
    for (std::uint64_t z = 0; z < n; ++z)
      if (!(z & bit)) t[z | bit] = val_div(t[z], t[z | bit]);
  }
  count_div(ctr, width * (n / 2));
  count_write(ctr, width * (n / 2));
}

// In-place dense m-dual inversion: ascending bits, v[z] -= v[z|bit].
void transform3_table(std::span<double> t, std::size_t width, OpCounters* ctr) {
  const std::uint64_t n = t.size();
  for (std::size_t b = 0; b < width; ++b) {
    const std::uint64_t bit = std::uint64_t{1} << b;
    for (std::uint64_t z = 0; z < n; ++z)
      if (!(z & bit)) t[z] -= t[z | bit];
  }
  count_add(ctr, width * (n / 2));
  count_write(ctr, width * (n / 2));
}

template <typename V>
ValuedTree<V> product_stage(SearchContext& ctx, std::span<const StraddleTree* const> shapes,
                            std::span<const std::vector<V>* const> duals, OpCounters* ctr) {
  std::vector<TreeRef> refs;
  refs.reserve(shapes.size());
  for (const StraddleTree* s : shapes) refs.push_back({s, 0});

  ValuedTree<V> out;
  out.shape = ctx.build_union_tree(refs);
  out.values.assign(out.shape.leaf_count(), val_one<V>());
  aux_acquire(ctr, out.values.size());

  std::vector<TreeRef> all;
  all.reserve(refs.size() + 1);
  all.push_back({&out.shape, 0});
  for (const TreeRef& r : refs) all.push_back(r);

  ctx.synchronized_search(all, [&](SubsetMask, std::span<const LeafHit> hits) {
    std::int32_t slot = -1;
    for (const LeafHit& h : hits)
      if (h.input == 0) {
        slot = h.value_slot;
        break;
      }
    if (slot < 0) return;
    V acc = val_one<V>();
    bool first = true;
    std::uint64_t muls = 0;
    for (const LeafHit& h : hits) {
      if (h.input == 0) continue;
      const V& v = (*duals[h.input - 1])[h.value_slot];
      if (first) {
        acc = v;
        first = false;
      } else {
        acc = val_mul(acc, v);
        ++muls;
      }
    }
    out.values[slot] = acc;
    count_mul(ctr, muls);
    count_write(ctr);
  });
  return out;
}

// Recursive sparse p-dual -> m-dual, in place over the subtree at r. One
// ϑ-sized side table per level holds the plus branch.
template <typename V>
void transform2_node(SearchContext& ctx, const StraddleTree& shape, std::vector<V>& values,
                     std::int32_t r, OpCounters* ctr) {
  if (shape.is_leaf(r)) return;
  const std::int32_t left = shape.node(r).left;
  const std::int32_t right = shape.node(r).right;

  StraddleTree aplus_shape = StraddleTree::copy_subtree(shape, left);
  std::vector<V> aplus(aplus_shape.leaf_count(), val_one<V>());
  AuxReservation aux(ctr, aplus.size());

  const TreeRef refs[3] = {{&aplus_shape, 0}, {&shape, left}, {&shape, right}};

  // A+(Y) <- phi^(Y)/phi^(Y∪{x}) when Y∪{x} ∈ ζ, else phi^(Y). The right
  // subtree's leaf for Y∪{x} sits at subtree-τ = Y, so the trees line up.
  ctx.synchronized_search(refs, [&](SubsetMask, std::span<const LeafHit> hits) {
    std::int32_t a = -1, l = -1, rr = -1;
    for (const LeafHit& h : hits) {
      if (h.input == 0)
        a = h.value_slot;
      else if (h.input == 1)
        l = h.value_slot;
      else
        rr = h.value_slot;
    }
    if (a < 0) return;
    if (rr >= 0) {
      aplus[a] = val_div(values[l], values[rr]);
      count_div(ctr);
    } else {
      aplus[a] = values[l];
    }
    count_write(ctr);
  });

  transform2_node(ctx, shape, values, left, ctr);    // minus branch, in place
  transform2_node(ctx, aplus_shape, aplus, 0, ctr);  // plus branch

  // Merge: M(Y) = M-(Y) + M+(Y); M(Y∪{x}) = M+(Y).
  ctx.synchronized_search(refs, [&](SubsetMask, std::span<const LeafHit> hits) {
    std::int32_t a = -1, l = -1, rr = -1;
    for (const LeafHit& h : hits) {
      if (h.input == 0)
        a = h.value_slot;
      else if (h.input == 1)
        l = h.value_slot;
      else
        rr = h.value_slot;
    }
    if (a < 0) return;
    values[l] = val_add(values[l], aplus[a]);
    count_add(ctr);
    count_write(ctr);
    if (rr >= 0) {
      values[rr] = aplus[a];
      count_write(ctr);
    }
  });
}

template <typename V>
std::vector<ValuedTree<V>> make_dual_inputs(std::span<const Potential* const> inputs,
                                            OpCounters* ctr) {
  std::vector<ValuedTree<V>> out;
  out.reserve(inputs.size());
  for (const Potential* p : inputs) {
    ValuedTree<V> vt;
    vt.shape = StraddleTree::power_set(p->scope());
    if constexpr (std::is_same_v<V, double>) {
      vt.values.assign(p->table().begin(), p->table().end());
    } else {
      vt.values.reserve(p->size());
      for (double v : p->table()) vt.values.push_back(mzc_from_real(v));
      count_write(ctr, vt.values.size());
    }
    aux_acquire(ctr, vt.values.size());
    transform1_table(std::span<V>(vt.values), p->scope().size(), ctr);
    out.push_back(std::move(vt));
  }
  return out;
}

template <typename V>
std::vector<Potential> dual_pipeline(std::span<const Potential* const> inputs,
                                     std::span<const Scope> targets, OpCounters* ctr) {
  VarId max_var = 0;
  for (const Potential* p : inputs)
    if (!p->scope().empty()) max_var = std::max(max_var, p->scope().max_var());
  SearchContext ctx(max_var);

  std::vector<ValuedTree<V>> dual_inputs = make_dual_inputs<V>(inputs, ctr);
  std::uint64_t input_entries = 0;
  for (const auto& d : dual_inputs) input_entries += d.values.size();

  std::vector<const StraddleTree*> shapes;
  std::vector<const std::vector<V>*> values;
  for (const auto& d : dual_inputs) {
    shapes.push_back(&d.shape);
    values.push_back(&d.values);
  }
  ValuedTree<V> prod = product_stage<V>(ctx, shapes, values, ctr);
  transform2_node(ctx, prod.shape, prod.values, prod.shape.root(), ctr);

  SparsePotential md;
  md.shape = std::move(prod.shape);
  if constexpr (std::is_same_v<V, double>) {
    md.values = std::move(prod.values);
  } else {
    md.values.reserve(prod.values.size());
    for (const MzcNumber& m : prod.values) md.values.push_back(mzc_to_real(m));
    count_write(ctr, md.values.size());
    aux_acquire(ctr, md.values.size());
    aux_release(ctr, prod.values.size());
  }

  std::vector<Potential> out = marginalise_mduals(ctx, md, targets, ctr);
  for (std::size_t i = 0; i < out.size(); ++i)
    transform3_table(out[i].table(), targets[i].size(), ctr);

  aux_release(ctr, md.values.size());
  aux_release(ctr, input_entries);
  return out;
}

}  // namespace

Potential p_dual_oracle(const Potential& phi) {
  require_positive(phi, "p_dual_oracle");
  const std::uint64_t n = phi.size();
  std::vector<double> out(n);
  for (std::uint64_t y = 0; y < n; ++y) {
    double acc = 1.0;
    // All Z ⊆ Y, multiplying on even |Z| and dividing on odd |Z|.
    std::uint64_t z = y;
    while (true) {
      acc = (std::popcount(z) % 2 == 0) ? acc * phi[z] : acc / phi[z];
      if (z == 0) break;
      z = (z - 1) & y;
    }
    out[y] = acc;
  }
  return Potential(phi.scope(), std::move(out));
}

Potential m_dual_oracle(const Potential& phi) {
  const std::uint64_t n = phi.size();
  const std::uint64_t full = n - 1;
  std::vector<double> out(n, 0.0);
  for (std::uint64_t y = 0; y < n; ++y) {
    double acc = 0.0;
    // All Z ⊇ Y within the scope.
    std::uint64_t rest = full & ~y;
    std::uint64_t t = rest;
    while (true) {
      acc += phi[y | t];
      if (t == 0) break;
      t = (t - 1) & rest;
    }
    out[y] = acc;
  }
  return Potential(phi.scope(), std::move(out));
}

Potential transform1(const Potential& phi, OpCounters* ctr) {
  require_positive(phi, "transform1");
  std::vector<double> t(phi.table().begin(), phi.table().end());
  AuxReservation aux(ctr, t.size());
  transform1_table(std::span<double>(t), phi.scope().size(), ctr);
  return Potential(phi.scope(), std::move(t));
}

Potential transform3(const Potential& mdual, OpCounters* ctr) {
  std::vector<double> t(mdual.table().begin(), mdual.table().end());
  AuxReservation aux(ctr, t.size());
  transform3_table(std::span<double>(t), mdual.scope().size(), ctr);
  return Potential(mdual.scope(), std::move(t));
}

SparsePotential product_of_duals(SearchContext& ctx, std::span<const Potential> duals,
                                 OpCounters* ctr) {
  if (duals.empty()) throw std::invalid_argument("product_of_duals: no inputs");
  std::vector<StraddleTree> shapes;
  shapes.reserve(duals.size());
  for (const Potential& d : duals) shapes.push_back(StraddleTree::power_set(d.scope()));
  std::vector<const StraddleTree*> shape_ptrs;
  std::vector<std::vector<double>> vals;
  vals.reserve(duals.size());
  for (std::size_t i = 0; i < shapes.size(); ++i) {
    shape_ptrs.push_back(&shapes[i]);
    vals.emplace_back(duals[i].table().begin(), duals[i].table().end());
  }
  std::vector<const std::vector<double>*> val_ptrs;
  for (const auto& v : vals) val_ptrs.push_back(&v);
  ValuedTree<double> out = product_stage<double>(ctx, shape_ptrs, val_ptrs, ctr);
  aux_release(ctr, out.values.size());
  return out;
}

void transform2_in_place(SearchContext& ctx, SparsePotential& sp, OpCounters* ctr) {
  transform2_node(ctx, sp.shape, sp.values, sp.shape.root(), ctr);
}

SparsePotential transform2(SearchContext& ctx, SparsePotential sp, OpCounters* ctr) {
  transform2_in_place(ctx, sp, ctr);
  return sp;
}

std::vector<Potential> marginalise_mduals(SearchContext& ctx, const SparsePotential& mdual,
                                          std::span<const Scope> targets, OpCounters* ctr) {
  for (const Scope& d : targets)
    if (mdual.shape.find_leaf(d.full_mask()) == StraddleTree::kNone)
      throw std::invalid_argument("marginalise_mduals: target not covered by the straddle-set");

  std::vector<StraddleTree> shapes;
  std::vector<std::vector<double>> outs;
  shapes.reserve(targets.size());
  outs.reserve(targets.size());
  for (const Scope& d : targets) {
    shapes.push_back(StraddleTree::power_set(d));
    outs.emplace_back(d.table_size(), 0.0);
    aux_acquire(ctr, d.table_size());
  }

  std::vector<TreeRef> refs;
  refs.push_back({&mdual.shape, 0});
  for (const auto& s : shapes) refs.push_back({&s, 0});

  ctx.synchronized_search(refs, [&](SubsetMask, std::span<const LeafHit> hits) {
    double v = 0.0;
    bool have = false;
    for (const LeafHit& h : hits)
      if (h.input == 0) {
        v = mdual.values[h.value_slot];
        have = true;
        break;
      }
    if (!have) return;
    for (const LeafHit& h : hits) {
      if (h.input == 0) continue;
      outs[h.input - 1][h.value_slot] = v;
      count_write(ctr);
    }
  });

  std::vector<Potential> result;
  result.reserve(targets.size());
  for (std::size_t i = 0; i < targets.size(); ++i) {
    aux_release(ctr, outs[i].size());
    result.emplace_back(targets[i], std::move(outs[i]));
  }
  return result;
}

std::vector<Potential> operation2_via_duals(std::span<const Potential> inputs, OpCounters* ctr) {
  std::vector<Scope> targets;
  targets.reserve(inputs.size());
  for (const Potential& p : inputs) targets.push_back(p.scope());
  return operation2_via_duals(inputs, targets, ctr);
}

std::vector<Potential> operation2_via_duals(std::span<const Potential> inputs,
                                            std::span<const Scope> targets, OpCounters* ctr) {
  std::vector<const Potential*> ptrs;
  ptrs.reserve(inputs.size());
  for (const Potential& p : inputs) ptrs.push_back(&p);
  return operation2_via_duals(std::span<const Potential* const>(ptrs), targets, ctr);
}

std::vector<Potential> operation2_via_duals(std::span<const Potential* const> inputs,
                                            std::span<const Scope> targets, OpCounters* ctr) {
  if (inputs.empty()) throw std::invalid_argument("operation2_via_duals: no inputs");
  bool any_zero = false;
  for (const Potential* p : inputs) any_zero = any_zero || p->has_zero_entry();
  return any_zero ? dual_pipeline<MzcNumber>(inputs, targets, ctr)
                  : dual_pipeline<double>(inputs, targets, ctr);
}

}  // namespace jtprop
