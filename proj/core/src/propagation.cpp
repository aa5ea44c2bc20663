#include "jtprop/propagation.hpp"

#include <algorithm>
#include <bit>
#include <cassert>
#include <cmath>
#include <stdexcept>

#include "jtprop/mzc.hpp"
#include "jtprop/search.hpp"

namespace jtprop {

// ---------------------------------------------------------------------------
// MessageStore

MessageStore::MessageStore(const JunctionTree& jt) {
  adj_.resize(jt.vertex_count());
  for (std::size_t e = 0; e < jt.edges.size(); ++e) {
    auto [a, b] = jt.edges[e];
    adj_[a].push_back({b, e});
    adj_[b].push_back({a, e});
  }
  msgs_.resize(2 * jt.edges.size());
}

const std::optional<Potential>* MessageStore::slot(std::int32_t from, std::int32_t to) const {
  if (from < 0 || from >= static_cast<std::int32_t>(adj_.size())) return nullptr;
  for (auto [nb, e] : adj_[from])
    if (nb == to) return &msgs_[2 * e + (from > to ? 1 : 0)];
  return nullptr;
}

std::optional<Potential>* MessageStore::slot(std::int32_t from, std::int32_t to) {
  return const_cast<std::optional<Potential>*>(
      static_cast<const MessageStore*>(this)->slot(from, to));
}

const Potential& MessageStore::get(std::int32_t from, std::int32_t to) const {
  const auto* s = slot(from, to);
  if (!s || !s->has_value())
    throw std::logic_error("MessageStore: message " + std::to_string(from) + "->" +
                           std::to_string(to) + " not present");
  return **s;
}

void MessageStore::set(std::int32_t from, std::int32_t to, Potential msg) {
  auto* s = slot(from, to);
  if (!s) throw std::logic_error("MessageStore: vertices not adjacent");
  *s = std::move(msg);
}

std::size_t MessageStore::count() const {
  std::size_t c = 0;
  for (const auto& m : msgs_)
    if (m.has_value()) ++c;
  return c;
}

std::uint64_t MessageStore::stored_entries() const {
  std::uint64_t c = 0;
  for (const auto& m : msgs_)
    if (m.has_value()) c += m->size();
  return c;
}

std::uint64_t HuginState::resident_entries() const {
  std::uint64_t c = 0;
  for (const Potential& p : clique) c += p.size();
  for (const Potential& p : separator) c += p.size();
  return c;
}

// ---------------------------------------------------------------------------
// CompiledModel

CompiledModel CompiledModel::build(Factorisation f, std::optional<JunctionTree> jt,
                                   RootStrategy strategy, std::int32_t explicit_root,
                                   std::optional<std::vector<std::int32_t>> assignment) {
  if (f.var_count > kMaxVars) throw std::invalid_argument("too many variables");
  SubsetMask covered = 0;
  for (const Potential& p : f.factors) {
    if (!p.scope().empty() && p.scope().max_var() > f.var_count)
      throw std::invalid_argument("factor scope exceeds the declared variable count");
    covered |= p.scope().full_mask();
  }
  if (f.var_count > 0 && covered != (var_bit(f.var_count) | (var_bit(f.var_count) - 1)))
    throw std::invalid_argument("factor scopes do not cover all variables");

  CompiledModel m;
  m.f = std::move(f);
  m.jt = jt.has_value() ? std::move(*jt) : construct_junction_tree(m.f);
  auto violations = validate(m.jt, m.f);
  if (!violations.empty())
    throw std::invalid_argument("invalid junction tree: " + violations.front().message);
  if (assignment.has_value()) {
    if (assignment->size() != m.f.factors.size())
      throw std::invalid_argument("assignment does not cover every factor");
    for (std::size_t i = 0; i < assignment->size(); ++i) {
      auto v = (*assignment)[i];
      if (v < 0 || v >= static_cast<std::int32_t>(m.jt.vertex_count()))
        throw std::invalid_argument("assignment vertex out of range");
      if (!m.f.factors[i].scope().is_subset_of(m.jt.vertices[v]))
        throw std::invalid_argument("factor " + std::to_string(i) +
                                    " assigned to a vertex that does not contain its scope");
    }
    m.assignment = std::move(*assignment);
  } else {
    m.assignment = assign_factors(m.jt, m.f);
  }
  m.factors_at.assign(m.jt.vertex_count(), {});
  for (std::size_t i = 0; i < m.assignment.size(); ++i)
    m.factors_at[m.assignment[i]].push_back(static_cast<std::int32_t>(i));
  m.adj = m.jt.adjacency();
  m.rooted = root_tree(m.jt, strategy, explicit_root);
  return m;
}

// ---------------------------------------------------------------------------
// Operation kernels

Potential operation1_stream(const Scope& c, std::span<const Potential* const> inputs,
                            const Scope& w, OpCounters* ctr) {
  for (const Potential* p : inputs)
    if (!p->scope().is_subset_of(c))
      throw std::invalid_argument("operation1_stream: input scope not inside C");
  if (!w.is_subset_of(c)) throw std::invalid_argument("operation1_stream: W not inside C");

  std::vector<double> h(w.table_size(), 0.0);
  AuxReservation aux(ctr, h.size());

  std::vector<SubsetProjector> projs;
  projs.reserve(inputs.size());
  for (const Potential* p : inputs) projs.emplace_back(c, p->scope());
  SubsetProjector wproj(c, w);

  const std::uint64_t total = c.table_size();
  const std::size_t k = inputs.size();
  for (std::uint64_t z = 0;;) {
    double prod = 1.0;
    for (std::size_t i = 0; i < k; ++i) prod *= (*inputs[i])[projs[i].current()];
    h[wproj.current()] += prod;
    if (++z == total) break;
    unsigned t = static_cast<unsigned>(std::countr_zero(z));
    for (auto& p : projs) p.advance(t);
    wproj.advance(t);
  }
  count_mul(ctr, k == 0 ? 0 : (k - 1) * total);
  count_add(ctr, total);
  count_write(ctr, total);
  return Potential(w, std::move(h));
}

Potential operation1_stream(const Scope& c, std::span<const Potential> inputs, const Scope& w,
                            OpCounters* ctr) {
  std::vector<const Potential*> ptrs;
  ptrs.reserve(inputs.size());
  for (const Potential& p : inputs) ptrs.push_back(&p);
  return operation1_stream(c, std::span<const Potential* const>(ptrs), w, ctr);
}

namespace {

VarId context_size(const Scope& c) { return c.empty() ? 0 : c.max_var(); }

// Input info-trees plus zeroed accumulator trees, driven by one full-search.
// At every leaf-step the current product is added into each target's live
// accumulator leaf.
std::vector<Potential> simultaneous_simple(const Scope& c,
                                           std::span<const Potential* const> inputs,
                                           std::span<const Scope> targets, OpCounters* ctr) {
  const std::size_t k = inputs.size();
  const std::size_t nt = targets.size();

  std::vector<StraddleTree> shapes;
  shapes.reserve(k + nt);
  for (const Potential* p : inputs) shapes.push_back(StraddleTree::power_set(p->scope()));
  for (const Scope& t : targets) shapes.push_back(StraddleTree::power_set(t));

  std::uint64_t acc_entries = 0;
  std::vector<std::vector<double>> acc(nt);
  for (std::size_t j = 0; j < nt; ++j) {
    acc[j].assign(targets[j].table_size(), 0.0);
    acc_entries += acc[j].size();
  }
  AuxReservation aux(ctr, acc_entries);

  std::vector<TreeRef> refs;
  refs.reserve(k + nt);
  for (const StraddleTree& s : shapes) refs.push_back({&s, 0});

  std::uint64_t muls = 0, adds = 0, writes = 0;
  SearchContext ctx(context_size(c));
  ctx.full_search(refs, [&](SubsetMask, std::span<const LeafHit>, std::span<const std::int32_t>,
                            const std::vector<std::int32_t>& cursor) {
    double alpha = 1.0;
    for (std::size_t i = 0; i < k; ++i) alpha *= (*inputs[i])[cursor[i]];
    for (std::size_t j = 0; j < nt; ++j) acc[j][cursor[k + j]] += alpha;
    muls += k == 0 ? 0 : k - 1;
    adds += nt;
    writes += nt;
  });
  count_mul(ctr, muls);
  count_add(ctr, adds);
  count_write(ctr, writes);

  std::vector<Potential> out;
  out.reserve(nt);
  for (std::size_t j = 0; j < nt; ++j) out.emplace_back(targets[j], std::move(acc[j]));
  return out;
}

// Cached scan: the running product α is maintained by MZC ratio updates for
// the inputs whose leaf changed, β accumulates Σα, and each accumulator leaf
// receives β-δ when its run ends.
std::vector<Potential> simultaneous_cached(const Scope& c,
                                           std::span<const Potential* const> inputs,
                                           std::span<const Scope> targets, OpCounters* ctr) {
  const std::size_t k = inputs.size();
  const std::size_t nt = targets.size();

  std::vector<StraddleTree> shapes;
  shapes.reserve(k + nt);
  for (const Potential* p : inputs) shapes.push_back(StraddleTree::power_set(p->scope()));
  for (const Scope& t : targets) shapes.push_back(StraddleTree::power_set(t));

  std::uint64_t acc_entries = 0;
  std::vector<std::vector<double>> acc(nt);
  for (std::size_t j = 0; j < nt; ++j) {
    acc[j].assign(targets[j].table_size(), 0.0);
    acc_entries += acc[j].size();
  }
  // δ, the previous-leaf cursors, α and β are the cached state.
  AuxReservation aux(ctr, acc_entries + nt + (k + nt) + 2);

  std::vector<TreeRef> refs;
  refs.reserve(k + nt);
  for (const StraddleTree& s : shapes) refs.push_back({&s, 0});

  MzcNumber alpha{1.0, 0};
  double beta = 0.0;
  std::vector<double> delta(nt, 0.0);
  std::vector<std::int32_t> prev_in(k, -1), prev_tg(nt, -1);
  bool first = true;
  std::uint64_t muls = 0, divs = 0, adds = 0, writes = 0;

  SearchContext ctx(context_size(c));
  ctx.full_search(refs, [&](SubsetMask, std::span<const LeafHit>,
                            std::span<const std::int32_t> changed,
                            const std::vector<std::int32_t>& cursor) {
    if (first) {
      first = false;
      alpha = {1.0, 0};
      for (std::size_t i = 0; i < k; ++i)
        alpha = mzc_mul(alpha, mzc_from_real((*inputs[i])[cursor[i]]));
      muls += k == 0 ? 0 : k - 1;
      beta = mzc_to_real(alpha);
      for (std::size_t i = 0; i < k; ++i) prev_in[i] = cursor[i];
      for (std::size_t j = 0; j < nt; ++j) prev_tg[j] = cursor[k + j];
      return;
    }
    for (std::int32_t t : changed) {
      if (t < static_cast<std::int32_t>(k)) continue;
      std::size_t j = t - k;
      acc[j][prev_tg[j]] += beta - delta[j];
      adds += 2;
      writes += 1;
      delta[j] = beta;
      prev_tg[j] = cursor[t];
    }
    for (std::int32_t t : changed) {
      if (t >= static_cast<std::int32_t>(k)) continue;
      alpha = mzc_mul(alpha, mzc_div(mzc_from_real((*inputs[t])[cursor[t]]),
                                     mzc_from_real((*inputs[t])[prev_in[t]])));
      muls += 1;
      divs += 1;
      prev_in[t] = cursor[t];
    }
#ifndef NDEBUG
    {
      MzcNumber direct{1.0, 0};
      for (std::size_t i = 0; i < k; ++i)
        direct = mzc_mul(direct, mzc_from_real((*inputs[i])[cursor[i]]));
      assert(direct.zeros == alpha.zeros);
      assert(std::abs(mzc_to_real(direct) - mzc_to_real(alpha)) <=
             1e-6 * (1.0 + std::abs(mzc_to_real(direct))));
    }
#endif
    beta += mzc_to_real(alpha);
    adds += 1;
  });

  for (std::size_t j = 0; j < nt; ++j) {
    acc[j][prev_tg[j]] += beta - delta[j];
    adds += 2;
    writes += 1;
  }
  count_mul(ctr, muls);
  count_div(ctr, divs);
  count_add(ctr, adds);
  count_write(ctr, writes);

  std::vector<Potential> out;
  out.reserve(nt);
  for (std::size_t j = 0; j < nt; ++j) out.emplace_back(targets[j], std::move(acc[j]));
  return out;
}

std::vector<Potential> simultaneous_marginals(const Scope& c,
                                              std::span<const Potential* const> inputs,
                                              std::span<const Scope> targets,
                                              SimultaneousMethod method, OpCounters* ctr) {
  switch (method) {
    case SimultaneousMethod::Arch1Simple:
      return simultaneous_simple(c, inputs, targets, ctr);
    case SimultaneousMethod::Arch1Cached:
      return simultaneous_cached(c, inputs, targets, ctr);
    case SimultaneousMethod::Arch2:
      return operation2_via_duals(inputs, targets, ctr);
  }
  throw std::logic_error("unknown method");
}

}  // namespace

std::vector<Potential> operation2_simultaneous(const Scope& c,
                                               std::span<const Potential* const> inputs,
                                               SimultaneousMethod method, OpCounters* ctr) {
  SubsetMask u = 0;
  for (const Potential* p : inputs) u |= p->scope().full_mask();
  if (u != c.full_mask())
    throw std::invalid_argument("operation2_simultaneous: input scopes must cover C");
  std::vector<Scope> targets;
  targets.reserve(inputs.size());
  for (const Potential* p : inputs) targets.push_back(p->scope());
  return simultaneous_marginals(c, inputs, targets, method, ctr);
}

std::vector<Potential> operation2_simultaneous(const Scope& c, std::span<const Potential> inputs,
                                               SimultaneousMethod method, OpCounters* ctr) {
  std::vector<const Potential*> ptrs;
  ptrs.reserve(inputs.size());
  for (const Potential& p : inputs) ptrs.push_back(&p);
  return operation2_simultaneous(c, std::span<const Potential* const>(ptrs), method, ctr);
}

// ---------------------------------------------------------------------------
// Engines

namespace {

// big *= small entrywise over scope(small) ⊆ scope(big).
void multiply_into(Potential& big, const Potential& small, OpCounters* ctr) {
  SubsetProjector proj(big.scope(), small.scope());
  const std::uint64_t total = big.size();
  auto t = big.table();
  for (std::uint64_t z = 0;;) {
    t[z] *= small[proj.current()];
    if (++z == total) break;
    proj.advance(static_cast<unsigned>(std::countr_zero(z)));
  }
  count_mul(ctr, total);
  count_write(ctr, total);
}

struct SendPlan {
  std::vector<const Potential*> inputs;
  std::optional<Potential> unit_sep;  // kept alive for the call
  std::optional<Potential> unit_pad;
  std::vector<std::int32_t> child_message_pos;  // input index of each child's message

  std::uint64_t unit_entries() const {
    return (unit_sep ? unit_sep->size() : 0) + (unit_pad ? unit_pad->size() : 0);
  }
};

// Inputs for a message computation at vertex v, assembled into a caller-owned
// plan (the unit potentials live in the plan, so it must stay put). For the
// inward phase the target's separator is represented by an explicit unit
// potential; any part of the vertex scope not covered by factors and messages
// is padded the same way so the simultaneous kernels see a covering family.
void build_send_plan(SendPlan& plan, const CompiledModel& m, const MessageStore& msgs,
                     std::int32_t v, std::int32_t exclude, bool include_unit_sep, const Scope& sep,
                     const std::vector<std::int32_t>* children_order) {
  for (std::int32_t fi : m.factors_at[v]) plan.inputs.push_back(&m.f.factors[fi]);
  for (std::int32_t h : m.adj[v]) {
    if (h == exclude) continue;
    plan.inputs.push_back(&msgs.get(h, v));
  }
  if (include_unit_sep) {
    plan.unit_sep = Potential::unit(sep);
    plan.inputs.push_back(&*plan.unit_sep);
  }
  SubsetMask u = 0;
  for (const Potential* p : plan.inputs) u |= p->scope().full_mask();
  SubsetMask missing = m.jt.vertices[v].full_mask() & ~u;
  if (missing != 0) {
    plan.unit_pad = Potential::unit(Scope::from_mask(missing));
    plan.inputs.push_back(&*plan.unit_pad);
  }
  if (children_order) {
    for (std::int32_t e : *children_order) {
      std::size_t pos = m.factors_at[v].size();
      for (std::int32_t h : m.adj[v]) {
        if (h == exclude) continue;
        if (h == e) break;
        ++pos;
      }
      plan.child_message_pos.push_back(static_cast<std::int32_t>(pos));
    }
  }
}

PropagationRun run_shafer_shenoy(const CompiledModel& m) {
  PropagationRun run;
  run.messages = MessageStore(m.jt);
  run.stats.per_vertex.assign(m.jt.vertex_count(), OpCounters{});

  auto send = [&](std::int32_t v, std::int32_t to) {
    OpCounters* ctr = &run.stats.per_vertex[v];
    Scope sep = m.separator(v, to);
    SendPlan plan;
    build_send_plan(plan, m, run.messages, v, to, /*include_unit_sep=*/true, sep, nullptr);
    AuxReservation aux(ctr, plan.unit_entries());
    run.messages.set(v, to,
                     operation1_stream(m.jt.vertices[v],
                                       std::span<const Potential* const>(plan.inputs), sep, ctr));
  };

  const auto& order = m.rooted.bfs_order;
  for (auto it = order.rbegin(); it != order.rend(); ++it)
    if (*it != m.rooted.root) send(*it, m.rooted.parent[*it]);
  for (std::int32_t v : order)
    for (std::int32_t e : m.rooted.children[v]) send(v, e);
  return run;
}

PropagationRun run_hugin(const CompiledModel& m) {
  PropagationRun run;
  run.messages = MessageStore(m.jt);
  run.stats.per_vertex.assign(m.jt.vertex_count(), OpCounters{});

  HuginState st;
  st.clique.reserve(m.jt.vertex_count());
  for (std::size_t v = 0; v < m.jt.vertex_count(); ++v) {
    Potential g = Potential::unit(m.jt.vertices[v]);
    for (std::int32_t fi : m.factors_at[v])
      multiply_into(g, m.f.factors[fi], &run.stats.per_vertex[v]);
    st.clique.push_back(std::move(g));
  }
  st.separator.reserve(m.jt.edges.size());
  for (std::size_t e = 0; e < m.jt.edges.size(); ++e)
    st.separator.push_back(Potential::unit(m.jt.separator(e)));

  auto edge_of = [&](std::int32_t a, std::int32_t b) -> std::size_t {
    for (std::size_t e = 0; e < m.jt.edges.size(); ++e) {
      auto [x, y] = m.jt.edges[e];
      if ((x == a && y == b) || (x == b && y == a)) return e;
    }
    throw std::logic_error("hugin: vertices not adjacent");
  };

  auto send = [&](std::int32_t v, std::int32_t to) {
    OpCounters* cv = &run.stats.per_vertex[v];
    std::size_t e = edge_of(v, to);
    Potential fresh = marginalize(st.clique[v], st.separator[e].scope(), cv);
    Potential msg = divide(fresh, st.separator[e], cv);
    st.separator[e] = std::move(fresh);
    multiply_into(st.clique[to], msg, &run.stats.per_vertex[to]);
    run.messages.set(v, to, std::move(msg));
  };

  const auto& order = m.rooted.bfs_order;
  for (auto it = order.rbegin(); it != order.rend(); ++it)
    if (*it != m.rooted.root) send(*it, m.rooted.parent[*it]);
  for (std::int32_t v : order)
    for (std::int32_t e : m.rooted.children[v]) send(v, e);

  run.hugin = std::move(st);
  return run;
}

PropagationRun run_arch(const CompiledModel& m, SimultaneousMethod method) {
  PropagationRun run;
  run.messages = MessageStore(m.jt);
  run.stats.per_vertex.assign(m.jt.vertex_count(), OpCounters{});

  const auto& order = m.rooted.bfs_order;

  // Inward: only the parent-separator marginal is needed.
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    std::int32_t v = *it;
    if (v == m.rooted.root) continue;
    std::int32_t parent = m.rooted.parent[v];
    OpCounters* ctr = &run.stats.per_vertex[v];
    Scope sep = m.separator(v, parent);
    SendPlan plan;
    build_send_plan(plan, m, run.messages, v, parent, /*include_unit_sep=*/true, sep, nullptr);
    AuxReservation aux(ctr, plan.unit_entries());
    Scope targets[1] = {sep};
    std::vector<Potential> outs = simultaneous_marginals(
        m.jt.vertices[v], std::span<const Potential* const>(plan.inputs), targets, method, ctr);
    run.messages.set(v, parent, std::move(outs[0]));
  }

  // Outward: all marginals of the full product at once, then one division
  // per child message.
  for (std::int32_t v : order) {
    if (m.rooted.children[v].empty()) continue;
    OpCounters* ctr = &run.stats.per_vertex[v];
    SendPlan plan;
    build_send_plan(plan, m, run.messages, v, /*exclude=*/-1, /*include_unit_sep=*/false, Scope{},
                    &m.rooted.children[v]);
    AuxReservation aux(ctr, plan.unit_entries());
    std::vector<Scope> targets;
    targets.reserve(plan.inputs.size());
    for (const Potential* p : plan.inputs) targets.push_back(p->scope());
    std::vector<Potential> outs = simultaneous_marginals(
        m.jt.vertices[v], std::span<const Potential* const>(plan.inputs), targets, method, ctr);
    for (std::size_t ci = 0; ci < m.rooted.children[v].size(); ++ci) {
      std::int32_t e = m.rooted.children[v][ci];
      const Potential& m_prime = outs[plan.child_message_pos[ci]];
      run.messages.set(v, e, divide(m_prime, run.messages.get(e, v), ctr));
    }
  }
  return run;
}

}  // namespace

PropagationRun shafer_shenoy(const CompiledModel& m) { return run_shafer_shenoy(m); }
PropagationRun hugin(const CompiledModel& m) { return run_hugin(m); }
PropagationRun arch1(const CompiledModel& m, Arch1Variant variant) {
  return run_arch(m, variant == Arch1Variant::Simple ? SimultaneousMethod::Arch1Simple
                                                     : SimultaneousMethod::Arch1Cached);
}
PropagationRun arch2(const CompiledModel& m) { return run_arch(m, SimultaneousMethod::Arch2); }

PropagationRun propagate(const CompiledModel& m, EngineKind engine) {
  switch (engine) {
    case EngineKind::ShaferShenoy: return shafer_shenoy(m);
    case EngineKind::Hugin: return hugin(m);
    case EngineKind::Arch1Simple: return arch1(m, Arch1Variant::Simple);
    case EngineKind::Arch1Cached: return arch1(m, Arch1Variant::Cached);
    case EngineKind::Arch2: return arch2(m);
  }
  throw std::logic_error("unknown engine");
}

// ---------------------------------------------------------------------------
// Marginals

namespace {

std::vector<std::int32_t> host_vertices(const CompiledModel& m) {
  std::vector<std::int32_t> host(m.f.var_count, -1);
  for (VarId x = 1; x <= m.f.var_count; ++x) {
    std::int32_t best = -1;
    for (std::size_t v = 0; v < m.jt.vertex_count(); ++v) {
      if (!m.jt.vertices[v].contains(x)) continue;
      if (best < 0 || m.jt.vertices[v].size() < m.jt.vertices[best].size())
        best = static_cast<std::int32_t>(v);
    }
    host[x - 1] = best;
  }
  return host;
}

}  // namespace

MarginalResult compute_marginals(const CompiledModel& m, const MessageStore& msgs,
                                 MarginalStyle style, OpCounters* ctr) {
  MarginalResult out;
  out.tables.resize(m.f.var_count);
  out.probs.resize(m.f.var_count);

  std::vector<std::int32_t> host = host_vertices(m);
  std::vector<std::vector<VarId>> hosted(m.jt.vertex_count());
  for (VarId x = 1; x <= m.f.var_count; ++x) hosted[host[x - 1]].push_back(x);

  for (std::size_t v = 0; v < m.jt.vertex_count(); ++v) {
    if (hosted[v].empty()) continue;
    SendPlan plan;
    build_send_plan(plan, m, msgs, static_cast<std::int32_t>(v), /*exclude=*/-1,
                    /*include_unit_sep=*/false, Scope{}, nullptr);
    AuxReservation aux(ctr, plan.unit_entries());
    if (style == MarginalStyle::Stream) {
      for (VarId x : hosted[v]) {
        out.tables[x - 1] = operation1_stream(
            m.jt.vertices[v], std::span<const Potential* const>(plan.inputs), Scope{x}, ctr);
      }
    } else {
      std::vector<Scope> targets;
      targets.reserve(hosted[v].size());
      for (VarId x : hosted[v]) targets.push_back(Scope{x});
      std::vector<Potential> outs = operation2_via_duals(
          std::span<const Potential* const>(plan.inputs), targets, ctr);
      for (std::size_t i = 0; i < hosted[v].size(); ++i)
        out.tables[hosted[v][i] - 1] = std::move(outs[i]);
    }
  }
  for (VarId x = 1; x <= m.f.var_count; ++x) out.probs[x - 1] = normalize_marginal(out.tables[x - 1]);
  return out;
}

MarginalResult marginals_from_hugin(const CompiledModel& m, const HuginState& st, OpCounters* ctr) {
  MarginalResult out;
  out.tables.resize(m.f.var_count);
  out.probs.resize(m.f.var_count);
  std::vector<std::int32_t> host = host_vertices(m);
  for (VarId x = 1; x <= m.f.var_count; ++x) {
    out.tables[x - 1] = marginalize(st.clique[host[x - 1]], Scope{x}, ctr);
    out.probs[x - 1] = normalize_marginal(out.tables[x - 1]);
  }
  return out;
}

}  // namespace jtprop
