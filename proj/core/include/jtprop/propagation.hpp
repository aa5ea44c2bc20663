#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "jtprop/counters.hpp"
#include "jtprop/duals.hpp"
#include "jtprop/junction_tree.hpp"
#include "jtprop/potential.hpp"

namespace jtprop {

/// Factorisation + junction tree + factor assignment + rooting, ready to run.
struct CompiledModel {
  Factorisation f;
  JunctionTree jt;
  std::vector<std::int32_t> assignment;               // factor -> vertex
  std::vector<std::vector<std::int32_t>> factors_at;  // vertex -> factor indices
  std::vector<std::vector<std::int32_t>> adj;         // neighbour lists
  RootedTree rooted;

  /// Validates (throwing on any axiom violation), assigns factors and roots
  /// the tree. When no tree is supplied one is constructed heuristically;
  /// when no assignment is supplied each factor goes to the lowest-index
  /// containing vertex.
  static CompiledModel build(Factorisation f, std::optional<JunctionTree> jt,
                             RootStrategy strategy = RootStrategy::MaxCardinality,
                             std::int32_t explicit_root = -1,
                             std::optional<std::vector<std::int32_t>> assignment = std::nullopt);

  Scope separator(std::int32_t a, std::int32_t b) const {
    return jt.vertices[a].intersect(jt.vertices[b]);
  }
};

/// Directed messages of one propagation run.
class MessageStore {
 public:
  MessageStore() = default;
  explicit MessageStore(const JunctionTree& jt);

  bool has(std::int32_t from, std::int32_t to) const { return slot(from, to) != nullptr && slot(from, to)->has_value(); }
  const Potential& get(std::int32_t from, std::int32_t to) const;
  void set(std::int32_t from, std::int32_t to, Potential msg);
  std::size_t count() const;
  std::uint64_t stored_entries() const;

 private:
  const std::optional<Potential>* slot(std::int32_t from, std::int32_t to) const;
  std::optional<Potential>* slot(std::int32_t from, std::int32_t to);

  std::vector<std::vector<std::pair<std::int32_t, std::size_t>>> adj_;  // (neighbour, edge id)
  std::vector<std::optional<Potential>> msgs_;  // 2*edge + (from > to)
};

/// Hugin working tables: one potential per vertex and per separator.
struct HuginState {
  std::vector<Potential> clique;     // Γ_C
  std::vector<Potential> separator;  // Ψ_{C,E} by edge id
  std::uint64_t resident_entries() const;
};

struct PropagationStats {
  std::vector<OpCounters> per_vertex;
  OpCounters totals() const {
    OpCounters t;
    for (const OpCounters& c : per_vertex) t.merge_arith(c);
    return t;
  }
  std::uint64_t peak_aux() const {
    std::uint64_t p = 0;
    for (const OpCounters& c : per_vertex) p = std::max(p, c.peak_aux_entries);
    return p;
  }
};

struct PropagationRun {
  MessageStore messages;
  PropagationStats stats;
  std::optional<HuginState> hugin;
};

/// Streaming marginal of a factored product: h(Z∩W) += ∏ inputs(Z∩D_i) over
/// all Z ⊆ C, using no table beyond the output h.
Potential operation1_stream(const Scope& c, std::span<const Potential> inputs, const Scope& w,
                            OpCounters* ctr = nullptr);
Potential operation1_stream(const Scope& c, std::span<const Potential* const> inputs,
                            const Scope& w, OpCounters* ctr = nullptr);

enum class SimultaneousMethod { Arch1Simple, Arch1Cached, Arch2 };

/// All marginals Ψ_i of ∏ inputs onto each input scope, in one pass.
/// Requires the input scopes to cover c.
std::vector<Potential> operation2_simultaneous(const Scope& c, std::span<const Potential> inputs,
                                               SimultaneousMethod method,
                                               OpCounters* ctr = nullptr);
std::vector<Potential> operation2_simultaneous(const Scope& c,
                                               std::span<const Potential* const> inputs,
                                               SimultaneousMethod method,
                                               OpCounters* ctr = nullptr);

enum class Arch1Variant { Simple, Cached };

PropagationRun shafer_shenoy(const CompiledModel& m);
PropagationRun hugin(const CompiledModel& m);
PropagationRun arch1(const CompiledModel& m, Arch1Variant variant);
PropagationRun arch2(const CompiledModel& m);

enum class EngineKind { ShaferShenoy, Hugin, Arch1Simple, Arch1Cached, Arch2 };
PropagationRun propagate(const CompiledModel& m, EngineKind engine);

enum class MarginalStyle { Stream, Dual };

struct MarginalResult {
  std::vector<Potential> tables;                   // index v-1, scope {v}
  std::vector<std::pair<double, double>> probs;    // normalized (p0, p1)
};

/// Stage 3: every variable's marginal read off at its smallest containing
/// vertex, either by streaming (one pass per variable) or through the dual
/// pipeline with singleton targets (one pass per vertex).
MarginalResult compute_marginals(const CompiledModel& m, const MessageStore& msgs,
                                 MarginalStyle style, OpCounters* ctr = nullptr);

/// Marginals read from calibrated Hugin cliques.
MarginalResult marginals_from_hugin(const CompiledModel& m, const HuginState& st,
                                    OpCounters* ctr = nullptr);

}  // namespace jtprop
