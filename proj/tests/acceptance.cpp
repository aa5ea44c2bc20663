// Acceptance harness: one PASS/FAIL line per criterion, nonzero exit on any
// failure. Run directly or through ctest.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "jtprop/duals.hpp"
#include "jtprop/generate.hpp"
#include "jtprop/mzc.hpp"
#include "jtprop/oracle.hpp"
#include "jtprop/propagation.hpp"
#include "jtprop/search.hpp"
#include "test_util.hpp"

using namespace jtprop;
using namespace jtprop::test;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void fail(const std::string& why) {
    if (pass) detail = why;
    pass = false;
  }
  void require(bool cond, const std::string& why) {
    if (!cond) fail(why);
  }
};

const EngineKind kEngines[] = {EngineKind::ShaferShenoy, EngineKind::Hugin,
                               EngineKind::Arch1Simple, EngineKind::Arch1Cached,
                               EngineKind::Arch2};

const char* engine_name(EngineKind k) {
  switch (k) {
    case EngineKind::ShaferShenoy: return "ss";
    case EngineKind::Hugin: return "hugin";
    case EngineKind::Arch1Simple: return "arch1";
    case EngineKind::Arch1Cached: return "arch1-fast";
    case EngineKind::Arch2: return "arch2";
  }
  return "?";
}

// --- criterion 1: oracle equivalence on 200 random positive instances -------
Outcome criterion1() {
  Outcome out;
  TestRng rng(20240101);
  for (int trial = 0; trial < 200; ++trial) {
    std::uint32_t n = 2 + static_cast<std::uint32_t>(rng.below(11));  // <= 12
    std::uint32_t k = 1 + static_cast<std::uint32_t>(rng.below(8));   // <= 8
    Factorisation f = random_factorisation(n, k, 5, rng);
    MarginalResult oracle = brute_force_marginals(f);
    CompiledModel m = CompiledModel::build(f, std::nullopt);
    for (EngineKind kind : kEngines) {
      PropagationRun run = propagate(m, kind);
      MarginalResult marg = compute_marginals(m, run.messages, MarginalStyle::Stream);
      for (std::size_t i = 0; i < marg.probs.size(); ++i) {
        double e = std::max(rel_err(marg.probs[i].first, oracle.probs[i].first),
                            rel_err(marg.probs[i].second, oracle.probs[i].second));
        if (e > 1e-9)
          out.fail("trial " + std::to_string(trial) + " engine " + engine_name(kind) + " var " +
                   std::to_string(i + 1) + " rel err " + std::to_string(e));
      }
    }
    if (!out.pass) return out;
  }
  out.detail = "200 instances x 5 engines";
  return out;
}

// --- criterion 2: zero handling ---------------------------------------------
Outcome criterion2() {
  Outcome out;
  TestRng rng(20240202);
  const EngineKind kZeroEngines[] = {EngineKind::Hugin, EngineKind::Arch1Cached,
                                     EngineKind::Arch2};
  int accepted = 0;
  int attempts = 0;
  while (accepted < 50 && attempts < 2000) {
    ++attempts;
    std::uint32_t n = 2 + static_cast<std::uint32_t>(rng.below(9));
    std::uint32_t k = 1 + static_cast<std::uint32_t>(rng.below(6));
    Factorisation f = random_factorisation(n, k, 4, rng, 0.2);
    MarginalResult oracle;
    try {
      oracle = brute_force_marginals(f);
    } catch (const std::exception&) {
      continue;  // all-zero joint, rejected
    }
    ++accepted;
    CompiledModel m = CompiledModel::build(f, std::nullopt);
    for (EngineKind kind : kZeroEngines) {
      PropagationRun run = propagate(m, kind);
      MarginalResult marg = compute_marginals(m, run.messages, MarginalStyle::Stream);
      for (std::size_t i = 0; i < marg.probs.size(); ++i) {
        for (auto [got, want] :
             {std::pair{marg.probs[i].first, oracle.probs[i].first},
              std::pair{marg.probs[i].second, oracle.probs[i].second}}) {
          if (want == 0.0) {
            if (got != 0.0)
              out.fail("engine " + std::string(engine_name(kind)) + ": nonzero where oracle is 0");
          } else if (rel_err(got, want) > 1e-9) {
            out.fail("engine " + std::string(engine_name(kind)) + ": rel err " +
                     std::to_string(rel_err(got, want)));
          }
        }
      }
    }
    if (!out.pass) return out;
  }
  out.require(accepted == 50, "could not draw 50 instances with a consistent joint");
  if (out.pass) out.detail = "50 zeroed instances x 3 engines, exact zeros";
  return out;
}

// --- criterion 3: transform suite -------------------------------------------
Outcome criterion3() {
  Outcome out;
  TestRng rng(20240303);
  SearchContext ctx(12);
  for (int trial = 0; trial < 1000; ++trial) {
    std::uint32_t size = static_cast<std::uint32_t>(rng.below(11));  // |X| <= 10
    Scope x = size == 0 ? Scope{} : random_scope(12, size, rng);
    Potential phi = random_potential(x, rng);

    Potential fast = transform1(phi);
    Potential slow = p_dual_oracle(phi);
    if (max_rel_err(fast, slow) > 1e-9) out.fail("transform1 vs oracle");

    // transform2(transform1(phi)) over the full power-set vs the m-dual oracle
    SparsePotential sp;
    sp.shape = StraddleTree::power_set(x);
    sp.values.assign(fast.table().begin(), fast.table().end());
    transform2_in_place(ctx, sp);
    Potential md = m_dual_oracle(phi);
    auto masks = sp.shape.leaf_masks();
    for (std::size_t i = 0; i < masks.size(); ++i)
      if (rel_err(sp.values[i], md[x.index_of_mask(masks[i])]) > 1e-9)
        out.fail("transform2(transform1) vs m-dual oracle");

    // transform3 round trip through the sparse m-dual
    std::vector<double> dense(x.table_size());
    for (std::size_t i = 0; i < masks.size(); ++i)
      dense[x.index_of_mask(masks[i])] = sp.values[i];
    if (max_rel_err(transform3(Potential(x, std::move(dense))), phi) > 1e-9)
      out.fail("transform3 round trip");

    // involution
    if (max_rel_err(p_dual_oracle(slow), phi) > 1e-9) out.fail("p-dual involution");

    // multiplicativity on equal scopes
    Potential psi = random_potential(x, rng);
    Potential dprod = p_dual_oracle(multiply(phi, psi));
    Potential dpsi = p_dual_oracle(psi);
    for (std::size_t i = 0; i < dprod.size(); ++i)
      if (rel_err(dprod[i], slow[i] * dpsi[i]) > 1e-9) out.fail("p-dual multiplicativity");

    if (!out.pass) {
      out.detail += " at trial " + std::to_string(trial);
      return out;
    }
  }
  out.detail = "1000 potentials, |X| <= 10";
  return out;
}

// --- criterion 4: search kernel counts --------------------------------------
Outcome criterion4() {
  Outcome out;
  for (std::uint32_t k = 1; k <= 16; ++k) {
    std::vector<VarId> vars;
    for (std::uint32_t i = 1; i <= k; ++i) vars.push_back(i);
    SearchStats st;
    ghost_search(Scope(vars), [](GhostToken, SubsetMask) {}, &st);
    const std::uint64_t leaves = std::uint64_t{1} << k;
    out.require(st.leaf_steps == leaves, "ghost leaf-step count at |X|=" + std::to_string(k));
    out.require(st.time_steps == leaves + 3 * (leaves - 1),
                "ghost time-step count at |X|=" + std::to_string(k));
  }

  // 2|zeta|-1 vertices for power-set trees and random union trees
  TestRng rng(20240404);
  SearchContext ctx(16);
  for (std::uint32_t k = 0; k <= 12; ++k) {
    std::vector<VarId> vars;
    for (std::uint32_t i = 1; i <= k; ++i) vars.push_back(i);
    auto t = StraddleTree::power_set(Scope(vars));
    out.require(t.vertex_count() == 2 * t.leaf_count() - 1, "power-set vertex count");
  }
  for (int trial = 0; trial < 50; ++trial) {
    std::size_t k = 1 + rng.below(4);
    std::vector<StraddleTree> trees;
    std::set<SubsetMask> uni;
    for (std::size_t i = 0; i < k; ++i) {
      trees.push_back(StraddleTree::power_set(random_scope(12, 5, rng)));
      auto masks = trees.back().leaf_masks();
      uni.insert(masks.begin(), masks.end());
    }
    std::vector<TreeRef> refs;
    for (const auto& t : trees) refs.push_back({&t, 0});
    auto u = ctx.build_union_tree(refs);
    out.require(u.vertex_count() == 2 * uni.size() - 1, "union tree vertex count");
    out.require(ctx.is_clean(), "context clean after build_union_tree");
    ctx.full_search(refs, [](SubsetMask, std::span<const LeafHit>, std::span<const std::int32_t>,
                             const std::vector<std::int32_t>&) {});
    out.require(ctx.is_clean(), "context clean after full_search");
    ctx.synchronized_search(refs, [](SubsetMask, std::span<const LeafHit>) {});
    out.require(ctx.is_clean(), "context clean after synchronized_search");
    if (!out.pass) return out;
  }
  out.detail = "ghost formula |X|=1..16, 2|zeta|-1, clean contexts";
  return out;
}

// --- criteria 5/6/8 share the star instances --------------------------------
struct StarRun {
  std::uint32_t degree;
  CompiledModel model;
  std::size_t center;
  std::vector<PropagationRun> runs;  // indexed like kEngines
};

std::vector<StarRun> run_stars() {
  std::vector<StarRun> out;
  for (std::uint32_t degree : {4u, 16u, 64u}) {
    GeneratedInstance inst = generate_star({16, 2, degree}, 7);
    StarRun sr{degree,
               CompiledModel::build(inst.f, inst.jt, RootStrategy::MaxCardinality, -1,
                                    inst.assignment),
               0,
               {}};
    sr.center = static_cast<std::size_t>(sr.model.rooted.root);
    for (EngineKind kind : kEngines) sr.runs.push_back(propagate(sr.model, kind));
    out.push_back(std::move(sr));
  }
  return out;
}

std::uint64_t center_ops(const StarRun& sr, std::size_t engine_idx) {
  return sr.runs[engine_idx].stats.per_vertex[sr.center].multiplicative_ops();
}

// Counter ratios between degree 64 and degree 16 at the center vertex.
Outcome criterion5(const std::vector<StarRun>& stars) {
  Outcome out;
  const StarRun& d16 = stars[1];
  const StarRun& d64 = stars[2];

  auto ratio = [&](std::size_t engine_idx) {
    return static_cast<double>(center_ops(d64, engine_idx)) /
           static_cast<double>(center_ops(d16, engine_idx));
  };

  double ss = ratio(0);
  double hg = ratio(1);
  double a1 = ratio(2);
  double a2 = ratio(4);
  out.require(ss >= 10.0, "shafer-shenoy ratio " + std::to_string(ss) + " < 10");
  out.require(hg >= 3.0 && hg <= 6.0, "hugin ratio " + std::to_string(hg) + " outside [3,6]");
  out.require(a1 >= 3.0 && a1 <= 6.0, "arch1 ratio " + std::to_string(a1) + " outside [3,6]");
  out.require(a2 <= 2.0, "arch2 ratio " + std::to_string(a2) + " > 2");
  char buf[160];
  std::snprintf(buf, sizeof buf, "center mult+div ratios d64/d16: ss=%.2f hugin=%.2f arch1=%.2f arch2=%.3f",
                ss, hg, a1, a2);
  if (out.pass) out.detail = buf;
  return out;
}

// Space accounting on the same stars.
Outcome criterion6(const std::vector<StarRun>& stars) {
  Outcome out;
  for (const StarRun& sr : stars) {
    const CompiledModel& m = sr.model;

    // Hugin resident entries: sum of clique and separator tables, exactly.
    const PropagationRun& hg = sr.runs[1];
    std::uint64_t want = 0;
    for (const Scope& v : m.jt.vertices) want += v.table_size();
    for (std::size_t e = 0; e < m.jt.edges.size(); ++e) want += m.jt.separator(e).table_size();
    out.require(hg.hugin.has_value() && hg.hugin->resident_entries() == want,
                "hugin resident entries mismatch at degree " + std::to_string(sr.degree));

    // ARCH-2 per-vertex auxiliary bound: 4|C| (sum of separator tables +
    // sum of assigned factor tables).
    const PropagationRun& a2 = sr.runs[4];
    for (std::size_t v = 0; v < m.jt.vertex_count(); ++v) {
      std::uint64_t budget = 0;
      for (std::int32_t h : m.adj[v]) budget += m.separator(static_cast<std::int32_t>(v), h).table_size();
      for (std::int32_t fi : m.factors_at[v]) budget += m.f.factors[fi].size();
      budget *= 4 * m.jt.vertices[v].size();
      out.require(a2.stats.per_vertex[v].peak_aux_entries <= budget,
                  "arch2 aux over budget at vertex " + std::to_string(v) + " degree " +
                      std::to_string(sr.degree));
    }

    // Shafer-Shenoy and ARCH-1: bounded by the largest single output table
    // plus small per-input constants.
    std::uint64_t max_sep = 0;
    for (std::size_t e = 0; e < m.jt.edges.size(); ++e)
      max_sep = std::max<std::uint64_t>(max_sep, m.jt.separator(e).table_size());
    out.require(sr.runs[0].stats.peak_aux() <= max_sep + 16,
                "shafer-shenoy aux exceeds a single message table at degree " +
                    std::to_string(sr.degree));

    std::uint64_t max_out = 0;  // largest operation-2 output table: the factor-scope accumulator
    for (const Potential& p : m.f.factors) max_out = std::max<std::uint64_t>(max_out, p.size());
    for (std::size_t e = 0; e < m.jt.edges.size(); ++e)
      max_out = std::max<std::uint64_t>(max_out, m.jt.separator(e).table_size());
    const std::uint64_t k_max = sr.degree + 1;
    const std::uint64_t slack = 16 * (k_max + 1) + 64;
    out.require(sr.runs[2].stats.peak_aux() <= max_out + slack,
                "arch1 aux over bound at degree " + std::to_string(sr.degree));
    out.require(sr.runs[3].stats.peak_aux() <= max_out + slack,
                "arch1-fast aux over bound at degree " + std::to_string(sr.degree));
  }
  if (out.pass) out.detail = "hugin exact; arch2 within 4|C|(sep+factor) budget; ss/arch1 near one table";
  return out;
}

// --- criterion 7: MZC against real arithmetic -------------------------------
Outcome criterion7() {
  Outcome out;
  const double mags[] = {0.5, 1.0, 2.0};
  const std::int64_t zs[] = {0, 1, 2};
  for (double a : mags)
    for (std::int64_t i : zs)
      for (double b : mags)
        for (std::int64_t j : zs) {
          MzcNumber x{a, i}, y{b, j};
          double rx = mzc_to_real(x), ry = mzc_to_real(y);
          out.require(mzc_to_real(mzc_mul(x, y)) == rx * ry, "product rule");
          out.require(mzc_to_real(mzc_add(x, y)) == rx + ry, "sum rule");
          if (j == 0)
            out.require(mzc_to_real(mzc_div(x, y)) == rx / ry, "division rule, real divisor");
          // division always inverts the product, zeros tracked symbolically
          MzcNumber back = mzc_mul(mzc_div(x, y), y);
          out.require(back.zeros == x.zeros && back.mag == x.mag, "division inverts product");
        }
  if (out.pass) out.detail = "81 magnitude/zero-count combinations";
  return out;
}

// --- criterion 8: cached ARCH-1 equivalence ---------------------------------
Outcome criterion8(const std::vector<StarRun>& stars) {
  Outcome out;
  TestRng rng(20240808);
  for (int trial = 0; trial < 100; ++trial) {
    std::uint32_t n = 2 + static_cast<std::uint32_t>(rng.below(11));
    Factorisation f = random_factorisation(n, 6, 4, rng);
    CompiledModel m = CompiledModel::build(f, std::nullopt);
    PropagationRun simple = arch1(m, Arch1Variant::Simple);
    PropagationRun cached = arch1(m, Arch1Variant::Cached);
    for (auto [a, b] : m.jt.edges) {
      if (max_rel_err(cached.messages.get(a, b), simple.messages.get(a, b)) > 1e-12 ||
          max_rel_err(cached.messages.get(b, a), simple.messages.get(b, a)) > 1e-12) {
        out.fail("message mismatch at trial " + std::to_string(trial));
        return out;
      }
    }
  }
  for (const StarRun& sr : stars) {
    std::uint64_t simple_ops = center_ops(sr, 2);
    std::uint64_t cached_ops = center_ops(sr, 3);
    out.require(cached_ops <= simple_ops,
                "cached center counter " + std::to_string(cached_ops) + " exceeds simple " +
                    std::to_string(simple_ops) + " at degree " + std::to_string(sr.degree));
  }
  if (out.pass) out.detail = "100 instances bit-close; cached counter <= simple on stars";
  return out;
}

}  // namespace

int main() {
  struct Row {
    int id;
    const char* name;
    std::function<Outcome()> run;
  };

  std::vector<StarRun> stars;
  auto ensure_stars = [&]() -> std::vector<StarRun>& {
    if (stars.empty()) stars = run_stars();
    return stars;
  };

  const Row rows[] = {
      {1, "oracle equivalence, 200 random instances", criterion1},
      {2, "zero handling, 50 zeroed instances", criterion2},
      {3, "transform suite, 1000 potentials", criterion3},
      {4, "search kernel counts", criterion4},
      {5, "complexity separation on stars (center 16, sep 2, d=4/16/64)",
       [&] { return criterion5(ensure_stars()); }},
      {6, "space accounting on stars", [&] { return criterion6(ensure_stars()); }},
      {7, "MZC arithmetic rule table", criterion7},
      {8, "ARCH-1 cached-variant equivalence", [&] { return criterion8(ensure_stars()); }},
  };

  bool all = true;
  for (const Row& row : rows) {
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = row.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                  std::chrono::steady_clock::now() - t0)
                  .count();
    std::printf("[criterion %d] %s: %s (%lld ms)%s%s\n", row.id, o.pass ? "PASS" : "FAIL",
                row.name, static_cast<long long>(ms), o.detail.empty() ? "" : " -- ",
                o.detail.c_str());
    all = all && o.pass;
  }
  return all ? 0 : 1;
}
