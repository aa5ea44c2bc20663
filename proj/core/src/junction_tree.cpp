#include "jtprop/junction_tree.hpp"

#include <algorithm>
#include <numeric>
#include <queue>
#include <stdexcept>

namespace jtprop {

std::vector<std::vector<std::int32_t>> JunctionTree::adjacency() const {
  std::vector<std::vector<std::int32_t>> adj(vertices.size());
  for (auto [a, b] : edges) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  return adj;
}

std::size_t JunctionTree::width() const {
  std::size_t w = 0;
  for (const Scope& v : vertices) w = std::max(w, v.size());
  return w;
}

std::vector<JtViolation> validate(const JunctionTree& jt, const Factorisation& f) {
  std::vector<JtViolation> out;
  const std::size_t n = jt.vertex_count();
  if (n == 0) {
    out.push_back({JtViolation::Kind::NotATree, "no vertices"});
    return out;
  }

  // Tree shape: |E| = |V|-1 and connected.
  if (jt.edges.size() != n - 1) {
    out.push_back({JtViolation::Kind::NotATree,
                   "edge count " + std::to_string(jt.edges.size()) + " != vertices-1"});
  }
  for (auto [a, b] : jt.edges)
    if (a < 0 || b < 0 || a >= static_cast<std::int32_t>(n) || b >= static_cast<std::int32_t>(n) ||
        a == b) {
      out.push_back({JtViolation::Kind::NotATree, "edge endpoint out of range"});
      return out;
    }
  {
    auto adj = jt.adjacency();
    std::vector<char> seen(n, 0);
    std::queue<std::int32_t> q;
    q.push(0);
    seen[0] = 1;
    std::size_t reached = 0;
    while (!q.empty()) {
      auto v = q.front();
      q.pop();
      ++reached;
      for (auto w : adj[v])
        if (!seen[w]) {
          seen[w] = 1;
          q.push(w);
        }
    }
    if (reached != n)
      out.push_back({JtViolation::Kind::NotATree, "tree is disconnected"});
  }

  // Coverage of {1..n}.
  SubsetMask covered = 0;
  for (const Scope& v : jt.vertices) covered |= v.full_mask();
  for (VarId x = 1; x <= f.var_count; ++x)
    if (!(covered & var_bit(x)))
      out.push_back({JtViolation::Kind::Coverage,
                     "variable " + std::to_string(x) + " appears in no vertex"});

  // Running intersection: the vertices containing x induce a connected subtree.
  if (jt.edges.size() == n - 1) {
    auto adj = jt.adjacency();
    for (VarId x = 1; x <= f.var_count; ++x) {
      std::vector<std::int32_t> holders;
      for (std::size_t v = 0; v < n; ++v)
        if (jt.vertices[v].contains(x)) holders.push_back(static_cast<std::int32_t>(v));
      if (holders.size() <= 1) continue;
      std::vector<char> seen(n, 0);
      std::queue<std::int32_t> q;
      q.push(holders[0]);
      seen[holders[0]] = 1;
      std::size_t reached = 1;
      while (!q.empty()) {
        auto v = q.front();
        q.pop();
        for (auto w : adj[v]) {
          if (seen[w] || !jt.vertices[w].contains(x)) continue;
          seen[w] = 1;
          ++reached;
          q.push(w);
        }
      }
      if (reached != holders.size())
        out.push_back({JtViolation::Kind::RunningIntersection,
                       "variable " + std::to_string(x) +
                           " does not induce a connected subtree"});
    }
  }

  // Every factor must fit into some vertex.
  for (std::size_t i = 0; i < f.factors.size(); ++i) {
    bool housed = false;
    for (const Scope& v : jt.vertices)
      if (f.factors[i].scope().is_subset_of(v)) {
        housed = true;
        break;
      }
    if (!housed)
      out.push_back({JtViolation::Kind::FactorUnhoused,
                     "factor " + std::to_string(i) + " over " + f.factors[i].scope().to_string() +
                         " fits in no vertex"});
  }
  return out;
}

JunctionTree construct_junction_tree(const Factorisation& f) {
  const std::uint32_t n = f.var_count;
  // Interaction graph over 1..n as adjacency masks.
  std::vector<SubsetMask> adj(n + 1, 0);
  for (const Potential& p : f.factors) {
    SubsetMask m = p.scope().full_mask();
    for (VarId v : p.scope()) adj[v] |= m & ~var_bit(v);
  }

  std::vector<char> eliminated(n + 1, 0);
  std::vector<Scope> cliques;

  auto fill_cost = [&](VarId v) {
    // Pairs of live neighbours of v that are not adjacent.
    std::vector<VarId> nb;
    SubsetMask m = adj[v];
    for (VarId w = 1; w <= n; ++w)
      if ((m & var_bit(w)) && !eliminated[w]) nb.push_back(w);
    std::size_t cost = 0;
    for (std::size_t i = 0; i < nb.size(); ++i)
      for (std::size_t j = i + 1; j < nb.size(); ++j)
        if (!(adj[nb[i]] & var_bit(nb[j]))) ++cost;
    return cost;
  };

  for (std::uint32_t step = 0; step < n; ++step) {
    VarId best = 0;
    std::size_t best_cost = 0;
    for (VarId v = 1; v <= n; ++v) {
      if (eliminated[v]) continue;
      std::size_t c = fill_cost(v);
      if (best == 0 || c < best_cost) {
        best = v;
        best_cost = c;
      }
    }
    // Clique: v plus its live neighbours; then connect the neighbours.
    std::vector<VarId> members{best};
    SubsetMask m = adj[best];
    for (VarId w = 1; w <= n; ++w)
      if ((m & var_bit(w)) && !eliminated[w]) members.push_back(w);
    for (std::size_t i = 1; i < members.size(); ++i)
      for (std::size_t j = i + 1; j < members.size(); ++j) {
        adj[members[i]] |= var_bit(members[j]);
        adj[members[j]] |= var_bit(members[i]);
      }
    eliminated[best] = 1;
    cliques.push_back(Scope(std::move(members)));
  }

  // Drop cliques subsumed by another (keep the first occurrence of equal sets).
  std::vector<Scope> kept;
  for (std::size_t i = 0; i < cliques.size(); ++i) {
    bool subsumed = false;
    for (std::size_t j = 0; j < cliques.size() && !subsumed; ++j) {
      if (i == j) continue;
      if (cliques[i] == cliques[j]) {
        subsumed = j < i;
      } else if (cliques[i].is_subset_of(cliques[j])) {
        subsumed = true;
      }
    }
    if (!subsumed) kept.push_back(cliques[i]);
  }

  JunctionTree jt;
  jt.vertices = std::move(kept);

  // Maximum-separator spanning tree (Kruskal over all pairs; weight 0 pairs
  // still connect disconnected components, giving empty separators).
  struct Cand {
    std::size_t sep;
    std::int32_t a, b;
  };
  std::vector<Cand> cands;
  const auto vcount = static_cast<std::int32_t>(jt.vertices.size());
  for (std::int32_t a = 0; a < vcount; ++a)
    for (std::int32_t b = a + 1; b < vcount; ++b)
      cands.push_back({jt.vertices[a].intersect(jt.vertices[b]).size(), a, b});
  std::stable_sort(cands.begin(), cands.end(), [](const Cand& x, const Cand& y) {
    if (x.sep != y.sep) return x.sep > y.sep;
    if (x.a != y.a) return x.a < y.a;
    return x.b < y.b;
  });
  std::vector<std::int32_t> comp(vcount);
  std::iota(comp.begin(), comp.end(), 0);
  auto find = [&](std::int32_t v) {
    while (comp[v] != v) v = comp[v] = comp[comp[v]];
    return v;
  };
  for (const Cand& c : cands) {
    auto ra = find(c.a), rb = find(c.b);
    if (ra == rb) continue;
    comp[ra] = rb;
    jt.edges.push_back({c.a, c.b});
  }
  return jt;
}

std::vector<std::int32_t> assign_factors(const JunctionTree& jt, const Factorisation& f) {
  std::vector<std::int32_t> out(f.factors.size(), -1);
  for (std::size_t i = 0; i < f.factors.size(); ++i) {
    for (std::size_t v = 0; v < jt.vertex_count(); ++v)
      if (f.factors[i].scope().is_subset_of(jt.vertices[v])) {
        out[i] = static_cast<std::int32_t>(v);
        break;
      }
    if (out[i] < 0)
      throw std::invalid_argument("assign_factors: factor " + std::to_string(i) + " over " +
                                  f.factors[i].scope().to_string() + " fits in no vertex");
  }
  return out;
}

RootedTree root_tree(const JunctionTree& jt, RootStrategy strategy, std::int32_t explicit_root) {
  const auto n = static_cast<std::int32_t>(jt.vertex_count());
  std::int32_t root = 0;
  if (strategy == RootStrategy::Explicit) {
    if (explicit_root < 0 || explicit_root >= n)
      throw std::invalid_argument("root_tree: root index out of range");
    root = explicit_root;
  } else {
    for (std::int32_t v = 1; v < n; ++v)
      if (jt.vertices[v].size() > jt.vertices[root].size()) root = v;
  }

  RootedTree rt;
  rt.root = root;
  rt.parent.assign(n, -1);
  rt.children.assign(n, {});
  auto adj = jt.adjacency();
  std::vector<char> seen(n, 0);
  std::queue<std::int32_t> q;
  q.push(root);
  seen[root] = 1;
  while (!q.empty()) {
    auto v = q.front();
    q.pop();
    rt.bfs_order.push_back(v);
    for (auto w : adj[v]) {
      if (seen[w]) continue;
      seen[w] = 1;
      rt.parent[w] = v;
      rt.children[v].push_back(w);
      q.push(w);
    }
  }
  if (rt.bfs_order.size() != static_cast<std::size_t>(n))
    throw std::invalid_argument("root_tree: edges do not form a connected tree");
  return rt;
}

}  // namespace jtprop
