#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "jtprop/junction_tree.hpp"
#include "jtprop/potential.hpp"

namespace jtprop::test {

inline double rel_err(double got, double want) {
  double denom = std::max(std::abs(want), 1e-300);
  return std::abs(got - want) / std::max(denom, 1.0e-30);
}

inline double max_rel_err(const Potential& got, const Potential& want) {
  double m = 0;
  for (std::size_t i = 0; i < got.size(); ++i) {
    double denom = std::max(std::abs(want[i]), 1e-300);
    m = std::max(m, std::abs(got[i] - want[i]) / std::max(denom, 1e-30));
  }
  return m;
}

class TestRng {
 public:
  explicit TestRng(std::uint64_t seed) : gen_(seed) {}
  double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }
  double entry(double lo = 0.5, double hi = 2.0) { return lo + (hi - lo) * uniform01(); }
  std::uint64_t below(std::uint64_t n) { return gen_() % n; }

 private:
  std::mt19937_64 gen_;
};

inline Potential random_potential(const Scope& s, TestRng& rng, double zero_prob = 0.0) {
  std::vector<double> t(s.table_size());
  for (double& v : t) v = (zero_prob > 0 && rng.uniform01() < zero_prob) ? 0.0 : rng.entry();
  return Potential(s, std::move(t));
}

inline Scope random_scope(std::uint32_t var_count, std::uint32_t max_size, TestRng& rng) {
  std::uint32_t k = 1 + static_cast<std::uint32_t>(rng.below(std::min(max_size, var_count)));
  std::vector<VarId> vars;
  while (vars.size() < k) {
    VarId v = 1 + static_cast<VarId>(rng.below(var_count));
    if (std::find(vars.begin(), vars.end(), v) == vars.end()) vars.push_back(v);
  }
  return Scope(std::move(vars));
}

inline Factorisation random_factorisation(std::uint32_t var_count, std::uint32_t factor_count,
                                          std::uint32_t max_scope, TestRng& rng,
                                          double zero_prob = 0.0) {
  Factorisation f;
  f.var_count = var_count;
  SubsetMask covered = 0;
  for (std::uint32_t i = 0; i < factor_count; ++i) {
    Scope s = random_scope(var_count, max_scope, rng);
    covered |= s.full_mask();
    f.factors.push_back(random_potential(s, rng, zero_prob));
  }
  for (VarId x = 1; x <= var_count; ++x)
    if (!(covered & var_bit(x))) f.factors.push_back(random_potential(Scope{x}, rng, zero_prob));
  return f;
}

// Independent evaluation of the joint over all labellings: the reference for
// everything. Returns (P(x=0), P(x=1)) per variable; total==0 yields an empty
// vector so callers can reject inconsistent draws.
inline std::vector<std::pair<double, double>> enumerate_marginals(const Factorisation& f) {
  std::vector<double> mass1(f.var_count, 0.0);
  double total = 0.0;
  for (SubsetMask mu = 0; mu < (SubsetMask{1} << f.var_count); ++mu) {
    double w = 1.0;
    for (const Potential& p : f.factors) w *= p[p.scope().index_of_mask(mu)];
    total += w;
    for (VarId x = 1; x <= f.var_count; ++x)
      if (mu & var_bit(x)) mass1[x - 1] += w;
  }
  std::vector<std::pair<double, double>> out;
  if (total <= 0.0) return out;
  for (double m : mass1) out.push_back({(total - m) / total, m / total});
  return out;
}

// Definition-level marginal: sum over all U with U ∩ target = Z.
inline Potential marginal_by_definition(const Potential& phi, const Scope& target) {
  std::vector<double> out(target.table_size(), 0.0);
  for (std::uint64_t u = 0; u < phi.size(); ++u) {
    SubsetMask gm = phi.scope().mask_of_index(u);
    out[target.index_of_mask(gm & target.full_mask())] += phi[u];
  }
  return Potential(target, std::move(out));
}

}  // namespace jtprop::test
